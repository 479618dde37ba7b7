"""Gates with an exact representation.

A gate's unitary is numerators / sqrt(2)**sqrt2_power, with Gaussian-integer
numerators. Conjugating a Pauli string by such a gate divides by 2**sqrt2_power,
so every Heisenberg-side coefficient stays a Gaussian rational.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import FrozenSet, Sequence, Tuple

import numpy as np
from pauli_algebra.matrices import pauli_decompose, string_matrix
from pauli_algebra.pauli import Letters, PauliOperator, all_letter_strings

from errors import ContractViolation, DimensionError

SITES = ("A", "M", "B")

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PHASE_S = np.array([[1, 0], [0, 1j]], dtype=complex)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


def site_index(site: str, site_names: Sequence[str] = SITES) -> int:
    try:
        return list(site_names).index(site)
    except ValueError:
        raise DimensionError(f"Unknown subsystem {site!r}; expected {site_names}")


def embed_matrix(small: np.ndarray, sites: Sequence[int], n: int) -> np.ndarray:
    """Embed a k-qubit matrix acting on `sites` (in that order) into n qubits."""
    k = len(sites)
    if small.shape != (2**k, 2**k):
        raise DimensionError(f"A {small.shape} matrix cannot act on {k} qubits")
    dim = 2**n
    full = np.zeros((dim, dim), dtype=complex)
    shifts = [n - 1 - s for s in sites]
    for column in range(dim):
        sub_column = 0
        for shift in shifts:
            sub_column = (sub_column << 1) | ((column >> shift) & 1)
        cleared = column
        for shift in shifts:
            cleared &= ~(1 << shift)
        for sub_row in range(2**k):
            value = small[sub_row, sub_column]
            if value == 0:
                continue
            row = cleared
            for position, shift in enumerate(shifts):
                if (sub_row >> (k - 1 - position)) & 1:
                    row |= 1 << shift
            full[row, column] = value
    return full


@dataclass(frozen=True, eq=False)
class Gate:
    """A named exact unitary on the n-site register, acting on `acts_on`."""

    name: str
    numerators: np.ndarray
    sqrt2_power: int
    acts_on: FrozenSet[str]
    site_names: Tuple[str, ...] = SITES

    def __post_init__(self):
        numerators = np.array(self.numerators, dtype=complex)
        numerators.setflags(write=False)
        object.__setattr__(self, "numerators", numerators)
        object.__setattr__(self, "acts_on", frozenset(self.acts_on))
        dim = 2 ** len(self.site_names)
        if numerators.shape != (dim, dim):
            raise DimensionError(
                f"Gate {self.name} has shape {numerators.shape}, expected {dim}x{dim}"
            )
        if not np.array_equal(numerators, np.round(numerators)):
            raise ContractViolation(f"Gate {self.name} numerators are not integral")
        gram = numerators.conj().T @ numerators
        if not np.array_equal(gram, (2**self.sqrt2_power) * np.eye(dim)):
            raise ContractViolation(f"Gate {self.name} is not unitary")

    @property
    def n(self) -> int:
        return len(self.site_names)

    def unitary(self) -> np.ndarray:
        return self.numerators / np.sqrt(2) ** self.sqrt2_power

    def then(self, other: "Gate", name: str = "") -> "Gate":
        """The gate that applies `self` first and `other` second."""
        return Gate(
            name=name or f"{other.name}*{self.name}",
            numerators=other.numerators @ self.numerators,
            sqrt2_power=self.sqrt2_power + other.sqrt2_power,
            acts_on=self.acts_on | other.acts_on,
            site_names=self.site_names,
        )

    @cached_property
    def _conjugation_table(self) -> dict:
        table = {}
        for letters in all_letter_strings(self.n):
            conjugated = (
                self.numerators.conj().T @ string_matrix(letters) @ self.numerators
            )
            table[letters] = pauli_decompose(conjugated, self.sqrt2_power)
        return table

    def conjugate_string(self, letters: Letters) -> PauliOperator:
        """U^dagger P U for a bare letter string P."""
        return self._conjugation_table[tuple(letters)]

    def conjugate(self, o: PauliOperator) -> PauliOperator:
        """U^dagger o U, exactly."""
        if o.n != self.n:
            raise DimensionError(f"Operator acts on {o.n} sites, gate on {self.n}")
        result = PauliOperator.zero(self.n)
        for letters, coefficient in o.terms:
            result = result + self.conjugate_string(letters).scale(coefficient)
        return result


def local_gate(
    name: str,
    small: np.ndarray,
    sites: Sequence[str],
    sqrt2_power: int = 0,
    site_names: Sequence[str] = SITES,
) -> Gate:
    indices = [site_index(s, site_names) for s in sites]
    return Gate(
        name=name,
        numerators=embed_matrix(small, indices, len(site_names)),
        sqrt2_power=sqrt2_power,
        acts_on=frozenset(sites),
        site_names=tuple(site_names),
    )


def identity_gate(site_names: Sequence[str] = SITES) -> Gate:
    dim = 2 ** len(site_names)
    return Gate("id", np.eye(dim), 0, frozenset(), tuple(site_names))


def hadamard(site: str) -> Gate:
    return local_gate(f"H_{site}", HADAMARD, [site], sqrt2_power=1)


def pauli_x(site: str) -> Gate:
    return local_gate(f"X_{site}", PAULI_X, [site])


def pauli_y(site: str) -> Gate:
    return local_gate(f"Y_{site}", PAULI_Y, [site])


def pauli_z(site: str) -> Gate:
    return local_gate(f"Z_{site}", PAULI_Z, [site])


def phase_s(site: str) -> Gate:
    return local_gate(f"S_{site}", PHASE_S, [site])


def cnot(control: str, target: str) -> Gate:
    return local_gate(f"CNOT_{control}{target}", CNOT, [control, target])


def cz(first: str, second: str) -> Gate:
    return local_gate(f"CZ_{first}{second}", CZ, [first, second])


def swap(first: str, second: str) -> Gate:
    return local_gate(f"SWAP_{first}{second}", SWAP, [first, second])


def bell_gate(control: str = "A", target: str = "M") -> Gate:
    """Hadamard on the control followed by CNOT: |00> -> (|00>+|11>)/sqrt2."""
    return hadamard(control).then(cnot(control, target), name=f"Bell_{control}{target}")


def task_entangler(probe: str = "A", mediator: str = "M") -> Gate:
    """Hadamards on both sites followed by CNOT mediator -> probe.

    Maps (x+, z0) to (|00>+|11>)/sqrt2 and (x-, z0) to (|01>+|10>)/sqrt2.
    """
    return (
        hadamard(probe)
        .then(hadamard(mediator))
        .then(cnot(mediator, probe), name=f"T1_{probe}{mediator}")
    )


def corrupted(gate: Gate) -> Gate:
    """A different valid gate under the same name, for falsification runs."""
    sites = sorted(gate.acts_on, key=gate.site_names.index) or list(gate.site_names[:1])
    return gate.then(pauli_z(sites[0]), name=gate.name)
