"""Protocol traces: a gate schedule and the descriptors it produces."""

import logging
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np
from heisenberg_sim.descriptors import DescriptorSet, apply_gate_heisenberg, substitute
from heisenberg_sim.gates import SITES, Gate, bell_gate, site_index, swap
from pauli_algebra.matrices import string_matrix
from pauli_algebra.pauli import PauliOperator, all_letter_strings, op_mul
from pauli_algebra.state import HeisenbergState, expectation

from errors import DimensionError, PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProtocolTrace:
    """Descriptors at t_0 .. t_len(schedule), one DescriptorSet per time.

    `preparation` gates run before t_0; they turn rho_H into another product
    input while keeping rho_H as the Heisenberg state.
    """

    schedule: Tuple[Gate, ...]
    descriptors: Tuple[DescriptorSet, ...]
    heisenberg_state: HeisenbergState
    preparation: Tuple[Gate, ...] = field(default=())

    @property
    def site_names(self) -> Tuple[str, ...]:
        return self.descriptors[0].site_names

    @property
    def times(self) -> range:
        return range(len(self.descriptors))

    def at(self, t: int) -> DescriptorSet:
        if t not in self.times:
            raise PreconditionError(
                f"Time index {t} outside t_0..t_{len(self.descriptors) - 1}"
            )
        return self.descriptors[t]


def run_protocol(
    schedule: Sequence[Gate],
    preparation: Sequence[Gate] = (),
    site_names: Tuple[str, ...] = SITES,
) -> ProtocolTrace:
    """Evolve the initial descriptors through `preparation` then `schedule`."""
    d = DescriptorSet.initial(site_names)
    for gate in preparation:
        d = apply_gate_heisenberg(d, gate)
    descriptors = [d]
    for gate in schedule:
        d = apply_gate_heisenberg(d, gate)
        descriptors.append(d)
        logger.debug("Applied %s, t_%d reached", gate.name, len(descriptors) - 1)
    return ProtocolTrace(
        schedule=tuple(schedule),
        descriptors=tuple(descriptors),
        heisenberg_state=HeisenbergState(len(site_names)),
        preparation=tuple(preparation),
    )


def example_schedule() -> Tuple[Gate, ...]:
    return (bell_gate("A", "M"), swap("M", "B"))


def run_example_protocol() -> ProtocolTrace:
    """Bell_AM at t_0 -> t_1, then SWAP_MB at t_1 -> t_2, from rho_H."""
    return run_protocol(example_schedule())


def evolve(trace: ProtocolTrace, t: int, o: PauliOperator) -> PauliOperator:
    """Heisenberg image at time t of the bare operator `o`."""
    return substitute(o, trace.at(t))


def heisenberg_expectation(trace: ProtocolTrace, t: int, o: PauliOperator) -> complex:
    return complex(expectation(evolve(trace, t, o), trace.heisenberg_state))


def schrodinger_state(trace: ProtocolTrace, t: int) -> np.ndarray:
    """State vector after the preparation and the first t scheduled gates."""
    trace.at(t)
    vector = trace.heisenberg_state.reference_vector
    for gate in trace.preparation + trace.schedule[:t]:
        vector = gate.unitary() @ vector
    return vector


def correlation(
    trace: ProtocolTrace, t: int, o1: PauliOperator, o2: PauliOperator
) -> float:
    """<o1 o2> at time t for observables on disjoint subsystems."""
    overlap = set(o1.support) & set(o2.support)
    if overlap:
        names = sorted(trace.site_names[i] for i in overlap)
        raise PreconditionError(f"Observables overlap on subsystems {names}")
    return heisenberg_expectation(trace, t, op_mul(o1, o2)).real


def reduced_state(trace: ProtocolTrace, t: int, sites: Sequence[str]) -> np.ndarray:
    """Reduced density matrix of `sites` at time t, in the order given.

    Reconstructed from Heisenberg expectations: rho = 2^-k sum_P <P(t)> P.
    """
    n = len(trace.site_names)
    indices = [site_index(s, trace.site_names) for s in sites]
    if len(set(indices)) != len(indices):
        raise DimensionError(f"Repeated subsystem in {list(sites)}")
    k = len(indices)
    rho = np.zeros((2**k, 2**k), dtype=complex)
    for local in all_letter_strings(k):
        letters = ["I"] * n
        for index, letter in zip(indices, local):
            letters[index] = letter
        bare = PauliOperator.from_terms(n, [(tuple(letters), 1)])
        rho += heisenberg_expectation(trace, t, bare) * string_matrix(local)
    return rho / 2**k
