"""The fixed Heisenberg state and exact expectation values against it."""

from dataclasses import dataclass

import numpy as np
from pauli_algebra.coefficients import ZERO, GaussianRational
from pauli_algebra.pauli import PauliOperator

from errors import DimensionError


@dataclass(frozen=True)
class HeisenbergState:
    """rho_H = |0...0><0...0|, the +1 eigenstate of every single-site Z."""

    n: int

    @property
    def reference_vector(self) -> np.ndarray:
        vector = np.zeros(2**self.n, dtype=complex)
        vector[0] = 1.0
        return vector


def expectation(o: PauliOperator, s: HeisenbergState) -> GaussianRational:
    """Tr(o rho_H), exactly.

    <0...0|P|0...0> is 1 when every letter of P is I or Z and 0 otherwise.
    """
    if o.n != s.n:
        raise DimensionError(f"Operator acts on {o.n} sites, state has {s.n}")
    total = ZERO
    for letters, coefficient in o.terms:
        if all(p in "IZ" for p in letters):
            total = total + coefficient
    return total
