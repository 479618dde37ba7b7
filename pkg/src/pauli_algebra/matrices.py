"""Dense-matrix views of the Pauli algebra.

The algebra itself never touches floating point; these helpers exist for the
Schroedinger-picture oracle and for exact Pauli decomposition of gates whose
entries are Gaussian integers scaled by a power of two.
"""

import functools
from fractions import Fraction
from typing import Sequence

import numpy as np
from pauli_algebra.coefficients import GaussianRational
from pauli_algebra.pauli import Letters, PauliOperator, all_letter_strings

from errors import ContractViolation

PAULI_MATRICES = {
    "I": np.array([[1, 0], [0, 1]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@functools.lru_cache(maxsize=None)
def string_matrix(letters: Letters) -> np.ndarray:
    matrix = functools.reduce(np.kron, (PAULI_MATRICES[p] for p in letters))
    matrix.setflags(write=False)
    return matrix


def to_matrix(o: PauliOperator) -> np.ndarray:
    matrix = np.zeros((2**o.n, 2**o.n), dtype=complex)
    for letters, coefficient in o.terms:
        matrix = matrix + complex(coefficient) * string_matrix(letters)
    return matrix


def _as_gaussian_integer(value: complex, tolerance: float = 1e-9) -> tuple:
    re, im = round(value.real), round(value.imag)
    if abs(value.real - re) > tolerance or abs(value.imag - im) > tolerance:
        raise ContractViolation(f"Trace {value} is not a Gaussian integer")
    return int(re), int(im)


def pauli_decompose(numerators: np.ndarray, power_of_two: int = 0) -> PauliOperator:
    """Exact Pauli expansion of numerators / 2**power_of_two.

    `numerators` must have Gaussian-integer entries; the coefficient of P is
    Tr(P numerators) / (2**n * 2**power_of_two).
    """
    dim = numerators.shape[0]
    n = dim.bit_length() - 1
    if numerators.shape != (dim, dim) or 2**n != dim:
        raise ContractViolation(f"Matrix of shape {numerators.shape} is not n-qubit")
    denominator = dim * 2**power_of_two
    terms = []
    for letters in all_letter_strings(n):
        re, im = _as_gaussian_integer(np.trace(string_matrix(letters) @ numerators))
        if re or im:
            coefficient = GaussianRational(
                Fraction(re, denominator), Fraction(im, denominator)
            )
            terms.append((letters, coefficient))
    return PauliOperator.from_terms(n, terms)


def pauli_expectations(vector: np.ndarray, strings: Sequence[Letters]) -> dict:
    """<psi|P|psi> for each letter string, computed densely."""
    return {
        letters: complex(np.vdot(vector, string_matrix(letters) @ vector))
        for letters in strings
    }
