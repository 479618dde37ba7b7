"""Numeric entanglement oracles for two-qubit density matrices.

Basis ordering is |A> (x) |B>, A the most significant factor. The partial
transpose is always taken over B.
"""

import logging
from typing import Optional, Sequence

import numpy as np
import scipy.linalg
from scipy.optimize import brentq, minimize

from errors import InvalidStateError

logger = logging.getLogger(__name__)

STRUCTURAL_TOLERANCE = 1e-10

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def ket(*amplitudes) -> np.ndarray:
    vector = np.array(amplitudes, dtype=complex)
    return vector / np.linalg.norm(vector)


def projector(vector: np.ndarray) -> np.ndarray:
    return np.outer(vector, vector.conj())


def bell_state(label: str = "phi+") -> np.ndarray:
    """Density matrix of one of the four Bell states."""
    vectors = {
        "phi+": ket(1, 0, 0, 1),
        "phi-": ket(1, 0, 0, -1),
        "psi+": ket(0, 1, 1, 0),
        "psi-": ket(0, 1, -1, 0),
    }
    try:
        return projector(vectors[label])
    except KeyError:
        raise InvalidStateError(f"Unknown Bell state {label!r}")


def validate_density_matrix(
    rho: np.ndarray, dim: Optional[int] = 4, tolerance: float = STRUCTURAL_TOLERANCE
) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"Density matrix must be square, got {rho.shape}")
    if dim is not None and rho.shape != (dim, dim):
        raise InvalidStateError(f"Expected a {dim}x{dim} density matrix")
    if not np.allclose(rho, rho.conj().T, atol=tolerance):
        raise InvalidStateError("Density matrix is not Hermitian")
    trace = np.trace(rho).real
    if abs(trace - 1) > tolerance:
        raise InvalidStateError(f"Density matrix has trace {trace}")
    smallest = scipy.linalg.eigvalsh(rho)[0]
    if smallest < -tolerance:
        raise InvalidStateError(f"Density matrix has eigenvalue {smallest}")
    return rho


def partial_transpose(rho: np.ndarray) -> np.ndarray:
    """Transpose over B of a 4x4 operator."""
    return rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def ppt_min_eigenvalue(rho: np.ndarray) -> float:
    return float(scipy.linalg.eigvalsh(partial_transpose(rho))[0])


def negativity(rho: np.ndarray) -> float:
    """Sum of |negative eigenvalues| of the partial transpose; 0 iff separable."""
    rho = validate_density_matrix(rho)
    eigenvalues = scipy.linalg.eigvalsh(partial_transpose(rho))
    return float(-eigenvalues[eigenvalues < 0].sum())


def partial_trace(
    rho: np.ndarray, keep: Sequence[int], dims: Optional[Sequence[int]] = None
) -> np.ndarray:
    """Reduced state on the subsystems `keep`, in ascending order."""
    if dims is None:
        n = int(round(np.log2(rho.shape[0])))
        dims = [2] * n
    dims = list(dims)
    n = len(dims)
    keep = sorted(keep)
    tensor = rho.reshape(dims + dims)
    # trace out from the highest index down so earlier axis numbers stay valid
    current = n
    for index in reversed(range(n)):
        if index in keep:
            continue
        tensor = np.trace(tensor, axis1=index, axis2=index + current)
        current -= 1
    kept = int(np.prod([dims[i] for i in keep])) if keep else 1
    return tensor.reshape(kept, kept)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    eigenvalues = scipy.linalg.eigvalsh(rho - sigma)
    return float(0.5 * np.abs(eigenvalues).sum())


def correlator(rho: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    return float(np.trace(rho @ np.kron(a, b)).real)


def correlation_matrix(rho: np.ndarray) -> np.ndarray:
    """T_ij = Tr(rho sigma_i (x) sigma_j), i, j over X, Y, Z."""
    return np.array([[correlator(rho, si, sj) for sj in SIGMA] for si in SIGMA])


def chsh_max(rho: np.ndarray) -> float:
    """Maximal CHSH value: 2 sqrt(u1 + u2), u1, u2 the largest eigenvalues of T^T T."""
    rho = validate_density_matrix(rho)
    t = correlation_matrix(rho)
    u = np.sort(scipy.linalg.eigvalsh(t.T @ t))[::-1]
    return float(2 * np.sqrt(max(u[0] + u[1], 0.0)))


def _directions(angles: np.ndarray) -> np.ndarray:
    """Unit vectors for four (theta, phi) pairs, one row per setting."""
    theta, phi = angles[0::2], angles[1::2]
    return np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)],
        axis=1,
    )


def _direction_derivatives(angles: np.ndarray) -> tuple:
    theta, phi = angles[0::2], angles[1::2]
    d_theta = np.stack(
        [np.cos(theta) * np.cos(phi), np.cos(theta) * np.sin(phi), -np.sin(theta)],
        axis=1,
    )
    d_phi = np.stack(
        [-np.sin(theta) * np.sin(phi), np.sin(theta) * np.cos(phi), np.zeros(4)],
        axis=1,
    )
    return d_theta, d_phi


def _chsh_from_correlations(t: np.ndarray, angles: np.ndarray) -> tuple:
    """CHSH value and its gradient in the eight angles, from T alone."""
    a0, a1, b0, b1 = _directions(angles)
    value = a0 @ t @ (b0 + b1) + a1 @ t @ (b0 - b1)
    pulls = np.stack([t @ (b0 + b1), t @ (b0 - b1), t.T @ (a0 + a1), t.T @ (a0 - a1)])
    d_theta, d_phi = _direction_derivatives(angles)
    gradient = np.empty(8)
    gradient[0::2] = np.einsum("ij,ij->i", pulls, d_theta)
    gradient[1::2] = np.einsum("ij,ij->i", pulls, d_phi)
    return float(value), gradient


def chsh_value(rho: np.ndarray, angles: Sequence[float]) -> float:
    """CHSH expression for settings a, a', b, b' given as (theta, phi) pairs."""
    value, _ = _chsh_from_correlations(
        correlation_matrix(rho), np.asarray(angles, dtype=float)
    )
    return value


def _negative_abs_chsh(angles: np.ndarray, t: np.ndarray) -> tuple:
    value, gradient = _chsh_from_correlations(t, angles)
    sign = 1.0 if value >= 0 else -1.0
    return -sign * value, -sign * gradient


def chsh_by_angles(
    rho: np.ndarray,
    restarts: int = 4,
    rng: Optional[np.random.Generator] = None,
    tolerance: float = 1e-8,
) -> float:
    """Direct optimisation of the CHSH expression over measurement angles."""
    rho = validate_density_matrix(rho)
    rng = rng if rng is not None else np.random.default_rng(0)
    t = correlation_matrix(rho)
    best = -np.inf
    for _ in range(restarts):
        start = rng.uniform(0, 2 * np.pi, size=8)
        result = minimize(
            _negative_abs_chsh,
            start,
            args=(t,),
            jac=True,
            method="BFGS",
            options={"gtol": tolerance},
        )
        best = max(best, -result.fun)
    return float(best)


def werner_state(p: float) -> np.ndarray:
    """p |phi+><phi+| + (1 - p) I/4."""
    return p * bell_state("phi+") + (1 - p) * np.eye(4, dtype=complex) / 4


def werner_threshold(xtol: float = 1e-12) -> float:
    """Visibility at which the Werner family stops being PPT."""
    root = brentq(lambda p: ppt_min_eigenvalue(werner_state(p)), 0.0, 1.0, xtol=xtol)
    logger.debug("Werner PPT threshold at p=%.12f", root)
    return float(root)


def haar_state(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    vector = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vector / np.linalg.norm(vector)


def random_density_matrix(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    """Ginibre-distributed mixed state."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
