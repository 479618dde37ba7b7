"""Local instruments: a probe qubit interacting with the classical register.

`kraus[m][m2]` lists the Kraus operators of the CP map taken when the
register goes from label m to label m2. For every m the maps summed over m2
form a trace-preserving channel.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import ClassVar, Sequence, Tuple

import numpy as np
from witness_search.hybrid_state import HybridState

from errors import InvalidInstrumentError

logger = logging.getLogger(__name__)

INSTRUMENT_TOLERANCE = 1e-10

KrausFamily = Tuple[Tuple[Tuple[np.ndarray, ...], ...], ...]

_IDENTITY = np.eye(2, dtype=complex)


@dataclass(frozen=True, eq=False)
class LocalStep(ABC):
    """Instrument acting on one probe qubit, indexed by register transitions."""

    site: ClassVar[str]

    d: int
    kraus: KrausFamily
    name: str = ""

    def __post_init__(self):
        kraus = tuple(
            tuple(
                tuple(np.asarray(k, dtype=complex) for k in ops) for ops in row
            )
            for row in self.kraus
        )
        object.__setattr__(self, "kraus", kraus)
        if len(kraus) != self.d or any(len(row) != self.d for row in kraus):
            raise InvalidInstrumentError(
                f"Instrument must be indexed by {self.d}x{self.d} label transitions"
            )
        for m, row in enumerate(kraus):
            total = np.zeros((2, 2), dtype=complex)
            for ops in row:
                for k in ops:
                    if k.shape != (2, 2):
                        raise InvalidInstrumentError(
                            f"Kraus operator of shape {k.shape} on a qubit"
                        )
                    total += k.conj().T @ k
            if not np.allclose(total, _IDENTITY, atol=INSTRUMENT_TOLERANCE):
                raise InvalidInstrumentError(
                    f"Instrument {self.name or self.site} is not trace preserving "
                    f"for mediator label {m}"
                )

    @classmethod
    def identity(cls, d: int) -> "LocalStep":
        return cls.from_channels(
            [[_IDENTITY]] * d, update=list(range(d)), name="identity"
        )

    @classmethod
    def from_channels(
        cls,
        channels: Sequence[Sequence[np.ndarray]],
        update: Sequence[int],
        name: str = "",
    ) -> "LocalStep":
        """Label-conditioned channels followed by a deterministic label update."""
        d = len(channels)
        if len(update) != d or any(not 0 <= u < d for u in update):
            raise InvalidInstrumentError(
                f"Update {list(update)} is not total on 0..{d - 1}"
            )
        kraus = tuple(
            tuple(
                tuple(channels[m]) if update[m] == m2 else () for m2 in range(d)
            )
            for m in range(d)
        )
        return cls(d=d, kraus=kraus, name=name)

    @abstractmethod
    def embed(self, k: np.ndarray) -> np.ndarray:
        """Lift a qubit operator to the AB register."""


class LocalStepA(LocalStep):
    site: ClassVar[str] = "A"

    def embed(self, k: np.ndarray) -> np.ndarray:
        return np.kron(k, _IDENTITY)


class LocalStepB(LocalStep):
    site: ClassVar[str] = "B"

    def embed(self, k: np.ndarray) -> np.ndarray:
        return np.kron(_IDENTITY, k)


def apply_step(s: HybridState, step: LocalStep) -> HybridState:
    """Split every branch over the instrument outcomes and renormalise."""
    if step.d != s.d:
        raise InvalidInstrumentError(
            f"Instrument for d={step.d} applied to a d={s.d} mediator"
        )
    branches = []
    for branch in s.branches:
        for label, ops in enumerate(step.kraus[branch.label]):
            if not ops:
                continue
            sigma = np.zeros((4, 4), dtype=complex)
            for k in ops:
                full = step.embed(k)
                sigma += full @ branch.rho @ full.conj().T
            weight = float(np.trace(sigma).real)
            if weight > 0:
                branches.append((branch.probability * weight, label, sigma / weight))
    return HybridState.from_branches(s.d, branches)


def apply_step_A(s: HybridState, step: LocalStepA) -> HybridState:
    if not isinstance(step, LocalStepA):
        raise InvalidInstrumentError(f"Step {step.name!r} does not act on A")
    return apply_step(s, step)


def apply_step_B(s: HybridState, step: LocalStepB) -> HybridState:
    if not isinstance(step, LocalStepB):
        raise InvalidInstrumentError(f"Step {step.name!r} does not act on B")
    return apply_step(s, step)


def measure_and_record(
    d: int, projectors: Sequence[np.ndarray], step_type=LocalStepA, name: str = ""
) -> LocalStep:
    """Measure the probe; outcome k moves label m to (m + k) mod d."""
    kraus = tuple(
        tuple(
            tuple(p for k, p in enumerate(projectors) if (m + k) % d == m2)
            for m2 in range(d)
        )
        for m in range(d)
    )
    return step_type(d=d, kraus=kraus, name=name)


def z_projectors() -> Tuple[np.ndarray, np.ndarray]:
    return (
        np.array([[1, 0], [0, 0]], dtype=complex),
        np.array([[0, 0], [0, 1]], dtype=complex),
    )


def z_copy_step(d: int = 2) -> LocalStepA:
    """Copy A's Z value onto the register: (z0, t0) -> t0, (z1, t0) -> t1."""
    return measure_and_record(d, z_projectors(), LocalStepA, name="copy Z_A")


def conditional_flip_step(d: int = 2) -> LocalStepB:
    """Apply X to B iff the mediator label is odd; labels unchanged."""
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    channels = [[x] if m % 2 else [_IDENTITY] for m in range(d)]
    return LocalStepB.from_channels(channels, update=list(range(d)), name="flip B")
