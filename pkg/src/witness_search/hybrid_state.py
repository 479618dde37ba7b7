"""Classical mediator register coupled to two probe qubits."""

from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np
from witness_search.oracles import partial_trace, validate_density_matrix

from errors import InvalidStateError

PROBABILITY_TOLERANCE = 1e-12
# branches lighter than this are dropped after a step
NEGLIGIBLE_WEIGHT = 1e-15


@dataclass(frozen=True, eq=False)
class Branch:
    probability: float
    label: int
    rho: np.ndarray


@dataclass(frozen=True, eq=False)
class HybridState:
    """Ensemble of (probability, mediator label, rho_AB) branches.

    At most one branch per label is kept: steps act linearly and depend only
    on the label, so same-label branches can be merged without loss.
    """

    d: int
    branches: Tuple[Branch, ...]

    def __post_init__(self):
        if self.d < 1:
            raise InvalidStateError(f"Mediator dimension {self.d} must be positive")
        total = sum(b.probability for b in self.branches)
        if abs(total - 1) > PROBABILITY_TOLERANCE:
            raise InvalidStateError(f"Branch probabilities sum to {total}, not 1")
        for branch in self.branches:
            if not 0 <= branch.label < self.d:
                raise InvalidStateError(
                    f"Mediator label {branch.label} outside 0..{self.d - 1}"
                )
            if branch.probability < -PROBABILITY_TOLERANCE:
                raise InvalidStateError(f"Negative branch weight {branch.probability}")
        self.validate()

    @classmethod
    def from_branches(
        cls, d: int, branches: Iterable[Tuple[float, int, np.ndarray]]
    ) -> "HybridState":
        """Merge branches by label and drop negligible ones."""
        weights: dict = {}
        states: dict = {}
        for probability, label, rho in branches:
            if probability <= NEGLIGIBLE_WEIGHT:
                continue
            weights[label] = weights.get(label, 0.0) + probability
            states[label] = states.get(label, 0) + probability * rho
        total = sum(weights.values())
        merged = tuple(
            Branch(weights[label] / total, label, states[label] / weights[label])
            for label in sorted(weights)
        )
        return cls(d, merged)

    @classmethod
    def product(
        cls, rho_a: np.ndarray, rho_b: np.ndarray, d: int = 2, label: int = 0
    ) -> "HybridState":
        return cls(d, (Branch(1.0, label, np.kron(rho_a, rho_b)),))

    def validate(self) -> "HybridState":
        for branch in self.branches:
            validate_density_matrix(branch.rho)
        return self

    def label_distribution(self) -> np.ndarray:
        distribution = np.zeros(self.d)
        for branch in self.branches:
            distribution[branch.label] += branch.probability
        return distribution


def final_ab_state(s: HybridState) -> np.ndarray:
    """Probability-weighted sum of branch states; the mediator is forgotten."""
    rho = np.zeros((4, 4), dtype=complex)
    for branch in s.branches:
        rho += branch.probability * branch.rho
    return rho


def marginal_a(s: HybridState) -> np.ndarray:
    return partial_trace(final_ab_state(s), keep=[0])


def marginal_b(s: HybridState) -> np.ndarray:
    return partial_trace(final_ab_state(s), keep=[1])
