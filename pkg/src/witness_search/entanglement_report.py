"""Entanglement figures of merit for a final AB state."""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from witness_search.oracles import SIGMA, chsh_max, correlator, negativity

TSIRELSON_BOUND = 2 * np.sqrt(2)

_LETTERS = ("X", "Y", "Z")


def pauli_correlators(rho: np.ndarray) -> Dict[str, float]:
    """<P_A P_B> for P in X, Y, Z, keyed "XX", "YY", "ZZ"."""
    return {p + p: correlator(rho, s, s) for p, s in zip(_LETTERS, SIGMA)}


@dataclass
class EntanglementReport:
    negativity: float
    chsh: float
    correlators: Dict[str, float] = field(default_factory=dict)
    evidence: Optional[Any] = None

    @classmethod
    def from_state(cls, rho: np.ndarray, evidence: Any = None) -> "EntanglementReport":
        return cls(
            negativity=negativity(rho),
            chsh=chsh_max(rho),
            correlators=pauli_correlators(rho),
            evidence=evidence,
        )

    def to_payload(self) -> dict:
        return {
            "negativity": self.negativity,
            "chsh": self.chsh,
            "correlators": dict(self.correlators),
        }
