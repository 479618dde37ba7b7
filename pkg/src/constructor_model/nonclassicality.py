"""The three non-classicality conditions for a mediator.

Quantitative evidence (descriptors, conditional states, distances) comes
from simulation; the finite model decides the distinguishability and
superinformation parts.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from constructor_model.checker import (
    is_distinguishable,
    is_maximal_information_variable,
    is_observable,
    is_superinformation_medium,
)
from constructor_model.model import FiniteSubstrate, FiniteTheoryModel, Variable
from report.verification_report import ReportEntry

from errors import PreconditionError, SubstrateMismatchError

logger = logging.getLogger(__name__)

EVIDENCE_TOLERANCE = 1e-10


@dataclass
class NonclassicalityEvidence:
    """What the two-step protocol shows about the mediator and the probes.

    Attributes:
        mediator_descriptors: M's (q_x, q_z) after the first step, one pair
            per probe input.
        mediator_conditional_distance: Trace distance between M's states
            conditioned on the same probe outcome, for the two inputs.
        mediator_sharpness_on_t: |<T>| of M after the first step; 1 means M
            sits in one attribute of T.
        joint_distance: Trace distance between the two final probe states.
        local_marginal_distance: Trace distance between their A marginals.
        correlators: Joint correlators of each final probe state.
    """

    mediator_descriptors: Dict[str, Tuple[str, str]]
    mediator_conditional_distance: float
    mediator_sharpness_on_t: float
    joint_distance: float
    local_marginal_distance: float
    correlators: Dict[str, Dict[str, float]] = field(default_factory=dict)

    @property
    def mediator_descriptors_differ(self) -> bool:
        return len(set(self.mediator_descriptors.values())) > 1

    def to_payload(self) -> dict:
        return {
            "mediator_descriptors": {
                k: list(v) for k, v in self.mediator_descriptors.items()
            },
            "mediator_descriptors_differ": self.mediator_descriptors_differ,
            "mediator_conditional_distance": self.mediator_conditional_distance,
            "mediator_sharpness_on_t": self.mediator_sharpness_on_t,
            "joint_distance": self.joint_distance,
            "local_marginal_distance": self.local_marginal_distance,
            "correlators": self.correlators,
        }


@dataclass
class ConditionOutcome:
    condition: int
    passed: bool
    details: dict = field(default_factory=dict)


@dataclass
class ConditionReport:
    outcomes: List[ConditionOutcome]

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)

    def outcome(self, condition: int) -> ConditionOutcome:
        return next(o for o in self.outcomes if o.condition == condition)

    def to_entries(self, prefix: str = "example.nonclassicality") -> List[ReportEntry]:
        return [
            ReportEntry.from_outcome(
                f"{prefix}.condition_{o.condition}", o.passed, payload=o.details
            )
            for o in self.outcomes
        ]


def _close(value: float, target: float, tolerance: float) -> bool:
    return abs(value - target) <= tolerance


def _condition_1(
    evidence: Optional[NonclassicalityEvidence], tolerance: float
) -> ConditionOutcome:
    if evidence is None:
        return ConditionOutcome(1, False, {"reason": "no entangling evidence"})
    passed = (
        evidence.mediator_descriptors_differ
        and _close(evidence.mediator_conditional_distance, 1.0, tolerance)
        and _close(evidence.joint_distance, 1.0, tolerance)
    )
    return ConditionOutcome(
        1,
        passed,
        {
            "mediator_descriptors_differ": evidence.mediator_descriptors_differ,
            "mediator_conditional_distance": evidence.mediator_conditional_distance,
            "joint_distance": evidence.joint_distance,
        },
    )


def _condition_2(
    model: FiniteTheoryModel,
    t: Variable,
    v: Variable,
    evidence: Optional[NonclassicalityEvidence],
) -> ConditionOutcome:
    details: dict = {"v": v.label, "t": t.label, "disjoint": v.disjoint(t)}
    if not v.disjoint(t):
        return ConditionOutcome(2, False, details)
    union_distinguishable = is_distinguishable(v.union(t), model)
    details["union_distinguishable"] = union_distinguishable
    passed = not union_distinguishable
    if evidence is not None:
        details["mediator_sharpness_on_t"] = evidence.mediator_sharpness_on_t
        passed = passed and evidence.mediator_sharpness_on_t < 1 - EVIDENCE_TOLERANCE
    return ConditionOutcome(2, passed, details)


def _condition_3(
    model: FiniteTheoryModel,
    evidence: Optional[NonclassicalityEvidence],
    probe_observables: Optional[Tuple[Variable, Variable]],
    tolerance: float,
) -> ConditionOutcome:
    if evidence is None:
        return ConditionOutcome(3, False, {"reason": "no entangling evidence"})
    details = {
        "local_marginal_distance": evidence.local_marginal_distance,
        "joint_distance": evidence.joint_distance,
    }
    if probe_observables is None:
        details["reason"] = "no probe observables to test for superinformation"
        return ConditionOutcome(3, False, details)
    x, z = probe_observables
    superinformation = is_superinformation_medium(model, x, z)
    details["probe_superinformation"] = superinformation
    passed = (
        _close(evidence.local_marginal_distance, 0.0, tolerance)
        and _close(evidence.joint_distance, 1.0, tolerance)
        and superinformation
    )
    return ConditionOutcome(3, passed, details)


def check_nonclassicality(
    model: FiniteTheoryModel,
    mediator: FiniteSubstrate,
    t: Variable,
    v: Variable,
    evidence: Optional[NonclassicalityEvidence],
    probe_observables: Optional[Tuple[Variable, Variable]] = None,
    tolerance: float = EVIDENCE_TOLERANCE,
) -> ConditionReport:
    """Evaluate conditions 1-3 for the mediator.

    `probe_observables` defaults to the model's variables named X and Z when
    both are declared. t must be an observable that no larger information
    variable extends. Taking v = t (a classical mediator) is allowed and
    fails the conditions rather than raising.
    """
    for variable in (t, v):
        if variable.substrate != mediator.id:
            raise SubstrateMismatchError(
                f"{variable.label} is not a variable of mediator {mediator.id}"
            )
    if len(v) != len(t):
        raise PreconditionError(
            f"{v.label} has {len(v)} attributes but {t.label} has {len(t)}"
        )
    if not is_observable(t, model):
        raise PreconditionError(f"{t.label} is not an observable of {mediator.id}")
    if not is_maximal_information_variable(t, model):
        raise PreconditionError(
            f"{t.label} is not a maximal information variable of {mediator.id}"
        )
    if probe_observables is None and {"X", "Z"} <= set(model.variables):
        probe_observables = (model.variables["X"], model.variables["Z"])

    report = ConditionReport(
        [
            _condition_1(evidence, tolerance),
            _condition_2(model, t, v, evidence),
            _condition_3(model, evidence, probe_observables, tolerance),
        ]
    )
    verdicts = ", ".join(
        f"{o.condition}={'pass' if o.passed else 'fail'}" for o in report.outcomes
    )
    logger.info("Non-classicality of %s: %s", mediator.id, verdicts)
    return report
