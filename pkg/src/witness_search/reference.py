"""Reference runs: the quantum mediator, its task evidence, and oracle checks."""

import logging
from typing import Dict, Tuple

import numpy as np
from constructor_model.nonclassicality import NonclassicalityEvidence
from heisenberg_sim.gates import hadamard, pauli_y, swap, task_entangler
from heisenberg_sim.protocol import (
    ProtocolTrace,
    heisenberg_expectation,
    reduced_state,
    run_example_protocol,
    run_protocol,
    schrodinger_state,
)
from pauli_algebra.pauli import PauliOperator
from pauli_algebra.render import render
from witness_search.entanglement_report import EntanglementReport, pauli_correlators
from witness_search.hybrid_state import HybridState
from witness_search.instruments import (
    LocalStepA,
    LocalStepB,
    conditional_flip_step,
    z_copy_step,
)
from witness_search.oracles import (
    chsh_by_angles,
    chsh_max,
    partial_trace,
    projector,
    random_density_matrix,
    trace_distance,
)
from witness_search.sampling import GRID_INITIAL_STATES, Pipeline

logger = logging.getLogger(__name__)

# probe input label -> preparation of A; B always starts in x+
_PROBE_INPUTS = {
    "x+": lambda: [hadamard("A"), hadamard("B")],
    "x-": lambda: [pauli_y("A"), hadamard("A"), hadamard("B")],
}


def run_task_trace(probe_input: str) -> ProtocolTrace:
    """T1 on A+M then T2 (SWAP) on M+B, from A in `probe_input`, M in t0, B in x+."""
    schedule = (task_entangler("A", "M"), swap("M", "B"))
    return run_protocol(schedule, preparation=_PROBE_INPUTS[probe_input]())


def mediator_conditional_state(trace: ProtocolTrace, t: int, outcome: int = 0):
    """M's state at time t given A found in z_outcome."""
    amplitudes = schrodinger_state(trace, t).reshape(2, 2, 2)[outcome]
    amplitudes = amplitudes / np.linalg.norm(amplitudes)
    return partial_trace(projector(amplitudes.ravel()), keep=[0])


def run_task_evidence() -> NonclassicalityEvidence:
    """Evidence for the mediator conditions from the two task runs.

    The x+ run ends in e++ (X and Z correlated), the x- run in e-+ (X
    correlated, Z anti-correlated). Both leave M unsharp in Z after T1.
    """
    traces = {label: run_task_trace(label) for label in _PROBE_INPUTS}
    names = traces["x+"].site_names
    z_m = PauliOperator.from_label("IZI")

    descriptors: Dict[str, Tuple[str, str]] = {}
    conditional = {}
    sharpness = 0.0
    final = {}
    for label, trace in traces.items():
        d = trace.at(1)
        descriptors[label] = (render(d.qx("M"), names), render(d.qz("M"), names))
        conditional[label] = mediator_conditional_state(trace, 1)
        sharpness = max(sharpness, abs(heisenberg_expectation(trace, 1, z_m)))
        final[label] = reduced_state(trace, 2, ("A", "B"))

    evidence = NonclassicalityEvidence(
        mediator_descriptors=descriptors,
        mediator_conditional_distance=trace_distance(
            conditional["x+"], conditional["x-"]
        ),
        mediator_sharpness_on_t=sharpness,
        joint_distance=trace_distance(final["x+"], final["x-"]),
        local_marginal_distance=trace_distance(
            partial_trace(final["x+"], keep=[0]),
            partial_trace(final["x-"], keep=[0]),
        ),
        correlators={
            "e++": pauli_correlators(final["x+"]),
            "e-+": pauli_correlators(final["x-"]),
        },
    )
    logger.debug("Task evidence: %s", evidence.to_payload())
    return evidence


def run_quantum_mediator_reference() -> EntanglementReport:
    """Bell_AM then SWAP_MB with M a qubit; figures of the final AB state."""
    rho = reduced_state(run_example_protocol(), 2, ("A", "B"))
    return EntanglementReport.from_state(rho, evidence=run_task_evidence())


def mixture_pipeline() -> Pipeline:
    """A classical mediator holding an even mixture of t0 and t1.

    Each label phase-flips A and B alike, so the probes end up classically
    correlated in X and never entangled.
    """
    plus = projector(GRID_INITIAL_STATES["x+"])
    initial = HybridState.from_branches(
        2, [(0.5, 0, np.kron(plus, plus)), (0.5, 1, np.kron(plus, plus))]
    )
    z = np.diag([1, -1]).astype(complex)
    identity = np.eye(2, dtype=complex)
    steps = (
        LocalStepA.from_channels([[identity], [z]], update=[0, 1], name="phase A"),
        LocalStepB.from_channels([[identity], [z]], update=[0, 1], name="phase B"),
    )
    return Pipeline(initial=initial, steps=steps, source="mixture", index=0)


def z_copy_flip_pipeline() -> Pipeline:
    """Copy Z_A onto the register, then flip B on t1, from |+>_A |0>_B."""
    initial = HybridState.product(
        projector(GRID_INITIAL_STATES["x+"]), projector(GRID_INITIAL_STATES["z0"])
    )
    steps = (z_copy_step(2), conditional_flip_step(2))
    return Pipeline(initial=initial, steps=steps, source="z-copy", index=0)


def chsh_cross_check(
    states: int = 100, seed: int = 7, restarts: int = 4, tolerance: float = 1e-8
) -> float:
    """Largest gap between the closed-form CHSH value and angle optimisation."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(states):
        rho = random_density_matrix(rng)
        gap = abs(chsh_max(rho) - chsh_by_angles(rho, restarts, rng, tolerance))
        worst = max(worst, gap)
    logger.info("CHSH oracles agree to %.3e over %d states", worst, states)
    return worst
