import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from witness_search.entanglement_report import TSIRELSON_BOUND, pauli_correlators
from witness_search.hybrid_state import (
    Branch,
    HybridState,
    final_ab_state,
    marginal_a,
    marginal_b,
)
from witness_search.instruments import (
    LocalStepA,
    LocalStepB,
    apply_step,
    apply_step_A,
    apply_step_B,
    conditional_flip_step,
    measure_and_record,
    z_copy_step,
)
from witness_search.oracles import (
    bell_state,
    chsh_by_angles,
    chsh_max,
    chsh_value,
    correlation_matrix,
    ket,
    negativity,
    partial_trace,
    projector,
    trace_distance,
    validate_density_matrix,
    werner_state,
    werner_threshold,
)
from witness_search.reference import (
    chsh_cross_check,
    mixture_pipeline,
    run_quantum_mediator_reference,
    run_task_evidence,
    z_copy_flip_pipeline,
)
from witness_search.sampling import (
    bloch_directions,
    grid_pipelines,
    grid_size,
    random_initial_state,
    random_instrument,
)
from witness_search.search import (
    SearchBudget,
    evaluate_pipeline,
    run_pipeline,
    search_classical_protocols,
)

from errors import BudgetError, InvalidInstrumentError, InvalidStateError

PRODUCT = np.kron(projector(ket(1, 0)), projector(ket(1, 1)))


def test_bell_state_figures():
    rho = bell_state("phi+")

    assert negativity(rho) == pytest.approx(0.5, abs=1e-12)
    assert chsh_max(rho) == pytest.approx(TSIRELSON_BOUND, abs=1e-12)


def test_product_state_is_not_entangled():
    assert negativity(PRODUCT) == pytest.approx(0.0, abs=1e-12)
    assert chsh_max(PRODUCT) <= 2 + 1e-12


def test_werner_family():
    assert chsh_max(werner_state(0.5)) == pytest.approx(np.sqrt(2), abs=1e-12)
    assert negativity(werner_state(0.3)) == pytest.approx(0.0, abs=1e-12)
    assert negativity(werner_state(0.5)) > 0
    assert werner_threshold() == pytest.approx(1 / 3, abs=1e-9)


def test_invalid_density_matrices_are_rejected():
    with pytest.raises(InvalidStateError):
        validate_density_matrix(np.eye(4))
    with pytest.raises(InvalidStateError):
        validate_density_matrix(np.diag([1.5, -0.5, 0, 0]))
    with pytest.raises(InvalidStateError):
        negativity(np.eye(2) / 2)
    with pytest.raises(InvalidStateError):
        bell_state("omega")


def test_partial_trace_of_a_bell_state_is_maximally_mixed():
    np.testing.assert_allclose(
        partial_trace(bell_state("psi-"), keep=[0]), np.eye(2) / 2, atol=1e-12
    )
    np.testing.assert_allclose(partial_trace(PRODUCT, keep=[1]), projector(ket(1, 1)))


def test_orthogonal_bell_states_are_perfectly_distinguishable():
    assert trace_distance(bell_state("phi+"), bell_state("psi+")) == pytest.approx(1)


def test_chsh_value_at_the_optimal_settings():
    angles = [0, 0, np.pi / 2, 0, np.pi / 4, 0, np.pi / 4, np.pi]

    assert chsh_value(bell_state("phi+"), angles) == pytest.approx(TSIRELSON_BOUND)


def test_angle_optimisation_reaches_tsirelson():
    rng = np.random.default_rng(3)

    value = chsh_by_angles(bell_state("phi+"), restarts=8, rng=rng)

    assert value == pytest.approx(TSIRELSON_BOUND, abs=1e-6)


def test_hybrid_state_probabilities_must_sum_to_one():
    with pytest.raises(InvalidStateError):
        HybridState(2, (Branch(0.5, 0, PRODUCT),))
    with pytest.raises(InvalidStateError):
        HybridState(2, (Branch(1.0, 2, PRODUCT),))


def test_branch_states_must_be_density_matrices():
    with pytest.raises(InvalidStateError):
        HybridState(2, (Branch(1.0, 0, np.diag([1.5, -0.5, 0, 0])),))
    with pytest.raises(InvalidStateError):
        HybridState(2, (Branch(1.0, 0, 2 * PRODUCT),))


def test_same_label_branches_are_merged():
    s = HybridState.from_branches(2, [(0.25, 1, PRODUCT), (0.75, 1, PRODUCT)])

    assert len(s.branches) == 1
    np.testing.assert_allclose(s.label_distribution(), [0.0, 1.0])


def test_instruments_must_be_trace_preserving():
    with pytest.raises(InvalidInstrumentError):
        LocalStepA(d=1, kraus=(((2 * np.eye(2),),),))
    with pytest.raises(InvalidInstrumentError):
        LocalStepB.from_channels([[np.eye(2)], [np.eye(2)]], update=[0, 2])


def test_steps_only_act_on_their_own_probe():
    s = HybridState.product(projector(ket(1, 0)), projector(ket(1, 0)))

    with pytest.raises(InvalidInstrumentError):
        apply_step_A(s, conditional_flip_step())
    with pytest.raises(InvalidInstrumentError):
        apply_step_B(s, z_copy_step())
    with pytest.raises(InvalidInstrumentError):
        apply_step(s, z_copy_step(3))


def test_z_copy_then_flip_gives_classical_correlation():
    rho = final_ab_state(run_pipeline(z_copy_flip_pipeline()))
    correlators = pauli_correlators(rho)

    assert negativity(rho) == pytest.approx(0.0, abs=1e-12)
    assert correlators["ZZ"] == pytest.approx(1.0)
    assert correlators["XX"] == pytest.approx(0.0, abs=1e-12)


def test_mixture_of_mediator_labels_is_not_entangled():
    result = evaluate_pipeline(mixture_pipeline())
    rho = final_ab_state(run_pipeline(mixture_pipeline()))

    assert result.negativity == pytest.approx(0.0, abs=1e-12)
    assert result.chsh <= 2 + 1e-8
    assert pauli_correlators(rho)["XX"] == pytest.approx(1.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 4]))
def test_local_steps_conserve_probability_and_the_other_marginal(seed, d):
    rng = np.random.default_rng(seed)
    s = random_initial_state(rng, d)
    step_a = random_instrument(rng, d, LocalStepA)
    step_b = random_instrument(rng, d, LocalStepB)

    after_a = apply_step(s, step_a)
    after_b = apply_step(after_a, step_b)

    assert after_b.label_distribution().sum() == pytest.approx(1.0)
    assert np.trace(final_ab_state(after_b)).real == pytest.approx(1.0)
    np.testing.assert_allclose(marginal_b(after_a), marginal_b(s), atol=1e-10)
    np.testing.assert_allclose(marginal_a(after_b), marginal_a(after_a), atol=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_classical_pipelines_stay_separable(seed):
    rng = np.random.default_rng(seed)
    s = random_initial_state(rng, 2)
    for k in range(4):
        step_type = LocalStepA if k % 2 == 0 else LocalStepB
        s = apply_step(s, random_instrument(rng, 2, step_type))

    rho = final_ab_state(s)

    assert negativity(rho) <= 1e-10
    assert chsh_max(rho) <= 2 + 1e-8


def test_grid_enumeration_size():
    assert len(bloch_directions(1)) == 2
    assert grid_size(1) == 16
    assert len(list(grid_pipelines(2, 1, 2))) == 16
    assert [p.index for p in grid_pipelines(2, 1, 2, start=3, stop=5)] == [3, 4]


@pytest.mark.parametrize(
    "budget",
    [
        {"samples": 0},
        {"d": 5},
        {"steps": 0},
        {"steps": 5},
        {"grid": -1},
        {"workers": 0},
        {"chunk_size": 0},
    ],
)
def test_search_budget_limits(budget):
    with pytest.raises(BudgetError):
        SearchBudget(**budget)


def test_small_search_finds_no_entanglement():
    summary = search_classical_protocols(
        d=2, grid=1, samples=30, seed=11, steps=2, chunk_size=8
    )

    assert summary.pipelines == 16 + 30
    assert summary.max_negativity <= 1e-10
    assert summary.max_chsh <= 2 + 1e-8
    assert summary.chunks == list(range(len(summary.chunks)))


def test_search_result_does_not_depend_on_worker_count():
    kwargs = dict(d=3, grid=0, samples=40, seed=5, steps=3, chunk_size=7)

    one = search_classical_protocols(workers=1, **kwargs)
    many = search_classical_protocols(workers=4, **kwargs)

    assert one.max_negativity == many.max_negativity
    assert one.max_chsh == many.max_chsh
    assert one.worst_chsh.index == many.worst_chsh.index
    assert one.pipelines == many.pipelines == 40


def test_search_emits_every_chunk_in_order():
    seen = []

    search_classical_protocols(
        grid=0, samples=20, chunk_size=6, emit_callback=lambda r: seen.append(r.chunk)
    )

    assert seen == [0, 1, 2, 3]


def test_quantum_mediator_reference():
    reference = run_quantum_mediator_reference()

    assert reference.negativity == pytest.approx(0.5, abs=1e-10)
    assert reference.chsh == pytest.approx(TSIRELSON_BOUND, abs=1e-10)
    assert reference.correlators["XX"] == pytest.approx(1.0)
    assert reference.correlators["ZZ"] == pytest.approx(1.0)


def test_task_evidence_from_the_two_probe_inputs():
    evidence = run_task_evidence()

    assert evidence.mediator_descriptors_differ
    assert evidence.mediator_conditional_distance == pytest.approx(1.0)
    assert evidence.joint_distance == pytest.approx(1.0)
    assert evidence.local_marginal_distance == pytest.approx(0.0, abs=1e-10)
    assert evidence.mediator_sharpness_on_t == pytest.approx(0.0, abs=1e-10)
    assert evidence.correlators["e++"]["ZZ"] == pytest.approx(1.0)
    assert evidence.correlators["e-+"]["ZZ"] == pytest.approx(-1.0)
    assert evidence.correlators["e-+"]["XX"] == pytest.approx(1.0)


def test_chsh_oracles_agree_on_random_states():
    assert chsh_cross_check(states=5, seed=1) <= 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("steps", [2, 4])
def test_acceptance_size_search(d, steps):
    summary = search_classical_protocols(
        d=d, grid=2, samples=10000, seed=7, steps=steps, workers=4
    )

    assert summary.pipelines == grid_size(2) + 10000
    assert summary.max_negativity <= 1e-10
    assert summary.max_chsh <= 2 + 1e-8


@pytest.mark.slow
def test_four_state_mediator_stays_classical():
    summary = search_classical_protocols(d=4, grid=2, samples=2000, steps=4)

    assert summary.max_negativity <= 1e-10
    assert summary.max_chsh <= 2 + 1e-8


@pytest.mark.slow
def test_chsh_cross_check_at_full_size():
    started = time.perf_counter()

    gap = chsh_cross_check(states=100, seed=7)

    assert gap <= 1e-6
    assert time.perf_counter() - started < 30


def test_correlation_matrix_of_phi_plus():
    np.testing.assert_allclose(
        correlation_matrix(bell_state("phi+")), np.diag([1, -1, 1]), atol=1e-12
    )


def test_measure_and_record_shifts_the_label_by_the_outcome():
    plus = projector(np.array([1, 1], dtype=complex) / np.sqrt(2))
    s = HybridState.product(plus, projector(ket(1, 0)), d=3)
    step = measure_and_record(3, [projector(ket(1, 0)), projector(ket(0, 1))])

    after = apply_step_A(s, step)

    np.testing.assert_allclose(after.label_distribution(), [0.5, 0.5, 0.0])
    np.testing.assert_allclose(marginal_b(after), marginal_b(s), atol=1e-12)
