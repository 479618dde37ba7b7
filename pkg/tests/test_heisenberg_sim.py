import numpy as np
import pytest
from heisenberg_sim.descriptors import DescriptorSet, apply_gate_heisenberg
from heisenberg_sim.gates import (
    Gate,
    bell_gate,
    cnot,
    corrupted,
    cz,
    hadamard,
    identity_gate,
    pauli_y,
    phase_s,
    swap,
    task_entangler,
)
from heisenberg_sim.protocol import (
    correlation,
    evolve,
    example_schedule,
    heisenberg_expectation,
    reduced_state,
    run_protocol,
    schrodinger_state,
)
from heisenberg_sim.verification import (
    REFERENCE_TABLE,
    descriptor_table,
    entanglement_profile,
    format_table,
    verify_descriptor_squares,
    verify_descriptor_table,
    verify_entanglement_onset,
    verify_locality_identity,
    verify_picture_equivalence,
)
from hypothesis import given, settings, strategies as st
from pauli_algebra.matrices import to_matrix
from pauli_algebra.pauli import PauliOperator
from report.verification_report import CheckStatus
from witness_search.oracles import bell_state

from errors import ContractViolation, DimensionError, PreconditionError

# built once so that each gate's conjugation table is computed once
GATE_POOL = (
    hadamard("A"),
    hadamard("M"),
    phase_s("B"),
    cnot("A", "B"),
    cz("M", "B"),
    swap("A", "M"),
    bell_gate("M", "B"),
    task_entangler("B", "M"),
)


def test_descriptor_table_matches_reference(example_trace):
    assert descriptor_table(example_trace) == REFERENCE_TABLE
    assert verify_descriptor_table(example_trace).status == CheckStatus.PASS


def test_formatted_table_has_one_row_per_subsystem(example_trace):
    lines = format_table(descriptor_table(example_trace)).splitlines()

    assert lines[0].split() == ["system", "t0", "t1", "t2"]
    assert [line.split()[0] for line in lines[1:]] == ["A", "M", "B"]
    assert "{q_{zA}q_{xM}, q_{xA}}" in lines[1]


def test_example_trace_passes_every_structural_check(example_trace):
    for entry in (
        verify_picture_equivalence(example_trace),
        verify_locality_identity(example_trace),
        verify_descriptor_squares(example_trace),
        verify_entanglement_onset(example_trace),
    ):
        assert entry.status == CheckStatus.PASS, entry.check_id


def test_picture_equivalence_compares_every_string_at_every_time(example_trace):
    entry = verify_picture_equivalence(example_trace)

    assert entry.payload["observables_compared"] == 3 * 4**3
    assert entry.payload["max_deviation"] < 1e-12


def test_corrupted_schroedinger_side_is_caught(example_trace):
    corrupt = run_protocol([corrupted(g) for g in example_schedule()])

    entry = verify_picture_equivalence(example_trace, corrupt)

    assert entry.status == CheckStatus.FAIL
    assert entry.payload["first_mismatch"]["time"] == 1


def test_entanglement_moves_from_am_to_ab(example_trace):
    profile = entanglement_profile(example_trace)

    np.testing.assert_allclose(profile["AB"], [0.0, 0.0, 0.5], atol=1e-10)
    np.testing.assert_allclose(profile["AM"], [0.0, 0.5, 0.0], atol=1e-10)


def test_final_probe_correlations(example_trace):
    x_a, x_b = PauliOperator.from_label("XII"), PauliOperator.from_label("IIX")
    z_a, z_b = PauliOperator.from_label("ZII"), PauliOperator.from_label("IIZ")

    assert correlation(example_trace, 2, x_a, x_b) == pytest.approx(1.0)
    assert correlation(example_trace, 2, z_a, z_b) == pytest.approx(1.0)
    assert correlation(example_trace, 0, x_a, x_b) == pytest.approx(0.0)


def test_correlation_of_overlapping_observables_is_rejected(example_trace):
    with pytest.raises(PreconditionError):
        correlation(
            example_trace,
            1,
            PauliOperator.from_label("XII"),
            PauliOperator.from_label("XZI"),
        )


def test_time_outside_trace_is_rejected(example_trace):
    with pytest.raises(PreconditionError):
        example_trace.at(3)
    with pytest.raises(PreconditionError):
        schrodinger_state(example_trace, -1)


def test_reduced_state_rejects_repeated_subsystems(example_trace):
    with pytest.raises(DimensionError):
        reduced_state(example_trace, 1, ("A", "A"))


def test_non_unitary_numerators_are_rejected():
    with pytest.raises(ContractViolation):
        Gate("bad", np.ones((8, 8)), 0, frozenset({"A"}))
    with pytest.raises(DimensionError):
        Gate("small", np.eye(4), 0, frozenset({"A"}))


def test_untouched_subsystem_keeps_its_descriptors():
    d = DescriptorSet.initial()

    after = apply_gate_heisenberg(d, hadamard("A"))

    assert after.pair("M") == d.pair("M")
    assert after.pair("B") == d.pair("B")
    assert after.qx("A") == PauliOperator.from_label("ZII")
    assert after.qz("A") == PauliOperator.from_label("XII")


@pytest.mark.parametrize(
    "preparation, bell",
    [
        ([hadamard("A"), hadamard("B")], "phi+"),
        ([pauli_y("A"), hadamard("A"), hadamard("B")], "psi+"),
    ],
)
def test_task_entangler_outputs(preparation, bell):
    trace = run_protocol([task_entangler("A", "M")], preparation=preparation)

    np.testing.assert_allclose(
        reduced_state(trace, 1, ("A", "M")), bell_state(bell), atol=1e-12
    )


@given(st.sampled_from(GATE_POOL), st.sampled_from(["XII", "IYZ", "ZXY", "-iZIX"]))
def test_gate_conjugation_matches_dense_conjugation(gate, label):
    o = PauliOperator.from_label(label)
    u = gate.unitary()

    np.testing.assert_allclose(
        to_matrix(gate.conjugate(o)), u.conj().T @ to_matrix(o) @ u, atol=1e-12
    )


@settings(max_examples=20, deadline=None)
@given(st.lists(st.sampled_from(GATE_POOL), max_size=3))
def test_random_schedules_agree_across_pictures(schedule):
    trace = run_protocol(schedule)

    assert verify_picture_equivalence(trace).status == CheckStatus.PASS
    assert verify_locality_identity(trace).status == CheckStatus.PASS
    assert verify_descriptor_squares(trace).status == CheckStatus.PASS


@settings(max_examples=20, deadline=None)
@given(
    st.lists(st.sampled_from(GATE_POOL), min_size=1, max_size=3),
    st.sampled_from(["ZZI", "XIX", "IYY"]),
)
def test_heisenberg_expectation_matches_state_vector(schedule, label):
    trace = run_protocol(schedule)
    o = PauliOperator.from_label(label)
    t = len(schedule)
    vector = schrodinger_state(trace, t)

    expected = np.vdot(vector, to_matrix(o) @ vector)
    assert heisenberg_expectation(trace, t, o) == pytest.approx(expected, abs=1e-12)


def test_identity_gate_leaves_descriptors_alone():
    d = DescriptorSet.initial()

    after = apply_gate_heisenberg(d, identity_gate())

    for site in ("A", "M", "B"):
        assert after.pair(site) == d.pair(site)


def test_evolve_substitutes_descriptors(example_trace):
    x_a = PauliOperator.from_label("XII")

    assert evolve(example_trace, 2, x_a) == PauliOperator.from_label("ZXI")
    assert evolve(example_trace, 2, x_a) == example_trace.at(2).qx("A")
    assert evolve(example_trace, 0, x_a) == x_a
