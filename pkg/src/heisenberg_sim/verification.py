"""Checks over a ProtocolTrace, each producing one report entry."""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from heisenberg_sim.descriptors import heisenberg_step
from heisenberg_sim.protocol import (
    ProtocolTrace,
    heisenberg_expectation,
    reduced_state,
    schrodinger_state,
)
from pauli_algebra.matrices import string_matrix
from pauli_algebra.pauli import PauliOperator, all_letter_strings, embed, op_mul
from pauli_algebra.render import render
from report.verification_report import ReportEntry
from witness_search.oracles import negativity

logger = logging.getLogger(__name__)

EXACT_TOLERANCE = 1e-12
STRUCTURAL_TOLERANCE = 1e-10

# rows A, M, B; one (q_x, q_z) pair per time t_0, t_1, t_2
REFERENCE_TABLE = (
    (
        "A",
        (
            ("q_{xA}", "q_{zA}"),
            ("q_{zA}q_{xM}", "q_{xA}"),
            ("q_{zA}q_{xM}", "q_{xA}"),
        ),
    ),
    (
        "M",
        (
            ("q_{xM}", "q_{zM}"),
            ("q_{xM}", "q_{zM}q_{xA}"),
            ("q_{xB}", "q_{zB}"),
        ),
    ),
    (
        "B",
        (
            ("q_{xB}", "q_{zB}"),
            ("q_{xB}", "q_{zB}"),
            ("q_{xM}", "q_{zM}q_{xA}"),
        ),
    ),
)

DescriptorRow = Tuple[str, Tuple[Tuple[str, str], ...]]


def descriptor_table(trace: ProtocolTrace) -> Tuple[DescriptorRow, ...]:
    """Symbolic descriptor pairs, one row per subsystem, one column per time."""
    names = trace.site_names
    return tuple(
        (
            site,
            tuple(
                (render(d.qx(site), names), render(d.qz(site), names))
                for d in trace.descriptors
            ),
        )
        for site in names
    )


def reference_table() -> Tuple[DescriptorRow, ...]:
    return REFERENCE_TABLE


def format_table(rows: Sequence[DescriptorRow]) -> str:
    cells = [[site] + [f"{{{qx}, {qz}}}" for qx, qz in pairs] for site, pairs in rows]
    header = ["system"] + [f"t{t}" for t in range(len(cells[0]) - 1)]
    widths = [max(len(r[i]) for r in cells + [header]) for i in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    for row in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
    return "\n".join(lines)


def verify_descriptor_table(trace: ProtocolTrace) -> ReportEntry:
    rows = descriptor_table(trace)
    mismatches = [
        {"system": site, "time": t, "got": list(got), "expected": list(expected)}
        for (site, pairs), (_, reference) in zip(rows, REFERENCE_TABLE)
        for t, (got, expected) in enumerate(zip(pairs, reference))
        if got != expected
    ]
    return ReportEntry.from_outcome(
        "example.descriptor_table",
        not mismatches and len(rows) == len(REFERENCE_TABLE),
        payload={
            "rows": [[site, [list(p) for p in pairs]] for site, pairs in rows],
            "mismatches": mismatches,
        },
    )


def verify_picture_equivalence(
    trace: ProtocolTrace,
    schrodinger_trace: Optional[ProtocolTrace] = None,
    tolerance: float = EXACT_TOLERANCE,
) -> ReportEntry:
    """Compare <P> in both pictures for every Pauli string at every time.

    `schrodinger_trace` supplies the Schroedinger side when it should differ
    from `trace` (falsification runs); by default both come from `trace`.
    """
    reference = schrodinger_trace or trace
    n = len(trace.site_names)
    worst = 0.0
    first_mismatch: Optional[Dict] = None
    compared = 0
    for t in trace.times:
        vector = schrodinger_state(reference, t)
        for letters in all_letter_strings(n):
            bare = PauliOperator.from_terms(n, [(letters, 1)])
            heisenberg = heisenberg_expectation(trace, t, bare)
            schrodinger = complex(np.vdot(vector, string_matrix(letters) @ vector))
            deviation = abs(heisenberg - schrodinger)
            compared += 1
            if deviation > worst:
                worst = deviation
            if deviation > tolerance and first_mismatch is None:
                first_mismatch = {
                    "time": t,
                    "observable": "".join(letters),
                    "heisenberg": heisenberg.real,
                    "schrodinger": schrodinger.real,
                }
    if first_mismatch:
        logger.warning("Picture mismatch: %s", first_mismatch)
    return ReportEntry.from_outcome(
        "example.picture_equivalence",
        first_mismatch is None,
        payload={
            "observables_compared": compared,
            "max_deviation": worst,
            "first_mismatch": first_mismatch or {},
        },
        metadata={"tolerance": tolerance},
    )


def verify_locality_identity(trace: ProtocolTrace) -> ReportEntry:
    """Untouched subsystems keep their descriptors; products are preserved."""
    names = trace.site_names
    n = len(names)
    unchanged: List[Dict] = []
    broken: List[Dict] = []
    for step, gate in enumerate(trace.schedule):
        before, after = trace.descriptors[step], trace.descriptors[step + 1]
        for index, site in enumerate(names):
            if site not in gate.acts_on:
                unchanged.append(
                    {
                        "step": step,
                        "system": site,
                        "unchanged": before.pairs[index] == after.pairs[index],
                    }
                )
            bare = op_mul(
                PauliOperator.from_string(embed("X", index, n)),
                PauliOperator.from_string(embed("Z", index, n)),
            )
            evolved_product = heisenberg_step(bare, before, gate)
            if evolved_product != op_mul(after.qx(site), after.qz(site)):
                broken.append({"step": step, "system": site})
    passed = all(u["unchanged"] for u in unchanged) and not broken
    return ReportEntry.from_outcome(
        "example.locality_identity",
        passed,
        payload={
            "untouched_checked": len(unchanged),
            "untouched_changed": [u for u in unchanged if not u["unchanged"]],
            "product_checks": len(trace.schedule) * n,
            "product_violations": broken,
        },
    )


def verify_descriptor_squares(trace: ProtocolTrace) -> ReportEntry:
    failing = [
        t for t, d in enumerate(trace.descriptors) if not d.squares_are_identity()
    ]
    return ReportEntry.from_outcome(
        "example.descriptor_squares",
        not failing,
        payload={"times_checked": len(trace.descriptors), "failing_times": failing},
    )


def entanglement_profile(trace: ProtocolTrace) -> Dict[str, List[float]]:
    """Negativity of the AB and AM reduced states at every time."""
    return {
        "AB": [negativity(reduced_state(trace, t, ("A", "B"))) for t in trace.times],
        "AM": [negativity(reduced_state(trace, t, ("A", "M"))) for t in trace.times],
    }


def verify_entanglement_onset(
    trace: ProtocolTrace,
    expected_ab: Sequence[float] = (0.0, 0.0, 0.5),
    expected_am_t1: float = 0.5,
    tolerance: float = STRUCTURAL_TOLERANCE,
) -> ReportEntry:
    profile = entanglement_profile(trace)
    ab_ok = len(profile["AB"]) == len(expected_ab) and all(
        abs(got - want) <= tolerance for got, want in zip(profile["AB"], expected_ab)
    )
    am_ok = (
        len(profile["AM"]) > 1 and abs(profile["AM"][1] - expected_am_t1) <= tolerance
    )
    return ReportEntry.from_outcome(
        "example.entanglement_onset",
        ab_ok and am_ok,
        payload={"negativity_ab": profile["AB"], "negativity_am": profile["AM"]},
        metadata={"tolerance": tolerance},
    )
