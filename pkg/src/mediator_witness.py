"""Command-line front end: the worked example, model checks and the search."""

import argparse
import logging
import re
import sys
from typing import Callable, Dict, Optional

from config import Settings, load_settings
from constructor_model.checker import (
    check_interoperability,
    check_task_tm,
    enumerate_variables,
    is_distinguishable,
    is_information_variable,
    is_information_variable_any_blank,
    is_measurement_possible,
    is_observable,
    is_superinformation_medium,
)
from constructor_model.model import CompositeSubstrate, FiniteTheoryModel, Variable
from constructor_model.nonclassicality import check_nonclassicality
from heisenberg_sim.gates import corrupted
from heisenberg_sim.protocol import example_schedule, run_example_protocol, run_protocol
from heisenberg_sim.verification import (
    descriptor_table,
    format_table,
    verify_descriptor_squares,
    verify_descriptor_table,
    verify_entanglement_onset,
    verify_locality_identity,
    verify_picture_equivalence,
)
from jsonschema import validate
from model_files.loader import ModelDocument, bundled_model, resolve_model
from model_files.schema_loader import get_schema, load_schemas
from report.verification_report import CheckStatus, ReportEntry, VerificationReport
from witness_search.entanglement_report import TSIRELSON_BOUND, EntanglementReport
from witness_search.oracles import werner_threshold
from witness_search.reference import (
    chsh_cross_check,
    mixture_pipeline,
    run_quantum_mediator_reference,
)
from witness_search.search import evaluate_pipeline, search_classical_protocols

from errors import MediatorWitnessError, PreconditionError

logger = logging.getLogger(__name__)

EXIT_USAGE = 2
CLASSICAL_CHSH_BOUND = 2.0
CHSH_SLACK = 1e-8
WERNER_THRESHOLD = 1 / 3


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_+\-]", "_", name)


def _reference_entry(
    check_id: str, reference: EntanglementReport, tolerance: float
) -> ReportEntry:
    passed = (
        abs(reference.negativity - 0.5) <= tolerance
        and abs(reference.chsh - TSIRELSON_BOUND) <= tolerance
    )
    return ReportEntry.from_outcome(
        check_id,
        passed,
        payload=reference.to_payload(),
        metadata={"tolerance": tolerance},
    )


def cmd_example(
    settings: Settings,
    corrupt: bool = False,
    echo: Optional[Callable[[str], None]] = None,
) -> VerificationReport:
    """Descriptor table, picture and locality checks, and conditions 1-3."""
    report = VerificationReport(command="example")
    trace = run_example_protocol()
    if echo:
        echo(format_table(descriptor_table(trace)))

    schrodinger_trace = None
    if corrupt:
        logger.warning("Corrupting the Schroedinger-side gates")
        schrodinger_trace = run_protocol([corrupted(g) for g in example_schedule()])

    report.add(verify_descriptor_table(trace))
    report.add(
        verify_picture_equivalence(
            trace, schrodinger_trace, tolerance=settings.exact_tolerance
        )
    )
    report.add(verify_locality_identity(trace))
    report.add(verify_descriptor_squares(trace))
    report.add(
        verify_entanglement_onset(trace, tolerance=settings.structural_tolerance)
    )

    reference = run_quantum_mediator_reference()
    report.add(
        _reference_entry(
            "example.quantum_reference", reference, settings.optimisation_tolerance
        )
    )

    model = bundled_model("stabilizer_qubit").model
    qubit = model.substrate("qubit")
    x, z = model.variables["X"], model.variables["Z"]
    conditions = check_nonclassicality(
        model, qubit, t=z, v=x, evidence=reference.evidence
    )
    entries = conditions.to_entries("example.nonclassicality")
    entries[0].payload["evidence"] = reference.evidence.to_payload()
    report.extend(entries)

    task_tm = check_task_tm(model, "qubit", "qubit", z, z)
    report.add(
        ReportEntry.from_outcome(
            "example.task_tm",
            task_tm.possible,
            payload={
                "possible": task_tm.possible,
                "naming_discrepancy": task_tm.naming_discrepancy,
            },
        )
    )

    classical = check_nonclassicality(model, qubit, t=z, v=z, evidence=None)
    report.add(
        ReportEntry.from_outcome(
            "example.classical_mediator_rejected",
            not any(o.passed for o in classical.outcomes),
            payload={f"condition_{o.condition}": o.passed for o in classical.outcomes},
        )
    )
    return report


def _verdict_entry(
    check_id: str, compute: Callable[[], bool], expected: Optional[bool]
) -> ReportEntry:
    try:
        verdict = compute()
    except PreconditionError as e:
        return ReportEntry(
            check_id=check_id, status=CheckStatus.NOT_RUN, payload={"reason": str(e)}
        )
    if expected is None:
        return ReportEntry(
            check_id=check_id,
            status=CheckStatus.NOT_APPLICABLE,
            payload={"verdict": verdict},
        )
    return ReportEntry.from_outcome(
        check_id,
        verdict == expected,
        payload={"verdict": verdict, "expected": expected},
    )


def _variable_predicates(
    model: FiniteTheoryModel, variable: Variable
) -> Dict[str, Callable[[], bool]]:
    def information() -> bool:
        if variable.blank is None:
            return is_information_variable_any_blank(variable, model)
        return is_information_variable(variable, model)

    def interoperability() -> bool:
        composite = model.composite_of(variable.substrate, variable.substrate)
        if composite is None or model.doubled(composite.id) is None:
            raise PreconditionError(
                f"Interoperability of {variable.label} needs the composites "
                f"{variable.substrate}^2 and {variable.substrate}^4"
            )
        return check_interoperability(model, variable, variable)

    return {
        "is_information_variable": information,
        "is_distinguishable": lambda: is_distinguishable(variable, model),
        "is_observable": lambda: is_observable(variable, model),
        "is_measurement_possible": lambda: is_measurement_possible(variable, model),
        "interoperability": interoperability,
    }


def _any_superinformation_pair(model: FiniteTheoryModel) -> bool:
    for substrate in model.substrates.values():
        if isinstance(substrate, CompositeSubstrate):
            continue
        variables = enumerate_variables(model, substrate.id)
        for x, z in _disjoint_pairs(variables):
            if is_superinformation_medium(model, x, z):
                logger.info("Superinformation pair: %s, %s", x.label, z.label)
                return True
    return False


def _disjoint_pairs(variables):
    for i, x in enumerate(variables):
        for z in variables[i + 1 :]:
            if x.substrate == z.substrate and x.disjoint(z):
                yield x, z


def cmd_check_model(settings: Settings, name_or_path: str) -> VerificationReport:
    """Every predicate for every declared variable, plus superinformation."""
    document: ModelDocument = resolve_model(name_or_path)
    model = document.model
    prefix = f"model.{_slug(model.name)}"
    report = VerificationReport(command="check-model")

    for name, variable in model.variables.items():
        expected = document.expectations.get(name, {})
        for predicate, compute in _variable_predicates(model, variable).items():
            report.add(
                _verdict_entry(
                    f"{prefix}.{_slug(name)}.{predicate}",
                    compute,
                    expected.get(predicate),
                )
            )

    names = list(model.variables)
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            x, z = model.variables[a], model.variables[b]
            if x.substrate != z.substrate or not x.disjoint(z):
                continue
            expected = document.expectations.get(f"{a}+{b}", {})
            report.add(
                _verdict_entry(
                    f"{prefix}.{_slug(a)}+{_slug(b)}.is_superinformation_medium",
                    lambda x=x, z=z: is_superinformation_medium(model, x, z),
                    expected.get("is_superinformation_medium"),
                )
            )

    report.add(
        _verdict_entry(
            f"{prefix}.superinformation_medium",
            lambda: _any_superinformation_pair(model),
            document.expectations.get("model", {}).get("superinformation_medium"),
        )
    )
    return report


def cmd_search(settings: Settings) -> VerificationReport:
    """Classical-mediator search against the quantum reference and the oracles."""
    report = VerificationReport(command="search")
    summary = search_classical_protocols(
        d=settings.dim,
        grid=settings.grid,
        samples=settings.samples,
        seed=settings.seed,
        steps=settings.steps,
        workers=settings.workers,
        chunk_size=settings.chunk_size,
    )
    budget = summary.budget.as_metadata()
    worst_negativity = summary.worst_negativity
    worst_chsh = summary.worst_chsh
    report.add(
        ReportEntry.from_outcome(
            "search.classical.max_negativity",
            summary.max_negativity <= settings.structural_tolerance,
            payload={
                "max_negativity": summary.max_negativity,
                "pipelines": summary.pipelines,
                "worst_source": worst_negativity.source,
                "worst_index": worst_negativity.index,
            },
            metadata={**budget, "tolerance": settings.structural_tolerance},
        )
    )
    report.add(
        ReportEntry.from_outcome(
            "search.classical.max_chsh",
            summary.max_chsh <= CLASSICAL_CHSH_BOUND + CHSH_SLACK,
            payload={
                "max_chsh": summary.max_chsh,
                "pipelines": summary.pipelines,
                "worst_source": worst_chsh.source,
                "worst_index": worst_chsh.index,
            },
            metadata={**budget, "bound": CLASSICAL_CHSH_BOUND + CHSH_SLACK},
        )
    )

    reference = run_quantum_mediator_reference()
    report.add(
        _reference_entry(
            "search.quantum_reference", reference, settings.optimisation_tolerance
        )
    )

    mixture = evaluate_pipeline(mixture_pipeline())
    report.add(
        ReportEntry.from_outcome(
            "search.mixture_exclusion",
            mixture.negativity <= settings.structural_tolerance
            and mixture.chsh <= CLASSICAL_CHSH_BOUND + CHSH_SLACK,
            payload={"negativity": mixture.negativity, "chsh": mixture.chsh},
        )
    )

    gap = chsh_cross_check(
        states=100, seed=settings.seed, restarts=settings.chsh_restarts
    )
    report.add(
        ReportEntry.from_outcome(
            "search.oracle.chsh_cross_check",
            gap <= settings.optimisation_tolerance,
            payload={"max_gap": gap, "states": 100},
            metadata={"seed": settings.seed, "restarts": settings.chsh_restarts},
        )
    )

    threshold = werner_threshold()
    report.add(
        ReportEntry.from_outcome(
            "search.oracle.werner_threshold",
            abs(threshold - WERNER_THRESHOLD) <= settings.optimisation_tolerance,
            payload={"threshold": threshold, "expected": WERNER_THRESHOLD},
        )
    )
    return report


def emit(report: VerificationReport, output_format: str):
    if output_format == "records":
        schema = get_schema(load_schemas(), "report_record")
        for record, line in zip(report.entries, report.to_records()):
            validate({"command": report.command, **record.to_record()}, schema)
            print(line)
    else:
        print(report.render_text())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=["text", "records"],
        default="text",
        help="Human-readable table or one JSON record per check",
    )
    common.add_argument("--config", type=str, help="Path to JSON configuration file")
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level for diagnostics on stderr",
    )

    parser = argparse.ArgumentParser(
        description="Mediator non-classicality witness toolkit"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    example = commands.add_parser(
        "example", parents=[common], help="Run the entangling-mediator example"
    )
    example.add_argument(
        "--corrupt",
        action="store_true",
        help="Perturb the Schroedinger-side gates (falsification hook)",
    )

    check = commands.add_parser(
        "check-model", parents=[common], help="Check a finite theory model"
    )
    check.add_argument("model", help="Bundled model name or path to a model file")

    search = commands.add_parser(
        "search", parents=[common], help="Search classical-mediator protocols"
    )
    search.add_argument("--dim", type=int, help="Mediator dimension d (2, 3 or 4)")
    search.add_argument("--steps", type=int, help="Alternating local steps (1-4)")
    search.add_argument("--samples", type=int, help="Random pipelines to sample")
    search.add_argument("--seed", type=int, help="Seed of the sample partition")
    search.add_argument("--grid", type=int, help="Grid resolution (0 disables)")
    search.add_argument("--workers", type=int, help="Worker threads")
    search.add_argument("--chunk-size", type=int, help="Pipelines per chunk")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {
        key: getattr(args, key, None)
        for key in ("dim", "steps", "samples", "seed", "grid", "workers", "chunk_size")
    }
    overrides["log_level"] = args.log_level
    try:
        settings = load_settings(args.config, **overrides)
        logging.basicConfig(
            level=settings.log_level.upper(),
            stream=sys.stderr,
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )
        if args.command == "example":
            report = cmd_example(
                settings,
                corrupt=args.corrupt,
                echo=print if args.format == "text" else None,
            )
        elif args.command == "check-model":
            report = cmd_check_model(settings, args.model)
        else:
            report = cmd_search(settings)
    except MediatorWitnessError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    emit(report, args.format)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
