import json

import pytest
from config import Settings, load_settings
from mediator_witness import cmd_check_model, cmd_example, main
from report.verification_report import CheckStatus, ReportEntry, VerificationReport

from errors import ConfigError

EXAMPLE_CHECKS = [
    "example.descriptor_table",
    "example.picture_equivalence",
    "example.locality_identity",
    "example.descriptor_squares",
    "example.entanglement_onset",
    "example.quantum_reference",
    "example.nonclassicality.condition_1",
    "example.nonclassicality.condition_2",
    "example.nonclassicality.condition_3",
    "example.task_tm",
    "example.classical_mediator_rejected",
]


def records(capsys):
    return [json.loads(line) for line in capsys.readouterr().out.splitlines()]


def test_example_report_lists_every_check(settings):
    report = cmd_example(settings)

    assert [e.check_id for e in report.entries] == EXAMPLE_CHECKS
    assert report.passed
    assert "evidence" in report.get("example.nonclassicality.condition_1").payload


def test_example_records_are_deterministic(capsys):
    assert main(["example", "--format", "records"]) == 0
    first = capsys.readouterr().out
    assert main(["example", "--format", "records"]) == 0
    second = capsys.readouterr().out

    assert first == second
    lines = [json.loads(line) for line in first.splitlines()]
    assert {r["command"] for r in lines} == {"example"}
    assert all(r["status"] == "pass" for r in lines)


def test_example_text_output_shows_the_descriptor_table(capsys):
    assert main(["example"]) == 0

    out = capsys.readouterr().out
    assert "q_{zA}q_{xM}" in out
    assert "all checks passed" in out


def test_corrupted_example_fails(capsys):
    assert main(["example", "--corrupt", "--format", "records"]) == 1

    by_id = {r["check_id"]: r for r in records(capsys)}
    assert by_id["example.picture_equivalence"]["status"] == "fail"
    assert by_id["example.descriptor_table"]["status"] == "pass"


@pytest.mark.parametrize(
    "model, superinformation",
    [("classical_bit", False), ("classical_trit", False), ("stabilizer_qubit", True)],
)
def test_check_model_bundled(model, superinformation, settings):
    report = cmd_check_model(settings, model)

    entry = report.get(f"model.{model}.superinformation_medium")
    assert entry.payload["verdict"] is superinformation
    assert report.passed


def test_check_model_records(capsys):
    assert main(["check-model", "stabilizer_qubit", "--format", "records"]) == 0

    by_id = {r["check_id"]: r for r in records(capsys)}
    pair = by_id["model.stabilizer_qubit.X+Z.is_superinformation_medium"]
    assert pair["payload"] == {"verdict": True, "expected": True}
    assert by_id["model.stabilizer_qubit.XZ.is_observable"]["status"] == "pass"
    assert by_id["model.stabilizer_qubit.X.interoperability"]["status"] == "not-run"


def test_check_model_reports_failed_expectations(model_file, capsys):
    document = {
        "schema_version": 1,
        "name": "frozen bit",
        "substrates": [{"id": "bit", "states": ["0", "1"]}],
        "composites": [{"id": "bit+bit", "components": ["bit", "bit"]}],
        "basis": {
            "bit": [
                {"name": "0", "members": ["0"]},
                {"name": "1", "members": ["1"]},
            ]
        },
        "variables": [
            {"name": "B", "substrate": "bit", "attributes": ["0", "1"], "blank": "0"}
        ],
        "expectations": {"B": {"is_information_variable": True}},
    }

    assert main(["check-model", str(model_file(document)), "--format", "records"]) == 1

    by_id = {r["check_id"]: r for r in records(capsys)}
    entry = by_id["model.frozen_bit.B.is_information_variable"]
    assert entry["status"] == "fail"
    assert entry["payload"] == {"verdict": False, "expected": True}


def test_verdicts_without_expectations_are_not_applicable(model_file, capsys):
    document = {
        "schema_version": 1,
        "name": "frozen bit",
        "substrates": [{"id": "bit", "states": ["0", "1"]}],
        "composites": [{"id": "bit+bit", "components": ["bit", "bit"]}],
        "basis": {
            "bit": [
                {"name": "0", "members": ["0"]},
                {"name": "1", "members": ["1"]},
            ]
        },
        "variables": [
            {"name": "B", "substrate": "bit", "attributes": ["0", "1"], "blank": "0"}
        ],
    }

    assert main(["check-model", str(model_file(document)), "--format", "records"]) == 0

    by_id = {r["check_id"]: r for r in records(capsys)}
    entry = by_id["model.frozen_bit.B.is_information_variable"]
    assert entry["status"] == "n/a"
    assert entry["payload"] == {"verdict": False}
    assert by_id["model.frozen_bit.B.interoperability"]["status"] == "not-run"


def test_bad_model_file_exits_with_usage_error(model_file, capsys):
    assert main(["check-model", str(model_file("{ not json"))]) == 2

    assert "line 1" in capsys.readouterr().err


def test_unknown_model_exits_with_usage_error(capsys):
    assert main(["check-model", "no_such_model"]) == 2


@pytest.mark.parametrize(
    "flags", [["--samples", "0"], ["--dim", "7"], ["--steps", "9"]]
)
def test_search_rejects_bad_budgets(flags, capsys):
    assert main(["search", *flags]) == 2

    assert capsys.readouterr().err.startswith("error:")


def test_unknown_subcommand_is_a_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])

    assert e.value.code == 2


@pytest.mark.slow
def test_small_search_passes(capsys):
    argv = ["search", "--samples", "50", "--grid", "1", "--format", "records"]

    assert main(argv) == 0

    ids = [r["check_id"] for r in records(capsys)]
    assert ids == [
        "search.classical.max_negativity",
        "search.classical.max_chsh",
        "search.quantum_reference",
        "search.mixture_exclusion",
        "search.oracle.chsh_cross_check",
        "search.oracle.werner_threshold",
    ]


@pytest.mark.slow
def test_search_records_are_byte_identical(capsys):
    argv = ["search", "--dim", "2", "--steps", "2", "--samples", "200"]
    argv += ["--seed", "11", "--grid", "1", "--format", "records"]
    outputs = []
    for workers in ("1", "1", "4"):
        assert main([*argv, "--workers", workers]) == 0
        outputs.append(capsys.readouterr().out)

    assert outputs[0] == outputs[1]
    assert outputs[0] == outputs[2]


def test_settings_precedence(tmp_path, monkeypatch):
    config = tmp_path / "config.json"
    config.write_text(
        json.dumps({"search": {"samples": 5, "seed": 3}, "tolerances": {}})
    )
    monkeypatch.setenv("MEDIATOR_SEED", "11")
    monkeypatch.setenv("MEDIATOR_GRID", "2")

    settings = load_settings(str(config), samples=9, dim=None)

    assert settings.samples == 9
    assert settings.seed == 3
    assert settings.grid == 2
    assert settings.dim == 2


def test_config_errors(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"colour": "blue"}))

    with pytest.raises(ConfigError):
        load_settings(str(broken))
    with pytest.raises(ConfigError):
        load_settings(str(unknown))
    with pytest.raises(ConfigError):
        load_settings(str(tmp_path / "missing.json"))
    with pytest.raises(ConfigError):
        load_settings(samples="many")


def test_settings_defaults(settings):
    assert isinstance(settings, Settings)
    assert (settings.seed, settings.samples, settings.grid) == (7, 10000, 4)


def test_report_rejects_duplicate_checks():
    report = VerificationReport(command="example")
    report.add(ReportEntry.from_outcome("example.a", True))

    with pytest.raises(ValueError):
        report.add(ReportEntry.from_outcome("example.a", False))


def test_not_run_entries_do_not_fail_the_report():
    report = VerificationReport(command="check-model")
    report.add(ReportEntry(check_id="model.m.skipped", status=CheckStatus.NOT_RUN))

    assert report.passed
    assert report.exit_code == 0

    report.add(
        ReportEntry(check_id="model.m.unchecked", status=CheckStatus.NOT_APPLICABLE)
    )
    assert report.exit_code == 0

    report.add(ReportEntry.from_outcome("model.m.failed", False))
    assert report.exit_code == 1


def test_records_are_compact_with_sorted_keys():
    report = VerificationReport(command="search")
    report.add(ReportEntry.from_outcome("search.x", True, payload={"b": 1, "a": 2.5}))

    (line,) = report.to_records()

    assert line == (
        '{"check_id":"search.x","command":"search","metadata":{},'
        '"payload":{"a":2.5,"b":1},"status":"pass"}'
    )
