import json

import pytest
from constructor_model.dynamics import AllFunctions, MapTable
from model_files.loader import (
    bundled_model,
    bundled_names,
    load_model_file,
    parse_model_text,
    resolve_model,
)
from model_files.schema_loader import get_schema, load_schemas

from errors import ModelFileError, ModelSemanticError


def bit_document(**changes) -> dict:
    document = {
        "schema_version": 1,
        "name": "bit",
        "substrates": [{"id": "bit", "states": ["0", "1"]}],
        "composites": [{"id": "bit+bit", "components": ["bit", "bit"]}],
        "dynamics": [{"substrate": "bit", "generator": "all_functions"}],
        "basis": {
            "bit": [
                {"name": "zero", "members": ["0"]},
                {"name": "one", "members": ["1"]},
            ]
        },
        "variables": [
            {
                "name": "B",
                "substrate": "bit",
                "attributes": ["zero", "one"],
                "blank": "zero",
            }
        ],
    }
    document.update(changes)
    return document


def test_bundled_models_are_listed():
    assert bundled_names() == ["classical_bit", "classical_trit", "stabilizer_qubit"]


@pytest.mark.parametrize(
    "name", ["classical_bit", "classical_trit", "stabilizer_qubit"]
)
def test_bundled_models_load(name):
    document = bundled_model(name)

    assert document.model.name == name
    assert document.description
    assert "model" in document.expectations


def test_stabilizer_composite_holds_every_stabilizer_state():
    model = bundled_model("stabilizer_qubit").model

    assert model.substrate("qubit+qubit").size == 60
    assert len(model.substrate("qubit+qubit").product_states) == 36


def test_minimal_document_builds_a_model():
    document = parse_model_text(json.dumps(bit_document()))
    model = document.model

    assert set(model.substrates) == {"bit", "bit+bit"}
    assert model.substrate("bit+bit").states[1] == ("0", "1")
    assert isinstance(model.dynamics_for("bit")[0], AllFunctions)
    assert model.variables["B"].blank.name == "zero"


def test_table_dynamics_accept_composite_states():
    dynamics = [
        {
            "substrate": "bit+bit",
            "name": "cnot",
            "table": [{"0|0": "0|0", "0|1": "0|1", "1|0": "1|1", "1|1": "1|0"}],
        }
    ]

    model = parse_model_text(json.dumps(bit_document(dynamics=dynamics))).model

    table = model.dynamics_for("bit+bit")[0]
    assert isinstance(table, MapTable)
    assert table.maps.tolist() == [[0, 1, 3, 2]]


def test_syntax_error_reports_line_and_column():
    with pytest.raises(ModelFileError) as e:
        parse_model_text('{\n  "name": \n}')

    assert e.value.line == 3
    assert e.value.column == 1
    assert str(e.value).startswith("line 3, column 1")


def test_schema_error_reports_the_offending_field():
    document = bit_document()
    document["substrates"][0]["states"] = "01"

    with pytest.raises(ModelFileError) as e:
        parse_model_text(json.dumps(document))

    assert e.value.field == "substrates/0/states"


def test_unknown_generator_is_a_schema_error():
    document = bit_document(dynamics=[{"substrate": "bit", "generator": "magic"}])

    with pytest.raises(ModelFileError):
        parse_model_text(json.dumps(document))


def test_wrong_schema_version_is_rejected():
    with pytest.raises(ModelFileError) as e:
        parse_model_text(json.dumps(bit_document(schema_version=2)))

    assert e.value.field == "schema_version"


def test_undeclared_state_in_basis():
    basis = {"bit": [{"name": "two", "members": ["2"]}]}

    with pytest.raises(ModelSemanticError) as e:
        parse_model_text(json.dumps(bit_document(basis=basis, variables=[])))

    assert e.value.field == "basis/bit/0"


def test_overlapping_variable_attributes_are_rejected():
    basis = {
        "bit": [
            {"name": "both", "members": ["0", "1"]},
            {"name": "one", "members": ["1"]},
        ]
    }
    variables = [{"name": "V", "substrate": "bit", "attributes": ["both", "one"]}]

    with pytest.raises(ModelSemanticError) as e:
        parse_model_text(json.dumps(bit_document(basis=basis, variables=variables)))

    assert "pairwise disjoint" in str(e.value)
    assert e.value.field == "variables/0/attributes"


def test_blank_must_be_an_attribute_of_the_variable():
    variables = [
        {"name": "B", "substrate": "bit", "attributes": ["one"], "blank": "zero"}
    ]

    with pytest.raises(ModelSemanticError) as e:
        parse_model_text(json.dumps(bit_document(variables=variables)))

    assert e.value.field == "variables/0/blank"


def test_partial_map_table_is_rejected():
    dynamics = [{"substrate": "bit", "table": [{"0": "1"}]}]

    with pytest.raises(ModelSemanticError) as e:
        parse_model_text(json.dumps(bit_document(dynamics=dynamics)))

    assert e.value.field == "dynamics/0/table"


def test_clifford_generator_needs_the_stabilizer_states():
    dynamics = [{"substrate": "bit", "generator": "clifford1"}]

    with pytest.raises(ModelSemanticError):
        parse_model_text(json.dumps(bit_document(dynamics=dynamics)))


def test_target_without_composite_is_rejected():
    document = bit_document(composites=[], targets={"bit": ["bit"]})

    with pytest.raises(ModelSemanticError) as e:
        parse_model_text(json.dumps(document))

    assert e.value.field == "targets/bit"


def test_expectations_must_name_declared_variables():
    document = bit_document(expectations={"C": {"is_observable": True}})

    with pytest.raises(ModelSemanticError):
        parse_model_text(json.dumps(document))


def test_model_files_load_from_disk(model_file):
    path = model_file(bit_document(description="from disk"))

    document = load_model_file(path)

    assert document.source == str(path)
    assert document.description == "from disk"
    assert resolve_model(str(path)).model.name == "bit"


def test_missing_model_is_reported():
    with pytest.raises(ModelFileError):
        load_model_file("/nonexistent/model.json")
    with pytest.raises(ModelFileError):
        resolve_model("no_such_model")


def test_schemas_are_looked_up_by_kind():
    schemas = load_schemas()

    assert get_schema(schemas, "model_file")["title"] == "Finite theory model"
    assert get_schema(schemas, "report_record") is not None
    assert get_schema(schemas, "no_such_kind") is None
