"""Reading model files into FiniteTheoryModel instances.

Syntax errors carry the line and column of the JSON parser, schema errors
the path of the offending field, and semantic errors (undeclared states,
overlapping attributes, missing composites) are raised separately as
ModelSemanticError.
"""

import itertools
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Union

from constructor_model.dynamics import Dynamics, MapTable, generator_dynamics
from constructor_model.model import (
    Attribute,
    CompositeSubstrate,
    FiniteSubstrate,
    FiniteTheoryModel,
    State,
    Variable,
)
from constructor_model.stabilizer import entangled_state_labels
from jsonschema import Draft202012Validator
from jsonschema.exceptions import best_match
from model_files.schema_loader import get_schema, load_schemas

from errors import ModelFileError, ModelSemanticError, PreconditionError

logger = logging.getLogger(__name__)

BUNDLED_DIR = Path(__file__).parent / "bundled"


@dataclass
class ModelDocument:
    """A parsed model file: the model plus its recorded expectations."""

    model: FiniteTheoryModel
    source: str
    description: str = ""
    expectations: Dict[str, Dict[str, bool]] = field(default_factory=dict)


def _parse_json(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFileError(e.msg, line=e.lineno, column=e.colno)


def _validate(document: dict):
    schema = get_schema(load_schemas(), "model_file")
    error = best_match(Draft202012Validator(schema).iter_errors(document))
    if error is not None:
        path = "/".join(str(p) for p in error.absolute_path) or "<root>"
        raise ModelFileError(error.message, field=path)


def _state(substrate: FiniteSubstrate, text: str, where: str) -> State:
    state = tuple(text.split("|")) if "|" in text else text
    if state not in substrate.index:
        raise ModelSemanticError(
            f"State {text!r} is not declared on substrate {substrate.id}", field=where
        )
    return state


def _substrate(substrates: dict, substrate_id: str, where: str) -> FiniteSubstrate:
    try:
        return substrates[substrate_id]
    except KeyError:
        raise ModelSemanticError(f"Undeclared substrate {substrate_id!r}", field=where)


def _composite(substrates: dict, entry: dict, where: str) -> CompositeSubstrate:
    parts = [
        _substrate(substrates, c, f"{where}/components") for c in entry["components"]
    ]
    factors = [
        [flat for flat in map(part.flatten, part.states) if flat is not None]
        for part in parts
    ]
    states: List[State] = [sum(combo, ()) for combo in itertools.product(*factors)]
    extra = entry.get("extra_states", [])
    if extra == "stabilizer":
        extra = list(entangled_state_labels())
    states.extend(extra)
    return CompositeSubstrate(
        id=entry["id"],
        states=tuple(states),
        component_ids=tuple(c for part in parts for c in part.components),
    )


def _dynamics(substrates: dict, entry: dict, where: str) -> Dynamics:
    substrate = _substrate(substrates, entry["substrate"], f"{where}/substrate")
    if "generator" in entry:
        return generator_dynamics(entry["generator"], substrate)
    tables = [
        {
            _state(substrate, k, f"{where}/table/{i}"): _state(
                substrate, v, f"{where}/table/{i}"
            )
            for k, v in row.items()
        }
        for i, row in enumerate(entry["table"])
    ]
    try:
        return MapTable.from_tables(substrate, tables, entry.get("name", "table"))
    except PreconditionError as e:
        raise ModelSemanticError(str(e), field=f"{where}/table")


def build_model(document: dict) -> FiniteTheoryModel:
    """Turn a schema-valid document into a model, checking cross references."""
    substrates: Dict[str, FiniteSubstrate] = {}
    for entry in document["substrates"]:
        substrates[entry["id"]] = FiniteSubstrate(entry["id"], tuple(entry["states"]))
    for i, entry in enumerate(document.get("composites", [])):
        if entry["id"] in substrates:
            raise ModelSemanticError(
                f"Substrate id {entry['id']!r} declared twice", field=f"composites/{i}"
            )
        substrates[entry["id"]] = _composite(substrates, entry, f"composites/{i}")

    dynamics: Dict[str, tuple] = {}
    for i, entry in enumerate(document.get("dynamics", [])):
        built = _dynamics(substrates, entry, f"dynamics/{i}")
        dynamics[entry["substrate"]] = dynamics.get(entry["substrate"], ()) + (built,)

    basis: Dict[str, tuple] = {}
    for substrate_id, attributes in document.get("basis", {}).items():
        substrate = _substrate(substrates, substrate_id, f"basis/{substrate_id}")
        basis[substrate_id] = tuple(
            Attribute(
                substrate_id,
                frozenset(
                    _state(substrate, s, f"basis/{substrate_id}/{k}")
                    for s in a["members"]
                ),
                a["name"],
            )
            for k, a in enumerate(attributes)
        )

    variables: Dict[str, Variable] = {}
    for i, entry in enumerate(document.get("variables", [])):
        variables[entry["name"]] = _variable(basis, substrates, entry, f"variables/{i}")

    targets: Dict[str, tuple] = {}
    for substrate_id, target_ids in document.get("targets", {}).items():
        where = f"targets/{substrate_id}"
        _substrate(substrates, substrate_id, where)
        for target_id in target_ids:
            _substrate(substrates, target_id, where)
        targets[substrate_id] = tuple(target_ids)

    model = FiniteTheoryModel(
        name=document["name"],
        substrates=substrates,
        dynamics=dynamics,
        basis=basis,
        targets=targets,
        variables=variables,
    )
    for substrate_id, target_ids in targets.items():
        for target_id in target_ids:
            if model.composite_of(substrate_id, target_id) is None:
                raise ModelSemanticError(
                    f"Target {target_id} of {substrate_id} has no declared composite",
                    field=f"targets/{substrate_id}",
                )
    return model


def _variable(basis: dict, substrates: dict, entry: dict, where: str) -> Variable:
    _substrate(substrates, entry["substrate"], f"{where}/substrate")
    by_name = {a.name: a for a in basis.get(entry["substrate"], ())}
    attributes = []
    for name in entry["attributes"]:
        if name not in by_name:
            raise ModelSemanticError(
                f"Attribute {name!r} is not in the basis of {entry['substrate']}",
                field=f"{where}/attributes",
            )
        attributes.append(by_name[name])
    blank = None
    if "blank" in entry:
        if entry["blank"] not in entry["attributes"]:
            raise ModelSemanticError(
                f"Blank {entry['blank']!r} is not one of the variable's attributes",
                field=f"{where}/blank",
            )
        blank = by_name[entry["blank"]]
    try:
        return Variable(tuple(attributes), entry["name"], blank)
    except PreconditionError as e:
        raise ModelSemanticError(
            f"{e}; the attributes of a variable must be pairwise disjoint",
            field=f"{where}/attributes",
        )


def _check_expectations(document: dict, model: FiniteTheoryModel):
    for key in document.get("expectations", {}):
        if key == "model":
            continue
        for name in key.split("+"):
            if name not in model.variables:
                raise ModelSemanticError(
                    f"Expectation for undeclared variable {name!r}",
                    field=f"expectations/{key}",
                )


def parse_model_text(text: str, source: str = "<string>") -> ModelDocument:
    document = _parse_json(text)
    _validate(document)
    model = build_model(document)
    _check_expectations(document, model)
    logger.info(
        "Loaded model %s from %s: %d substrates, %d variables",
        model.name,
        source,
        len(model.substrates),
        len(model.variables),
    )
    return ModelDocument(
        model=model,
        source=source,
        description=document.get("description", ""),
        expectations=document.get("expectations", {}),
    )


def load_model_file(path: Union[str, Path]) -> ModelDocument:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ModelFileError(f"Cannot read {path}: {e.strerror}")
    return parse_model_text(text, source=str(path))


def bundled_names() -> List[str]:
    return sorted(p.stem for p in BUNDLED_DIR.glob("*.json"))


def bundled_model(name: str) -> ModelDocument:
    path = BUNDLED_DIR / f"{name}.json"
    if not path.exists():
        raise ModelFileError(f"No bundled model {name!r}; have {bundled_names()}")
    return load_model_file(path)


def resolve_model(name_or_path: str) -> ModelDocument:
    """A path to a model file, or the bare name of a bundled model."""
    if Path(name_or_path).is_file():
        return load_model_file(name_or_path)
    if name_or_path in bundled_names():
        return bundled_model(name_or_path)
    raise ModelFileError(
        f"{name_or_path!r} is neither a model file nor a bundled model "
        f"({', '.join(bundled_names())})"
    )
