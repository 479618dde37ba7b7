"""Exception types shared by the mediator-witness modules."""

from typing import Optional


class MediatorWitnessError(ValueError):
    """Base class for every error raised by this package."""


class DimensionError(MediatorWitnessError):
    """Operands act on different numbers of subsystems."""


class ContractViolation(MediatorWitnessError):
    """An input breaks a documented contract (e.g. a non-unitary gate)."""


class PreconditionError(MediatorWitnessError):
    """An operation was called outside its precondition."""


class SubstrateMismatchError(PreconditionError):
    """A task, attribute or variable refers to the wrong substrate."""


class MissingBlankError(PreconditionError):
    """A variable needs a designated blank attribute but has none."""


class AttributeOutsideBasisError(PreconditionError):
    """An attribute is not part of the model's declared attribute basis."""


class InvalidStateError(MediatorWitnessError):
    """A density matrix or hybrid state is not a valid state."""


class InvalidInstrumentError(MediatorWitnessError):
    """A local instrument or channel is not trace preserving."""


class BudgetError(MediatorWitnessError):
    """A search budget or flag value is out of range."""


class ModelFileError(MediatorWitnessError):
    """A model file could not be parsed or failed schema validation."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        field: Optional[str] = None,
    ):
        self.line = line
        self.column = column
        self.field = field
        location = []
        if line is not None:
            location.append(f"line {line}")
        if column is not None:
            location.append(f"column {column}")
        if field:
            location.append(f"field '{field}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class ModelSemanticError(MediatorWitnessError):
    """A model file parsed but is inconsistent (e.g. an undeclared state)."""

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        prefix = f"field '{field}': " if field else ""
        super().__init__(f"{prefix}{message}")


class ConfigError(MediatorWitnessError):
    """A configuration file or setting could not be used."""
