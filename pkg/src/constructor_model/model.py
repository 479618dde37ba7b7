"""Substrates, attributes, variables, tasks and the finite theory model."""

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import (
    TYPE_CHECKING,
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from errors import PreconditionError, SubstrateMismatchError

if TYPE_CHECKING:
    from constructor_model.dynamics import Dynamics

State = Hashable


@dataclass(frozen=True)
class FiniteSubstrate:
    id: str
    states: Tuple[State, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        if not self.states:
            raise PreconditionError(f"Substrate {self.id} has no states")
        if len(set(self.states)) != len(self.states):
            raise PreconditionError(f"Substrate {self.id} repeats a state label")

    @cached_property
    def index(self) -> Dict[State, int]:
        return {s: i for i, s in enumerate(self.states)}

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def components(self) -> Tuple[str, ...]:
        return (self.id,)

    def flatten(self, state: State) -> Optional[Tuple[State, ...]]:
        """The state as a tuple of single-substrate states, None if entangled."""
        return (state,)

    def indices(self, members: Iterable[State]) -> np.ndarray:
        try:
            return np.array(sorted(self.index[s] for s in members), dtype=int)
        except KeyError as e:
            raise SubstrateMismatchError(
                f"State {e.args[0]!r} not on substrate {self.id}"
            )

    def mask(self, members: Iterable[State]) -> np.ndarray:
        mask = np.zeros(self.size, dtype=bool)
        mask[self.indices(members)] = True
        return mask


@dataclass(frozen=True)
class CompositeSubstrate(FiniteSubstrate):
    """S_1 (+) ... (+) S_k.

    Product states are ordered tuples of component states; `states` may also
    hold extra joint labels (entangled states) with no product form.
    """

    component_ids: Tuple[str, ...] = ()

    @property
    def components(self) -> Tuple[str, ...]:
        return self.component_ids

    def flatten(self, state: State) -> Optional[Tuple[State, ...]]:
        return state if isinstance(state, tuple) else None

    @cached_property
    def product_states(self) -> Tuple[Tuple[State, ...], ...]:
        return tuple(s for s in self.states if isinstance(s, tuple))


@dataclass(frozen=True)
class Attribute:
    """The set of states of one substrate sharing a property."""

    substrate: str
    members: FrozenSet[State]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if not self.members:
            raise PreconditionError(f"Attribute {self.name or '?'} is empty")

    @property
    def label(self) -> str:
        return self.name or "{" + ",".join(sorted(map(str, self.members))) + "}"

    def disjoint(self, other: "Attribute") -> bool:
        return not self.members & other.members

    def same_members(self, other: Optional["Attribute"]) -> bool:
        return other is not None and self.members == other.members


@dataclass(frozen=True)
class Variable:
    """A set of pairwise disjoint attributes of one substrate."""

    attributes: Tuple[Attribute, ...]
    name: str = ""
    blank: Optional[Attribute] = None

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        if not self.attributes:
            raise PreconditionError(f"Variable {self.name or '?'} has no attributes")
        substrates = {a.substrate for a in self.attributes}
        if len(substrates) != 1:
            raise SubstrateMismatchError(
                f"Variable {self.name or '?'} mixes substrates {sorted(substrates)}"
            )
        for a, b in itertools.combinations(self.attributes, 2):
            if not a.disjoint(b):
                raise PreconditionError(
                    f"Variable {self.name or '?'} has overlapping attributes "
                    f"{a.label} and {b.label}"
                )
        if self.blank is not None and self.blank not in self.attributes:
            raise PreconditionError(
                f"Blank {self.blank.label} is not an attribute of {self.name or '?'}"
            )

    @property
    def substrate(self) -> str:
        return self.attributes[0].substrate

    @property
    def members(self) -> FrozenSet[State]:
        return frozenset().union(*(a.members for a in self.attributes))

    @property
    def label(self) -> str:
        return self.name or "{" + ",".join(a.label for a in self.attributes) + "}"

    def __len__(self) -> int:
        return len(self.attributes)

    def disjoint(self, other: "Variable") -> bool:
        return not self.members & other.members

    def union(self, other: "Variable", name: str = "") -> "Variable":
        """x U z as one variable; overlapping attributes are rejected."""
        return Variable(
            self.attributes + other.attributes,
            name=name or f"{self.label}U{other.label}",
            blank=self.blank or other.blank,
        )

    def with_blank(self, blank: Attribute) -> "Variable":
        return Variable(self.attributes, self.name, blank)


@dataclass(frozen=True)
class Task:
    """Input -> output attribute pairs on one (possibly composite) substrate."""

    substrate: str
    pairs: Tuple[Tuple[Attribute, Attribute], ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        name = self.name or "?"
        for source, target in self.pairs:
            if {source.substrate, target.substrate} != {self.substrate}:
                raise SubstrateMismatchError(
                    f"Task {name} on {self.substrate} uses attributes of "
                    f"{source.substrate} and {target.substrate}"
                )
        for (a, _), (b, _) in itertools.combinations(self.pairs, 2):
            if not a.disjoint(b):
                raise PreconditionError(
                    f"Task {name} has overlapping inputs {a.label}, {b.label}"
                )


@dataclass(frozen=True, eq=False)
class FiniteTheoryModel:
    """Substrates with their declared dynamics, attribute basis and targets.

    Hashes by identity so that predicate results can be cached per model.
    """

    name: str
    substrates: Dict[str, FiniteSubstrate]
    dynamics: Dict[str, Tuple["Dynamics", ...]] = field(default_factory=dict)
    basis: Dict[str, Tuple[Attribute, ...]] = field(default_factory=dict)
    targets: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    variables: Dict[str, Variable] = field(default_factory=dict)
    cache: dict = field(default_factory=dict, repr=False, compare=False)

    def substrate(self, substrate_id: str) -> FiniteSubstrate:
        try:
            return self.substrates[substrate_id]
        except KeyError:
            raise SubstrateMismatchError(
                f"Substrate {substrate_id!r} not declared in model {self.name}"
            )

    def dynamics_for(self, substrate_id: str) -> Tuple["Dynamics", ...]:
        return self.dynamics.get(substrate_id, ())

    def basis_for(self, substrate_id: str) -> Tuple[Attribute, ...]:
        return self.basis.get(substrate_id, ())

    def composite_of(self, *substrate_ids: str) -> Optional[CompositeSubstrate]:
        """The declared composite whose flat components are those of the ids."""
        wanted = tuple(c for s in substrate_ids for c in self.substrate(s).components)
        for substrate in self.substrates.values():
            if not isinstance(substrate, CompositeSubstrate):
                continue
            if substrate.components == wanted:
                return substrate
        return None

    def doubled(self, substrate_id: str) -> Optional[CompositeSubstrate]:
        return self.composite_of(substrate_id, substrate_id)

    def product_attribute(
        self, composite: CompositeSubstrate, parts: Sequence[Attribute], name: str = ""
    ) -> Attribute:
        """Attribute of `composite` holding every product of states in `parts`."""
        factors = []
        for a in parts:
            substrate = self.substrate(a.substrate)
            flat = (substrate.flatten(s) for s in sorted(a.members, key=str))
            factors.append([f for f in flat if f is not None])
        products = {sum(combo, ()) for combo in itertools.product(*factors)}
        members = products & set(composite.states)
        if not members:
            labels = [a.label for a in parts]
            raise PreconditionError(
                f"No product of {labels} is a state of {composite.id}"
            )
        label = name or "x".join(a.label for a in parts)
        return Attribute(composite.id, frozenset(members), label)

    def whole(self, substrate_id: str) -> Attribute:
        substrate = self.substrate(substrate_id)
        members = frozenset(substrate.states)
        return Attribute(substrate_id, members, f"ALL_{substrate_id}")

    def with_dynamics(
        self, substrate_id: str, extra: "Dynamics"
    ) -> "FiniteTheoryModel":
        dynamics = dict(self.dynamics)
        dynamics[substrate_id] = self.dynamics_for(substrate_id) + (extra,)
        return FiniteTheoryModel(
            name=self.name,
            substrates=self.substrates,
            dynamics=dynamics,
            basis=self.basis,
            targets=self.targets,
            variables=self.variables,
        )
