"""Declared dynamics: the maps a finite model allows on one state space.

Tasks are compiled to (input indices, output mask) pairs over the
substrate's state order, and each dynamics family decides realisability in
its own way.
"""

import logging
from abc import ABC, abstractmethod
from typing import Callable, Dict, Mapping, Sequence, Tuple

import numpy as np
from constructor_model.model import FiniteSubstrate, State, Task
from constructor_model.stabilizer import clifford1_maps, clifford2_maps

from errors import ModelSemanticError, PreconditionError

logger = logging.getLogger(__name__)

CompiledPair = Tuple[np.ndarray, np.ndarray]


def compile_task(task: Task, substrate: FiniteSubstrate) -> Tuple[CompiledPair, ...]:
    return tuple(
        (substrate.indices(source.members), substrate.mask(target.members))
        for source, target in task.pairs
    )


class Dynamics(ABC):
    """A set of total maps on one substrate's states."""

    name: str = ""

    @abstractmethod
    def realizes(self, pairs: Sequence[CompiledPair]) -> bool:
        """True iff one map sends every input state into its output mask."""


class MapTable(Dynamics):
    """Explicit maps, one row of target indices per map."""

    def __init__(self, maps: np.ndarray, name: str = "table"):
        """Initialize table.

        Args:
            maps: Integer array of shape (k, n); maps[j, i] is the image of
                state i under map j.
            name: Label used in logs and reports.
        """
        maps = np.asarray(maps, dtype=np.int32)
        if maps.ndim != 2:
            raise PreconditionError(f"Map table {name} must be two-dimensional")
        if maps.size and (maps.min() < 0 or maps.max() >= maps.shape[1]):
            raise PreconditionError(f"Map table {name} leaves its state space")
        self.maps = maps
        self.name = name

    def __len__(self) -> int:
        return len(self.maps)

    @classmethod
    def from_tables(
        cls,
        substrate: FiniteSubstrate,
        tables: Sequence[Mapping[State, State]],
        name: str = "table",
    ) -> "MapTable":
        """Build from state-to-state dicts; every map must be total."""
        rows = []
        for k, table in enumerate(tables):
            missing = [s for s in substrate.states if s not in table]
            if missing:
                raise PreconditionError(
                    f"Map {k} on {substrate.id} is not total: no image for "
                    f"{missing[0]!r}"
                )
            rows.append([substrate.index[table[s]] for s in substrate.states])
        maps = np.array(rows, dtype=np.int32).reshape(len(rows), substrate.size)
        return cls(maps, name)

    def realizes(self, pairs: Sequence[CompiledPair]) -> bool:
        ok = np.ones(len(self.maps), dtype=bool)
        for inputs, mask in pairs:
            ok &= mask[self.maps[:, inputs]].all(axis=1)
            if not ok.any():
                return False
        return bool(ok.any())


class AllFunctions(Dynamics):
    """Every total map on the state space, decided without enumeration."""

    name = "all_functions"

    def realizes(self, pairs: Sequence[CompiledPair]) -> bool:
        return all(mask.any() for _, mask in pairs)


def _reindexed(
    substrate: FiniteSubstrate, labels: Sequence[State], maps: np.ndarray, name: str
) -> MapTable:
    """Carry maps over `labels` onto the substrate's own state order."""
    if set(labels) != set(substrate.states):
        unknown = sorted(map(str, set(substrate.states) ^ set(labels)))
        raise ModelSemanticError(
            f"Generator {name} needs exactly its own state set on {substrate.id}; "
            f"mismatched labels {unknown[:3]}",
            field="dynamics",
        )
    to_substrate = np.array([substrate.index[label] for label in labels])
    reordered = np.empty_like(maps)
    reordered[:, to_substrate] = to_substrate[maps]
    return MapTable(reordered, name)


def _clifford1(substrate: FiniteSubstrate) -> Dynamics:
    labels, maps = clifford1_maps()
    return _reindexed(substrate, labels, maps, "clifford1")


def _clifford2(substrate: FiniteSubstrate) -> Dynamics:
    labels, maps = clifford2_maps()
    return _reindexed(substrate, labels, maps, "clifford2")


GENERATORS: Dict[str, Callable[[FiniteSubstrate], Dynamics]] = {
    "all_functions": lambda substrate: AllFunctions(),
    "clifford1": _clifford1,
    "clifford2": _clifford2,
}


def generator_dynamics(name: str, substrate: FiniteSubstrate) -> Dynamics:
    try:
        factory = GENERATORS[name]
    except KeyError:
        raise ModelSemanticError(f"Unknown generator {name!r}", field="dynamics")
    dynamics = factory(substrate)
    logger.debug("Generated %s dynamics on %s", name, substrate.id)
    return dynamics
