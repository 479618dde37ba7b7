"""Classical-mediator pipelines: grid enumeration and seeded random sampling."""

import itertools
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import numpy as np
from witness_search.hybrid_state import HybridState
from witness_search.instruments import (
    LocalStep,
    LocalStepA,
    LocalStepB,
    measure_and_record,
)
from witness_search.oracles import haar_state, projector, random_density_matrix

_PAULIS = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

GRID_INITIAL_STATES = {
    "z0": np.array([1, 0], dtype=complex),
    "x+": np.array([1, 1], dtype=complex) / np.sqrt(2),
}


@dataclass(frozen=True, eq=False)
class Pipeline:
    """An initial hybrid state and alternating A / B steps."""

    initial: HybridState
    steps: Tuple[LocalStep, ...]
    source: str
    index: int


def bloch_directions(grid: int) -> List[np.ndarray]:
    """Unit vectors on a (grid + 1) x grid polar/azimuthal lattice."""
    directions = []
    for theta in np.linspace(0, np.pi, grid + 1):
        for phi in np.arange(grid) * 2 * np.pi / grid:
            x, y = np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi)
            directions.append(np.array([x, y, np.cos(theta)]))
    return directions


def _sigma(direction: np.ndarray) -> np.ndarray:
    return sum(c * p for c, p in zip(direction, _PAULIS))


def rotation(direction: np.ndarray, angle: float) -> np.ndarray:
    return np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * _sigma(direction)


def grid_step_a(d: int, direction: np.ndarray) -> LocalStepA:
    """Measure A along `direction` and add the outcome to the label mod d."""
    sigma = _sigma(direction)
    projectors = ((np.eye(2) + sigma) / 2, (np.eye(2) - sigma) / 2)
    return measure_and_record(d, projectors, LocalStepA, name="grid A")


def grid_step_b(d: int, direction: np.ndarray) -> LocalStepB:
    """Rotate B about `direction` by pi m / (d - 1) for mediator label m."""
    channels = [[rotation(direction, np.pi * m / max(d - 1, 1))] for m in range(d)]
    return LocalStepB.from_channels(channels, update=list(range(d)), name="grid B")


def alternating(steps: int, make_a, make_b) -> Tuple[LocalStep, ...]:
    return tuple(make_a() if k % 2 == 0 else make_b() for k in range(steps))


def grid_pipelines(
    d: int, grid: int, steps: int, start: int = 0, stop: Optional[int] = None
) -> Iterator[Pipeline]:
    """Every (A direction, B direction, initial state) combination, or the
    slice start:stop of them.

    Each pipeline repeats its A step and its B step alternately for `steps`
    steps, starting with A.
    """
    directions = bloch_directions(grid)
    initial_states = list(GRID_INITIAL_STATES.values())
    combos = itertools.product(directions, directions, initial_states, initial_states)
    selected = itertools.islice(enumerate(combos), start, stop)
    for index, (dir_a, dir_b, psi_a, psi_b) in selected:
        step_a, step_b = grid_step_a(d, dir_a), grid_step_b(d, dir_b)
        yield Pipeline(
            initial=HybridState.product(projector(psi_a), projector(psi_b), d),
            steps=alternating(steps, lambda: step_a, lambda: step_b),
            source="grid",
            index=index,
        )


def grid_size(grid: int) -> int:
    return (len(bloch_directions(grid)) * len(GRID_INITIAL_STATES)) ** 2


def random_isometry(rng: np.random.Generator, rows: int, columns: int) -> np.ndarray:
    """Haar-random isometry (V^dagger V = I) from a QR decomposition."""
    g = rng.normal(size=(rows, columns)) + 1j * rng.normal(size=(rows, columns))
    q, r = np.linalg.qr(g)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_instrument(
    rng: np.random.Generator, d: int, step_type, kraus_rank: int = 2
) -> LocalStep:
    """Random qubit instrument: one Stinespring isometry per input label."""
    kraus = []
    for _ in range(d):
        v = random_isometry(rng, 2 * d * kraus_rank, 2)
        blocks = v.reshape(d, kraus_rank, 2, 2)
        kraus.append(
            tuple(
                tuple(blocks[m2, r] for r in range(kraus_rank)) for m2 in range(d)
            )
        )
    return step_type(d=d, kraus=tuple(kraus), name="random")


def random_initial_state(rng: np.random.Generator, d: int) -> HybridState:
    """Label distribution from a Dirichlet draw; product AB state per label."""
    weights = rng.dirichlet(np.ones(d))
    branches = []
    for label in range(d):
        if rng.random() < 0.5:
            rho_a = projector(haar_state(rng))
            rho_b = projector(haar_state(rng))
        else:
            rho_a = random_density_matrix(rng, 2)
            rho_b = random_density_matrix(rng, 2)
        branches.append((float(weights[label]), label, np.kron(rho_a, rho_b)))
    return HybridState.from_branches(d, branches)


def random_pipeline(
    rng: np.random.Generator, d: int, steps: int, index: int
) -> Pipeline:
    initial = random_initial_state(rng, d)
    pipeline_steps = tuple(
        random_instrument(rng, d, LocalStepA if k % 2 == 0 else LocalStepB)
        for k in range(steps)
    )
    return Pipeline(initial=initial, steps=pipeline_steps, source="sample", index=index)
