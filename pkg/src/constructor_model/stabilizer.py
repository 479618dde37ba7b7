"""Stabilizer states and the Clifford groups acting on them as permutations.

Single-qubit states are labelled z0, z1, x+, x-, y+, y-. Two-qubit product
states are labelled by pairs of those labels; the 24 entangled stabilizer
states by their signed stabilizer elements, e.g. "+XX,+ZZ,-YY".
"""

import itertools
import logging
from collections import deque
from functools import lru_cache
from typing import Dict, Hashable, List, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

_S2 = 1 / np.sqrt(2)

QUBIT_STATES: Dict[str, np.ndarray] = {
    "z0": np.array([1, 0], dtype=complex),
    "z1": np.array([0, 1], dtype=complex),
    "x+": np.array([_S2, _S2], dtype=complex),
    "x-": np.array([_S2, -_S2], dtype=complex),
    "y+": np.array([_S2, 1j * _S2], dtype=complex),
    "y-": np.array([_S2, -1j * _S2], dtype=complex),
}

_H = np.array([[1, 1], [1, -1]], dtype=complex) * _S2
_S = np.diag([1, 1j]).astype(complex)
_I = np.eye(2, dtype=complex)
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
_PAULI = {
    "I": _I,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
}

Permutation = Tuple[int, ...]
LabelledStates = Tuple[Tuple[Hashable, ...], Tuple[np.ndarray, ...]]


def _key(vector: np.ndarray) -> tuple:
    """Rounded vector with the global phase removed."""
    pivot = vector[np.flatnonzero(np.abs(vector) > 1e-9)[0]]
    normalised = vector * abs(pivot) / pivot
    rounded = np.round(normalised, 8) + 0.0
    return tuple((z.real, z.imag) for z in rounded)


def _entangled_label(vector: np.ndarray) -> str:
    elements = []
    for letters in itertools.product("IXYZ", repeat=2):
        if letters == ("I", "I"):
            continue
        pauli = np.kron(_PAULI[letters[0]], _PAULI[letters[1]])
        value = np.vdot(vector, pauli @ vector).real
        if abs(abs(value) - 1) < 1e-9:
            elements.append(("+" if value > 0 else "-") + "".join(letters))
    return ",".join(sorted(elements))


@lru_cache(maxsize=None)
def two_qubit_stabilizer_states() -> LabelledStates:
    """The 60 two-qubit stabilizer states: labels and vectors.

    Found as the orbit of |00> under H, S and CNOT; product states come
    first in (z0, z0), (z0, z1), ... order, then entangled ones by label.
    """
    product_keys = {}
    for a, b in itertools.product(QUBIT_STATES, repeat=2):
        product_keys[_key(np.kron(QUBIT_STATES[a], QUBIT_STATES[b]))] = (a, b)

    seen = {}
    queue = deque([np.array([1, 0, 0, 0], dtype=complex)])
    while queue:
        vector = queue.popleft()
        key = _key(vector)
        if key in seen:
            continue
        seen[key] = vector
        queue.extend(g @ vector for g in _two_qubit_generators())

    products, entangled = [], []
    for key, vector in seen.items():
        if key in product_keys:
            products.append((product_keys[key], vector))
        else:
            entangled.append((_entangled_label(vector), vector))
    order = {label: i for i, label in enumerate(product_keys.values())}
    products.sort(key=lambda item: order[item[0]])
    entangled.sort(key=lambda item: item[0])
    labels = tuple(label for label, _ in products + entangled)
    vectors = tuple(vector for _, vector in products + entangled)
    logger.debug(
        "Two-qubit stabilizer states: %d product, %d entangled",
        len(products),
        len(entangled),
    )
    return labels, vectors


def entangled_state_labels() -> Tuple[str, ...]:
    labels, _ = two_qubit_stabilizer_states()
    return tuple(label for label in labels if isinstance(label, str))


def _two_qubit_generators() -> List[np.ndarray]:
    return [np.kron(_H, _I), np.kron(_I, _H), np.kron(_S, _I), np.kron(_I, _S), _CNOT]


def _as_permutation(unitary: np.ndarray, vectors: Sequence[np.ndarray]) -> Permutation:
    index = {_key(v): i for i, v in enumerate(vectors)}
    return tuple(index[_key(unitary @ v)] for v in vectors)


def _closure(generators: Sequence[Permutation]) -> np.ndarray:
    """Every product of the generator permutations, identity first."""
    identity = tuple(range(len(generators[0])))
    seen = {identity: None}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for g in generators:
            composed = tuple(g[i] for i in current)
            if composed not in seen:
                seen[composed] = None
                queue.append(composed)
    return np.array(list(seen), dtype=np.int32)


@lru_cache(maxsize=None)
def clifford1_maps() -> Tuple[Tuple[str, ...], np.ndarray]:
    """The 24 single-qubit Clifford actions on QUBIT_STATES, as index maps."""
    labels = tuple(QUBIT_STATES)
    vectors = [QUBIT_STATES[label] for label in labels]
    maps = _closure([_as_permutation(_H, vectors), _as_permutation(_S, vectors)])
    return labels, maps


@lru_cache(maxsize=None)
def clifford2_maps() -> Tuple[Tuple[Hashable, ...], np.ndarray]:
    """The 11520 two-qubit Clifford actions on the 60 stabilizer states."""
    labels, vectors = two_qubit_stabilizer_states()
    generators = [_as_permutation(g, vectors) for g in _two_qubit_generators()]
    maps = _closure(generators)
    logger.info("Two-qubit Clifford closure: %d permutations", len(maps))
    return labels, maps
