"""Symbolic n-qubit Pauli strings and their complex linear combinations.

Phase convention: XY = iZ, YZ = iX, ZX = iY. Letters are ordered by
subsystem position; in the three-qubit protocol the order is (A, M, B).
"""

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Tuple, Union

from pauli_algebra.coefficients import ONE, ZERO, GaussianRational, Scalar

from errors import DimensionError

LETTERS = "IXYZ"

Letters = Tuple[str, ...]

# (left, right) -> (power of i, product letter)
_SITE_PRODUCTS = {
    ("X", "Y"): (1, "Z"),
    ("Y", "Z"): (1, "X"),
    ("Z", "X"): (1, "Y"),
    ("Y", "X"): (3, "Z"),
    ("Z", "Y"): (3, "X"),
    ("X", "Z"): (3, "Y"),
}


def _site_product(p: str, q: str) -> Tuple[int, str]:
    if p == "I":
        return 0, q
    if q == "I":
        return 0, p
    if p == q:
        return 0, "I"
    return _SITE_PRODUCTS[(p, q)]


@dataclass(frozen=True)
class PauliString:
    """A phase i**phase times a tensor product of single-qubit Pauli letters."""

    letters: Letters
    phase: int = 0

    def __post_init__(self):
        letters = tuple(self.letters)
        bad = [p for p in letters if p not in LETTERS]
        if bad:
            raise ValueError(f"Unknown Pauli letters {bad}; expected one of {LETTERS}")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(("I",) * n)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse labels such as "XIZ", "-Y", "+iZZ" or "-iXI"."""
        text = label.strip()
        phase = 0
        if text.startswith(("+", "-")):
            phase = 0 if text[0] == "+" else 2
            text = text[1:]
        if text.startswith("i"):
            phase += 1
            text = text[1:]
        return cls(tuple(text), phase)

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def coefficient(self) -> GaussianRational:
        return GaussianRational.i_power(self.phase)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.letters) if p != "I")

    @property
    def weight(self) -> int:
        return len(self.support)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_mul(self, other)

    def __str__(self) -> str:
        prefix = ("+", "+i", "-", "-i")[self.phase]
        return prefix + "".join(self.letters)


def embed(letter: str, site: int, n: int) -> PauliString:
    """The single-site Pauli `letter` at position `site` of an n-site system."""
    if not 0 <= site < n:
        raise DimensionError(f"Site {site} outside a {n}-site system")
    letters = ["I"] * n
    letters[site] = letter
    return PauliString(tuple(letters))


def all_letter_strings(n: int) -> Iterable[Letters]:
    return itertools.product(LETTERS, repeat=n)


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Exact group product of two Pauli strings, phases accumulated."""
    if a.n != b.n:
        raise DimensionError(f"Cannot multiply {a.n}-site and {b.n}-site strings")
    phase = a.phase + b.phase
    letters = []
    for p, q in zip(a.letters, b.letters):
        k, r = _site_product(p, q)
        phase += k
        letters.append(r)
    return PauliString(tuple(letters), phase)


@dataclass(frozen=True)
class PauliOperator:
    """A finite complex combination of Pauli strings in canonical form.

    Terms are stored sorted by letters with no zero coefficients, so two
    equal operators always compare equal regardless of how they were built.
    """

    n: int
    terms: Tuple[Tuple[Letters, GaussianRational], ...] = ()

    @classmethod
    def from_terms(
        cls,
        n: int,
        terms: Union[
            Mapping[Letters, Scalar], Iterable[Tuple[Letters, Scalar]]
        ] = (),
    ) -> "PauliOperator":
        items = terms.items() if isinstance(terms, Mapping) else terms
        combined: dict = {}
        for letters, coefficient in items:
            letters = tuple(letters)
            if len(letters) != n:
                raise DimensionError(
                    f"Term {''.join(letters)} does not act on {n} sites"
                )
            combined[letters] = combined.get(letters, ZERO) + GaussianRational.of(
                coefficient
            )
        canonical = tuple(
            (letters, c) for letters, c in sorted(combined.items()) if not c.is_zero()
        )
        return cls(n, canonical)

    @classmethod
    def from_string(cls, s: PauliString) -> "PauliOperator":
        return cls.from_terms(s.n, [(s.letters, s.coefficient)])

    @classmethod
    def from_label(cls, label: str) -> "PauliOperator":
        return cls.from_string(PauliString.from_label(label))

    @classmethod
    def zero(cls, n: int) -> "PauliOperator":
        return cls(n, ())

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls.from_string(PauliString.identity(n))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def support(self) -> Tuple[int, ...]:
        sites = {
            i for letters, _ in self.terms for i, p in enumerate(letters) if p != "I"
        }
        return tuple(sorted(sites))

    def _check(self, other: "PauliOperator"):
        if self.n != other.n:
            raise DimensionError(
                f"Operators act on {self.n} and {other.n} sites respectively"
            )

    def __add__(self, other: "PauliOperator") -> "PauliOperator":
        self._check(other)
        return PauliOperator.from_terms(self.n, list(self.terms) + list(other.terms))

    def __neg__(self) -> "PauliOperator":
        return self.scale(-1)

    def __sub__(self, other: "PauliOperator") -> "PauliOperator":
        return self + (-other)

    def scale(self, c: Scalar) -> "PauliOperator":
        c = GaussianRational.of(c)
        return PauliOperator.from_terms(
            self.n, [(letters, c * coefficient) for letters, coefficient in self.terms]
        )

    def __mul__(self, other):
        if isinstance(other, PauliOperator):
            return op_mul(self, other)
        return self.scale(other)

    def __rmul__(self, c: Scalar) -> "PauliOperator":
        return self.scale(c)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{''.join(letters)}" for letters, c in self.terms)


def op_mul(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Bilinear extension of pauli_mul."""
    a._check(b)
    products = []
    for la, ca in a.terms:
        for lb, cb in b.terms:
            s = pauli_mul(PauliString(la), PauliString(lb))
            products.append((s.letters, ca * cb * s.coefficient))
    return PauliOperator.from_terms(a.n, products)


def dagger(a: PauliOperator) -> PauliOperator:
    """Adjoint: conjugate coefficients, letters are Hermitian."""
    return PauliOperator.from_terms(
        a.n, [(letters, c.conjugate()) for letters, c in a.terms]
    )


def commutator(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    return op_mul(a, b) - op_mul(b, a)


__all__ = [
    "LETTERS",
    "ONE",
    "PauliOperator",
    "PauliString",
    "all_letter_strings",
    "commutator",
    "dagger",
    "embed",
    "op_mul",
    "pauli_mul",
]
