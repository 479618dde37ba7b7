"""Heisenberg descriptors {q_x(t), q_z(t)} and their evolution under gates."""

from dataclasses import dataclass
from typing import Tuple

from heisenberg_sim.gates import SITES, Gate, site_index
from pauli_algebra.coefficients import GaussianRational
from pauli_algebra.pauli import PauliOperator, embed, op_mul

from errors import DimensionError

DescriptorPair = Tuple[PauliOperator, PauliOperator]


@dataclass(frozen=True)
class DescriptorSet:
    """For each subsystem, the pair (q_x(t), q_z(t)) on the full register."""

    pairs: Tuple[DescriptorPair, ...]
    site_names: Tuple[str, ...] = SITES

    def __post_init__(self):
        if len(self.pairs) != len(self.site_names):
            raise DimensionError(
                f"{len(self.pairs)} descriptor pairs for {len(self.site_names)} sites"
            )
        for qx, qz in self.pairs:
            if qx.n != self.n or qz.n != self.n:
                raise DimensionError("Descriptors must act on the full register")

    @classmethod
    def initial(cls, site_names: Tuple[str, ...] = SITES) -> "DescriptorSet":
        n = len(site_names)
        return cls(
            tuple(
                (
                    PauliOperator.from_string(embed("X", i, n)),
                    PauliOperator.from_string(embed("Z", i, n)),
                )
                for i in range(n)
            ),
            tuple(site_names),
        )

    @property
    def n(self) -> int:
        return len(self.site_names)

    def pair(self, site: str) -> DescriptorPair:
        return self.pairs[site_index(site, self.site_names)]

    def qx(self, site: str) -> PauliOperator:
        return self.pair(site)[0]

    def qz(self, site: str) -> PauliOperator:
        return self.pair(site)[1]

    def qy(self, site: str) -> PauliOperator:
        """q_y = -i q_z q_x, from q_z q_x = i q_y."""
        qx, qz = self.pair(site)
        return op_mul(qz, qx).scale(GaussianRational(0, -1))

    def image(self, letter: str, index: int) -> PauliOperator:
        qx, qz = self.pairs[index]
        if letter == "I":
            return PauliOperator.identity(self.n)
        if letter == "X":
            return qx
        if letter == "Z":
            return qz
        return self.qy(self.site_names[index])

    def squares_are_identity(self) -> bool:
        identity = PauliOperator.identity(self.n)
        return all(op_mul(q, q) == identity for pair in self.pairs for q in pair)


def substitute(o: PauliOperator, d: DescriptorSet) -> PauliOperator:
    """Replace every bare single-site letter of `o` by its descriptor in `d`.

    Descriptors of different sites commute, so the factor order is immaterial.
    """
    if o.n != d.n:
        raise DimensionError(f"Operator acts on {o.n} sites, descriptors on {d.n}")
    result = PauliOperator.zero(d.n)
    for letters, coefficient in o.terms:
        term = PauliOperator.identity(d.n)
        for index, letter in enumerate(letters):
            if letter != "I":
                term = op_mul(term, d.image(letter, index))
        result = result + term.scale(coefficient)
    return result


def heisenberg_step(o: PauliOperator, d: DescriptorSet, g: Gate) -> PauliOperator:
    """Heisenberg image after `g` of the bare operator `o`, given descriptors `d`.

    O(t_{n+1}) = U(t_n)^dagger O(t_n) U(t_n), with U(t_n) written in terms of
    the descriptors at t_n: conjugate the bare operator, then substitute.
    """
    return substitute(g.conjugate(o), d)


def apply_gate_heisenberg(d: DescriptorSet, g: Gate) -> DescriptorSet:
    """Evolve every descriptor of `d` through `g`."""
    if g.site_names != d.site_names:
        raise DimensionError("Gate and descriptors use different site layouts")
    pairs = []
    for index in range(d.n):
        if d.site_names[index] not in g.acts_on and _commutes_with_site(g, index):
            pairs.append(d.pairs[index])
            continue
        bare_x = PauliOperator.from_string(embed("X", index, d.n))
        bare_z = PauliOperator.from_string(embed("Z", index, d.n))
        pairs.append((heisenberg_step(bare_x, d, g), heisenberg_step(bare_z, d, g)))
    return DescriptorSet(tuple(pairs), d.site_names)


def _commutes_with_site(g: Gate, index: int) -> bool:
    for letter in "XZ":
        bare = PauliOperator.from_string(embed(letter, index, g.n))
        if g.conjugate(bare) != bare:
            return False
    return True


__all__ = [
    "DescriptorSet",
    "apply_gate_heisenberg",
    "heisenberg_step",
    "substitute",
]
