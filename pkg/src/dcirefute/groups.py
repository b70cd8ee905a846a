"""Permutation groups backed by a stabilizer chain.

The chain is built by a seeded randomized Schreier-Sims phase followed by a
deterministic pass that sifts every Schreier generator, so orders and
membership answers are exact regardless of the seed.
"""

from __future__ import annotations

import random
from contextlib import contextmanager
from operator import itemgetter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, DomainError
from .perm import Permutation

DEFAULT_ELEMENT_CAP = 100_000

_seed = 0


@contextmanager
def use_seed(seed: int):
    """Seed every chain built inside the block (groups created with ``seed=None``)."""
    global _seed
    old, _seed = _seed, seed
    try:
        yield
    finally:
        _seed = old


def _mul(a: tuple, b: tuple) -> tuple:
    if len(a) < 2:
        return tuple(b[x] for x in a)
    return itemgetter(*a)(b)


def _inv(a: tuple) -> tuple:
    out = [0] * len(a)
    for x, y in enumerate(a):
        out[y] = x
    return tuple(out)


class ChainLevel:
    """One level of a stabilizer chain; permutations are kept as image tuples."""

    def __init__(self, base_point: int, degree: int):
        self.base_point = base_point
        self.degree = degree
        self._gens: list[tuple] = []
        self.rebuild()

    def rebuild(self):
        e = tuple(range(self.degree))
        trans = {self.base_point: e}
        queue = [self.base_point]
        for x in queue:
            ux = trans[x]
            for g in self._gens:
                y = g[x]
                if y not in trans:
                    trans[y] = _mul(ux, g)
                    queue.append(y)
        self._trans = trans
        self._inv = {x: _inv(u) for x, u in trans.items()}

    def add(self, g: tuple):
        self._gens.append(g)
        self.rebuild()

    @property
    def gens(self) -> list[Permutation]:
        return [Permutation._trusted(g) for g in self._gens]

    @property
    def transversal(self) -> dict[int, Permutation]:
        """point -> u with base_point^u == point."""
        return {x: Permutation._trusted(u) for x, u in self._trans.items()}

    @property
    def orbit(self) -> list[int]:
        return list(self._trans)


@dataclass
class StabilizerChain:
    degree: int
    levels: list[ChainLevel]

    @property
    def base(self) -> list[int]:
        return [lv.base_point for lv in self.levels]

    def order(self) -> int:
        n = 1
        for lv in self.levels:
            n *= len(lv._trans)
        return n

    def _sift(self, p: tuple, start: int = 0) -> tuple[tuple, int]:
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            ui = lv._inv.get(p[lv.base_point])
            if ui is None:
                return p, i
            p = _mul(p, ui)
        return p, len(self.levels)

    def sift(self, p: Permutation) -> tuple[Permutation, int]:
        """Strip p through the chain; returns the residue and the level reached."""
        residue, level = self._sift(p.images)
        return Permutation._trusted(residue), level

    def contains(self, p: Permutation) -> bool:
        residue, _ = self._sift(p.images)
        return residue == tuple(range(self.degree))

    def strong_generators(self) -> list[Permutation]:
        seen = {}
        for lv in self.levels:
            for g in lv._gens:
                seen.setdefault(g, None)
        return [Permutation._trusted(g) for g in seen]


def schreier_sims(gens: Sequence[Permutation], base: Sequence[int] = (),
                  seed: int | None = None) -> StabilizerChain:
    """Build a stabilizer chain for ``<gens>`` whose base starts with ``base``."""
    if seed is None:
        seed = _seed
    if not gens:
        raise DomainError("schreier_sims needs at least one generator")
    degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise DomainError("generators have differing degrees")
    e = tuple(range(degree))
    raw = [g.images for g in gens if g.images != e]
    chain = StabilizerChain(degree, [ChainLevel(b, degree) for b in base])
    for g in raw:
        _insert(chain, g)

    if raw:
        rng = random.Random(seed)
        # random subproducts; stop after a run of successful sifts
        streak = 0
        while streak < 12:
            w = e
            for g in raw:
                if rng.random() < 0.5:
                    w = _mul(w, g)
            for lv in chain.levels:
                for g in lv._gens:
                    if rng.random() < 0.5:
                        w = _mul(w, g)
            if _insert(chain, w):
                streak = 0
            else:
                streak += 1

    _deterministic_complete(chain)
    return chain


def extend_chain(chain: StabilizerChain, p: Permutation) -> bool:
    """Add p to the group described by ``chain`` in place; False if already a member."""
    if not _insert(chain, p.images):
        return False
    _deterministic_complete(chain)
    return True


def _insert(chain: StabilizerChain, p: tuple) -> bool:
    residue, level = chain._sift(p)
    if residue == tuple(range(chain.degree)):
        return False
    _place(chain, residue, level)
    return True


def _place(chain: StabilizerChain, y: tuple, level: int):
    if level == len(chain.levels):
        moved = next(x for x, z in enumerate(y) if x != z)
        chain.levels.append(ChainLevel(moved, chain.degree))
    # y fixes base points of levels < level, so it lies in each of those stabilizers
    for j in range(level + 1):
        chain.levels[j].add(y)


def _deterministic_complete(chain: StabilizerChain):
    e = tuple(range(chain.degree))
    i = len(chain.levels) - 1
    while i >= 0:
        lv = chain.levels[i]
        failed = None
        for x, ux in lv._trans.items():
            for s in lv._gens:
                h = _mul(_mul(ux, s), lv._inv[s[x]])
                if h == e:
                    continue
                residue, level = chain._sift(h, i + 1)
                if residue != e:
                    failed = (residue, level)
                    break
            if failed:
                break
        if failed:
            residue, level = failed
            _place(chain, residue, level)
            i = level
        else:
            i -= 1


def closure_elements(gens: Sequence[Permutation], cap: int = DEFAULT_ELEMENT_CAP) -> list[Permutation]:
    """All elements of ``<gens>`` by breadth-first closure (no chain involved)."""
    if not gens:
        raise DomainError("need at least one generator")
    e = Permutation.identity(gens[0].degree)
    seen = {e.images: e}
    queue = [e]
    for x in queue:
        for g in gens:
            y = x * g
            if y.images not in seen:
                seen[y.images] = y
                queue.append(y)
                if len(seen) > cap:
                    raise CapacityError(f"group exceeds {cap} elements")
    return queue


class PermGroup:
    """A permutation group given by generators; the chain is built on first use."""

    def __init__(self, generators: Iterable[Permutation], degree: int | None = None,
                 seed: int | None = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise DomainError("degree required for a group without generators")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise DomainError(f"generator of degree {g.degree} in group of degree {degree}")
        self.degree = degree
        self.generators = tuple(gens)
        self.seed = seed
        self._chain: StabilizerChain | None = None

    @classmethod
    def trivial(cls, degree: int) -> PermGroup:
        return cls([], degree)

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            gens = list(self.generators) or [Permutation.identity(self.degree)]
            self._chain = schreier_sims(gens, seed=self.seed)
        return self._chain

    def chain_with_base(self, base: Sequence[int]) -> StabilizerChain:
        gens = list(self.generators) or [Permutation.identity(self.degree)]
        return schreier_sims(gens, base=base, seed=self.seed)

    def order(self) -> int:
        return self.chain.order()

    def __len__(self):
        return self.order()

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise DomainError(f"degree mismatch: {p.degree} vs {self.degree}")
        return self.chain.contains(p)

    __contains__ = contains

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return all(other.contains(g) for g in self.generators)

    def equals(self, other: PermGroup) -> bool:
        return (self.degree == other.degree and self.order() == other.order()
                and self.is_subgroup_of(other))

    def iter_elements(self) -> Iterator[Permutation]:
        levels = self.chain.levels

        def rec(i, acc):
            if i < 0:
                yield acc
                return
            for u in levels[i].transversal.values():
                yield from rec(i - 1, acc * u)

        yield from rec(len(levels) - 1, self.identity())

    def elements(self, cap: int = DEFAULT_ELEMENT_CAP) -> list[Permutation]:
        """All elements, sorted by image tuple (so the identity comes first)."""
        if self.order() > cap:
            raise CapacityError(f"group order {self.order()} exceeds cap {cap}")
        return sorted(self.iter_elements(), key=lambda p: p.images)

    def elements_of_order(self, m: int, cap: int = DEFAULT_ELEMENT_CAP) -> list[Permutation]:
        return [p for p in self.elements(cap) if p.order() == m]

    def orbit(self, x: int) -> list[int]:
        out = [x]
        seen = {x}
        for y in out:
            for g in self.generators:
                z = g.images[y]
                if z not in seen:
                    seen.add(z)
                    out.append(z)
        return sorted(out)

    def orbits(self) -> list[list[int]]:
        seen = set()
        out = []
        for x in range(self.degree):
            if x not in seen:
                orb = self.orbit(x)
                seen.update(orb)
                out.append(orb)
        return out

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree if self.degree else True

    def is_regular(self) -> bool:
        return self.is_transitive() and self.order() == self.degree

    def stabilizer(self, x: int) -> PermGroup:
        chain = self.chain_with_base([x])
        gens = chain.levels[1].gens if len(chain.levels) > 1 else []
        return PermGroup(gens, self.degree, seed=self.seed)

    def conjugate(self, g: Permutation) -> PermGroup:
        return PermGroup([x.conjugate(g) for x in self.generators], self.degree, seed=self.seed)

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, ngens={len(self.generators)})"


def group_order(G: PermGroup) -> int:
    return G.order()


def contains(G: PermGroup, p: Permutation) -> bool:
    return G.contains(p)


def elements(G: PermGroup, cap: int = DEFAULT_ELEMENT_CAP) -> list[Permutation]:
    return G.elements(cap)


def orbits(G: PermGroup) -> list[list[int]]:
    return G.orbits()


def is_regular(G: PermGroup) -> bool:
    return G.is_regular()


def elements_of_order(G: PermGroup, m: int, cap: int = DEFAULT_ELEMENT_CAP) -> list[Permutation]:
    return G.elements_of_order(m, cap)


def are_conjugate_subgroups(G: PermGroup, A: PermGroup, B: PermGroup,
                            cap: int = DEFAULT_ELEMENT_CAP) -> Permutation | None:
    """Some g in G with ``A^g == B``, or None after scanning every element of G."""
    for X, name in ((A, "first"), (B, "second")):
        if not X.is_subgroup_of(G):
            raise DomainError(f"{name} subgroup is not contained in G")
    if G.order() > cap:
        raise CapacityError(f"group order {G.order()} exceeds cap {cap}")
    if A.order() != B.order():
        return None
    for g in G.elements(cap):
        if all(B.contains(a.conjugate(g)) for a in A.generators):
            return g
    return None
