"""Permutations of ``{0, ..., n-1}`` and the flat encoding of Z8 x Zk x Zr.

Permutations act on the right: ``x^(p*q) = (x^p)^q``.  ``p * q`` therefore
applies ``p`` first and ``q`` second, and ``p.conjugate(g)`` is ``g^-1 p g``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import DomainError


class TripleCoord(NamedTuple):
    i: int
    j: int
    l: int


def encode(c: Sequence[int], k: int, r: int) -> int:
    """Flatten ``(i, j, l)`` to the point ``i + 8*j + 8*k*l``."""
    i, j, l = c
    if not (0 <= i < 8 and 0 <= j < k and 0 <= l < r):
        raise DomainError(f"coordinate {tuple(c)} out of range for k={k}, r={r}")
    return i + 8 * j + 8 * k * l


def decode(p: int, k: int, r: int) -> TripleCoord:
    if not 0 <= p < 8 * k * r:
        raise DomainError(f"point {p} out of range for degree {8 * k * r}")
    l, rest = divmod(p, 8 * k)
    j, i = divmod(rest, 8)
    return TripleCoord(i, j, l)


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(n)):
            raise DomainError("image list is not a bijection of range(%d)" % n)

    @classmethod
    def _trusted(cls, images):
        # skips the bijection check for internally produced images
        obj = object.__new__(cls)
        object.__setattr__(obj, "images", tuple(images))
        return obj

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls._trusted(range(degree))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Permutation:
        images = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            cyc = list(cyc)
            for x in cyc:
                if not 0 <= x < degree:
                    raise DomainError(f"point {x} outside degree {degree}")
                if x in seen:
                    raise DomainError(f"point {x} repeated across cycles")
                seen.add(x)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a] = b
        return cls._trusted(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def _check(self, other: Permutation):
        if len(self.images) != len(other.images):
            raise DomainError(
                f"degree mismatch: {len(self.images)} vs {len(other.images)}")

    def __mul__(self, other: Permutation) -> Permutation:
        self._check(other)
        q = other.images
        return Permutation._trusted([q[x] for x in self.images])

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation._trusted(inv)

    def __pow__(self, m: int) -> Permutation:
        base = self if m >= 0 else self.inverse()
        m = abs(m)
        result = Permutation.identity(self.degree)
        while m:
            if m & 1:
                result = result * base
            base = base * base
            m >>= 1
        return result

    def conjugate(self, g: Permutation) -> Permutation:
        """Return ``g^-1 * self * g``, i.e. the image of self under relabelling by g."""
        self._check(g)
        gi = g.images
        out = [0] * len(gi)
        for x, y in enumerate(self.images):
            out[gi[x]] = gi[y]
        return Permutation._trusted(out)

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point."""
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        lengths = [len(c) for c in self.cycles()]
        lengths += [1] * (self.degree - sum(lengths))
        return tuple(sorted(lengths, reverse=True))

    def order(self) -> int:
        return math.lcm(1, *(len(c) for c in self.cycles()))

    def moved_points(self) -> list[int]:
        return [x for x, y in enumerate(self.images) if x != y]

    def __repr__(self):
        cyc = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())
        return f"Permutation<{self.degree}>{cyc or '()'}"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``p`` then ``q``."""
    return p * q


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def conjugate(p: Permutation, g: Permutation) -> Permutation:
    return p.conjugate(g)


def power(p: Permutation, m: int) -> Permutation:
    return p ** m


def element_order(p: Permutation) -> int:
    return p.order()


def from_cycles(cycles, degree: int) -> Permutation:
    return Permutation.from_cycles(cycles, degree)


# Generator text format:
#   img: 1 0 3 2
#   cyc(8): (0 1 2 3)(4 5)
# one permutation per line, '#' starts a comment.

_CYC_HEADER = re.compile(r"^cyc\((\d+)\)\s*:\s*(.*)$")
_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_permutation(line: str) -> Permutation:
    line = line.split("#", 1)[0].strip()
    if line.startswith("img:"):
        try:
            images = [int(t) for t in line[4:].split()]
        except ValueError as exc:
            raise DomainError(f"bad image list: {line!r}") from exc
        return Permutation(tuple(images))
    m = _CYC_HEADER.match(line)
    if not m:
        raise DomainError(f"unrecognised permutation line: {line!r}")
    degree = int(m.group(1))
    body = m.group(2)
    if _CYCLE.sub("", body).strip():
        raise DomainError(f"junk outside cycles: {line!r}")
    cycles = []
    for grp in _CYCLE.findall(body):
        try:
            pts = [int(t) for t in grp.replace(",", " ").split()]
        except ValueError as exc:
            raise DomainError(f"bad cycle ({grp})") from exc
        if pts:
            cycles.append(pts)
    return Permutation.from_cycles(cycles, degree)


def parse_generators(text: str) -> list[Permutation]:
    """Parse a generator file; all permutations must share one degree."""
    gens = []
    for raw in text.splitlines():
        if raw.split("#", 1)[0].strip():
            gens.append(parse_permutation(raw))
    if gens and len({g.degree for g in gens}) != 1:
        raise DomainError("generators have differing degrees")
    return gens


def format_permutation(p: Permutation, style: str = "img") -> str:
    if style == "img":
        return "img: " + " ".join(map(str, p.images))
    if style == "cyc":
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in p.cycles())
        return f"cyc({p.degree}): {body}"
    raise DomainError(f"unknown style {style!r}")


def format_generators(gens: Iterable[Permutation], style: str = "img") -> str:
    return "".join(format_permutation(g, style) + "\n" for g in gens)
