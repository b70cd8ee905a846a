"""Small abstract groups as multiplication tables.

Elements are indices ``0..order-1``; ``table[a][b]`` is the index of ``a*b``
(``a`` first, matching the right action used for permutations).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

from .errors import CapacityError, DomainError
from .groups import DEFAULT_ELEMENT_CAP, PermGroup
from .perm import Permutation

ABSTRACT_CEILING = 64


@dataclass(frozen=True)
class AbstractGroup:
    table: tuple[tuple[int, ...], ...]
    identity: int = 0
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        row = self.table[a]
        return row.index(self.identity)

    def element_order(self, a: int) -> int:
        m, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            m += 1
        return m

    def power(self, a: int, m: int) -> int:
        if m < 0:
            a, m = self.inverse(a), -m
        x = self.identity
        for _ in range(m):
            x = self.table[x][a]
        return x

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(a))

    def generated(self, gens: Sequence[int]) -> set[int]:
        seen = {self.identity}
        queue = [self.identity]
        for x in queue:
            for g in gens:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def generating_set(self) -> list[int]:
        """A short generating set: greedily take the highest-order element not yet covered."""
        by_order = sorted(range(self.order), key=lambda a: (-self.element_order(a), a))
        gens: list[int] = []
        span = {self.identity}
        for a in by_order:
            if len(span) == self.order:
                break
            if a not in span:
                gens.append(a)
                span = self.generated(gens)
        return gens

    def is_latin_square(self) -> bool:
        full = set(range(self.order))
        rows = all(set(row) == full for row in self.table)
        cols = all({row[c] for row in self.table} == full for c in range(self.order))
        return rows and cols

    def is_associative(self) -> bool:
        t = self.table
        n = self.order
        return all(t[t[a][b]][c] == t[a][t[b][c]]
                   for a in range(n) for b in range(n) for c in range(n))

    def right_regular(self) -> PermGroup:
        """The right regular representation, generated by a generating set."""
        gens = self.generating_set() or [self.identity]
        return PermGroup([self.translation(g) for g in gens], self.order)

    def translation(self, g: int) -> Permutation:
        """Right multiplication ``x -> x*g`` as a permutation of the indices."""
        return Permutation(tuple(self.table[x][g] for x in range(self.order)))


def from_operation(elements: Sequence[Hashable], op: Callable, identity: Hashable,
                   name: str = "") -> AbstractGroup:
    """Tabulate a group given its elements and a binary operation; identity gets index 0."""
    elems = [identity] + [e for e in elements if e != identity]
    index = {e: i for i, e in enumerate(elems)}
    if len(index) != len(elems):
        raise DomainError("duplicate elements")
    table = tuple(tuple(index[op(a, b)] for b in elems) for a in elems)
    return AbstractGroup(table, 0, name)


def to_abstract(G: PermGroup, cap: int = DEFAULT_ELEMENT_CAP) -> tuple[AbstractGroup, list[Permutation]]:
    """Tabulate G; element ``i`` is ``elements[i]`` with elements sorted by image tuple.

    For a regular group this sorting labels each element by the image of point 0.
    """
    elems = G.elements(cap)
    index = {p.images: i for i, p in enumerate(elems)}
    table = tuple(tuple(index[(a * b).images] for b in elems) for a in elems)
    return AbstractGroup(table, 0), elems


def _check_ceiling(*groups: AbstractGroup):
    for g in groups:
        if g.order > ABSTRACT_CEILING:
            raise CapacityError(f"abstract group of order {g.order} exceeds ceiling {ABSTRACT_CEILING}")


def _extend(G1: AbstractGroup, G2: AbstractGroup, gens: Sequence[int],
            images: Sequence[int]) -> list[int] | None:
    """Extend ``gens[i] -> images[i]`` to a homomorphism by walking the Cayley graph."""
    f = {G1.identity: G2.identity}
    queue = [G1.identity]
    for x in queue:
        fx = f[x]
        for g, h in zip(gens, images):
            y = G1.table[x][g]
            fy = G2.table[fx][h]
            if y in f:
                if f[y] != fy:
                    return None
            else:
                f[y] = fy
                queue.append(y)
    if len(f) != G1.order or len(set(f.values())) != G1.order:
        return None
    return [f[x] for x in range(G1.order)]


def _homomorphisms(G1: AbstractGroup, G2: AbstractGroup, first_only: bool):
    _check_ceiling(G1, G2)
    if G1.order != G2.order:
        return []
    gens = G1.generating_set()
    if not gens:
        return [[G2.identity]]
    orders2 = [G2.element_order(b) for b in range(G2.order)]
    cands = [[b for b in range(G2.order) if orders2[b] == G1.element_order(g)] for g in gens]
    found = []
    for imgs in itertools.product(*cands):
        f = _extend(G1, G2, gens, imgs)
        if f is not None:
            found.append(f)
            if first_only:
                break
    return found


def abstract_isomorphism(G1: AbstractGroup, G2: AbstractGroup) -> list[int] | None:
    """An isomorphism as a list ``f`` with ``f[x]`` the image of x, or None."""
    found = _homomorphisms(G1, G2, first_only=True)
    return found[0] if found else None


def abstract_automorphisms(G: AbstractGroup) -> list[list[int]]:
    """Every automorphism of G, as image lists sorted lexicographically."""
    return sorted(_homomorphisms(G, G, first_only=False))


# small groups ---------------------------------------------------------------

def cyclic(n: int) -> AbstractGroup:
    return from_operation(range(n), lambda a, b: (a + b) % n, 0, f"C{n}")


def abelian(*ns: int) -> AbstractGroup:
    """Direct product of cyclic groups ``C_n1 x C_n2 x ...``."""
    elems = list(itertools.product(*(range(n) for n in ns)))
    op = lambda a, b: tuple((x + y) % n for x, y, n in zip(a, b, ns))
    name = "x".join(f"C{n}" for n in ns)
    return from_operation(elems, op, tuple(0 for _ in ns), name)


def metacyclic(m: int, n: int, u: int, name: str = "") -> AbstractGroup:
    """``C_m x| C_n`` with the generator of C_n acting on C_m as ``a -> a^u``.

    Pairs ``(x, y)`` stand for ``a^x b^y`` with ``b^-1 a b = a^u``.
    """
    if pow(u, n, m) != 1 % m:
        raise DomainError(f"u={u} does not have order dividing {n} mod {m}")
    elems = list(itertools.product(range(m), range(n)))

    def op(p, q):
        x, y = p
        x2, y2 = q
        # b^y a^x2 = a^(x2 * u^-y) b^y, and u^-y = u^(n-y) since u^n = 1
        w = pow(u, (n - y) % n, m)
        return ((x + x2 * w) % m, (y + y2) % n)

    return from_operation(elems, op, (0, 0), name or f"C{m}:C{n}[{u}]")


def dihedral(n: int) -> AbstractGroup:
    return metacyclic(n, 2, n - 1 if n > 1 else 0, f"D{2 * n}")


def dicyclic(m: int) -> AbstractGroup:
    """Dicyclic group of order 4m: ``<a, x | a^2m, x^2 = a^m, x^-1 a x = a^-1>``."""
    elems = list(itertools.product(range(2 * m), range(2)))

    def op(p, q):
        i, j = p
        i2, j2 = q
        if j == 0:
            return ((i + i2) % (2 * m), j2)
        if j2 == 0:
            return ((i - i2) % (2 * m), 1)
        return ((i - i2 + m) % (2 * m), 0)

    name = "Q8" if m == 2 else ("Q16" if m == 4 else f"Dic{m}")
    return from_operation(elems, op, (0, 0), name)


def alternating4() -> AbstractGroup:
    elems = [p for p in itertools.permutations(range(4))
             if sum(1 for a, b in itertools.combinations(p, 2) if a > b) % 2 == 0]
    op = lambda a, b: tuple(b[a[x]] for x in range(4))
    return from_operation(elems, op, (0, 1, 2, 3), "A4")


def small_groups(max_order: int = 16) -> list[AbstractGroup]:
    """A table of small groups, one representative per listed isomorphism type."""
    out = [cyclic(n) for n in range(1, max_order + 1)]
    extra = [
        abelian(2, 2), abelian(2, 4), abelian(2, 2, 2), abelian(3, 3), abelian(2, 6),
        abelian(4, 4), abelian(2, 8), abelian(2, 2, 4), abelian(2, 2, 2, 2),
        dihedral(3), dihedral(4), dihedral(5), dihedral(6), dihedral(7), dihedral(8),
        dicyclic(2), dicyclic(3), dicyclic(4), alternating4(),
        metacyclic(8, 2, 5, "M16"), metacyclic(8, 2, 3, "SD16"), metacyclic(4, 4, 3, "C4:C4"),
        abelian_times(dihedral(4), 2, "D8xC2"), abelian_times(dicyclic(2), 2, "Q8xC2"),
        _c4c2_by_c2(), _pauli(),
    ]
    out += [g for g in extra if g.order <= max_order]
    return out


def _c4c2_by_c2() -> AbstractGroup:
    """``(C4 x C2) x| C2`` with the involution acting as ``(x, y) -> (x, y + x)``."""
    elems = list(itertools.product(range(4), range(2), range(2)))
    op = lambda p, q: ((p[0] + q[0]) % 4, (p[1] + q[1] + p[2] * q[0]) % 2, (p[2] + q[2]) % 2)
    return from_operation(elems, op, (0, 0, 0), "(C4xC2):C2")


def _pauli() -> AbstractGroup:
    """Central product C4 o D8, as triples ``(z, x, w)`` standing for ``i^z X^x Z^w``."""
    elems = list(itertools.product(range(4), range(2), range(2)))
    # Z X = -X Z
    op = lambda p, q: ((p[0] + q[0] + 2 * p[2] * q[1]) % 4, (p[1] + q[1]) % 2, (p[2] + q[2]) % 2)
    return from_operation(elems, op, (0, 0, 0), "C4oD8")


def abelian_times(G: AbstractGroup, n: int, name: str = "") -> AbstractGroup:
    """Direct product ``G x C_n``."""
    elems = list(itertools.product(range(G.order), range(n)))
    op = lambda a, b: (G.table[a[0]][b[0]], (a[1] + b[1]) % n)
    return from_operation(elems, op, (G.identity, 0), name or f"{G.name}xC{n}")


def by_name(name: str) -> AbstractGroup:
    """Parse names like ``c8``, ``c2xc4`` into a direct product of cyclic groups."""
    parts = name.lower().split("x")
    try:
        ns = [int(p[1:]) for p in parts if p.startswith("c")]
    except ValueError:
        ns = []
    if not ns or len(ns) != len(parts) or any(n < 1 for n in ns):
        raise DomainError(f"unknown group name {name!r}")
    return cyclic(ns[0]) if len(ns) == 1 else abelian(*ns)
