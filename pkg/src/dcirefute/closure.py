"""Orbital colourings, 2-closures and digraph automorphism/isomorphism search.

Everything here works on an ``n x n`` integer colour matrix ``M``; a
permutation ``g`` preserves ``M`` when ``M[u^g, v^g] == M[u, v]`` for all
pairs.  Digraphs are the special case with colours {no arc, arc, diagonal}.

The search is individualisation-refinement: refine an ordered partition to
an equitable one, pick the first smallest non-singleton cell, branch on its
points.  Automorphisms are collected level by level along the leftmost path,
skipping candidates already in a known orbit, which yields a generating set
of the full group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, DomainError
from .groups import PermGroup, extend_chain, schreier_sims
from .perm import Permutation, decode

DEFAULT_NODE_CAP = 10_000_000
MAX_SEARCH_DEGREE = 64
BRUTE_DEGREE = 8


@dataclass(frozen=True)
class OrbitalColoring:
    color: np.ndarray  # n x n, read-only
    ncolors: int

    @property
    def degree(self) -> int:
        return self.color.shape[0]

    def diagonal_colors(self) -> set[int]:
        return {int(c) for c in np.diag(self.color)}

    def off_diagonal_colors(self) -> list[int]:
        diag = self.diagonal_colors()
        return [c for c in range(self.ncolors) if c not in diag]

    def class_of(self, c: int) -> list[tuple[int, int]]:
        us, vs = np.nonzero(self.color == c)
        return list(zip(us.tolist(), vs.tolist()))


@dataclass(frozen=True)
class ArcSet:
    degree: int
    arcs: frozenset

    def __post_init__(self):
        for u, v in self.arcs:
            if u == v:
                raise DomainError(f"loop at {u}")
            if not (0 <= u < self.degree and 0 <= v < self.degree):
                raise DomainError(f"arc ({u}, {v}) outside degree {self.degree}")

    @classmethod
    def from_arcs(cls, degree: int, arcs: Iterable[tuple[int, int]]) -> ArcSet:
        return cls(degree, frozenset((int(u), int(v)) for u, v in arcs))

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.degree, self.degree), dtype=np.int64)
        for u, v in self.arcs:
            m[u, v] = 1
        np.fill_diagonal(m, 2)
        return m

    def image(self, g: Permutation) -> ArcSet:
        im = g.images
        return ArcSet(self.degree, frozenset((im[u], im[v]) for u, v in self.arcs))

    def out_neighbours(self, u: int) -> list[int]:
        return sorted(v for x, v in self.arcs if x == u)

    def __len__(self):
        return len(self.arcs)


def orbital_coloring(G: PermGroup) -> OrbitalColoring:
    """Colour pairs by their G-orbit, numbering colours in row-major first appearance."""
    n = G.degree
    color = np.full((n, n), -1, dtype=np.int64)
    gens = [g.images for g in G.generators]
    c = 0
    for u in range(n):
        for v in range(n):
            if color[u, v] >= 0:
                continue
            color[u, v] = c
            stack = [(u, v)]
            while stack:
                x, y = stack.pop()
                for g in gens:
                    a, b = g[x], g[y]
                    if color[a, b] < 0:
                        color[a, b] = c
                        stack.append((a, b))
            c += 1
    color.setflags(write=False)
    return OrbitalColoring(color, c)


def preserves(M: np.ndarray, g: Permutation) -> bool:
    idx = np.asarray(g.images)
    return bool(np.array_equal(M[np.ix_(idx, idx)], M))


class _Searcher:
    """Partition refinement over a colour matrix, with a shared node budget."""

    def __init__(self, M: np.ndarray, node_cap: int):
        self.M = np.asarray(M)
        self.MT = np.ascontiguousarray(self.M.T)
        self.n = self.M.shape[0]
        self.node_cap = node_cap
        self.nodes = 0

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.node_cap:
            raise CapacityError(f"search exceeded {self.node_cap} nodes")

    def initial(self) -> tuple[list[list[int]], list[bool]]:
        diag = np.diag(self.M)
        cells = [np.flatnonzero(diag == c).tolist() for c in sorted(set(diag.tolist()))]
        return cells, [True] * len(cells)

    def refine(self, cells, pending) -> tuple[list[list[int]], tuple]:
        cells = [list(c) for c in cells]
        pending = list(pending)
        trace = []
        while True:
            try:
                s = pending.index(True)
            except ValueError:
                break
            pending[s] = False
            W = np.asarray(cells[s])
            new_cells, new_pending = [], []
            for X, flag in zip(cells, pending):
                if len(X) == 1:
                    new_cells.append(X)
                    new_pending.append(flag)
                    continue
                Xa = np.asarray(X)
                out = np.sort(self.M[np.ix_(Xa, W)], axis=1)
                inn = np.sort(self.MT[np.ix_(Xa, W)], axis=1)
                keys = np.concatenate([out, inn], axis=1)
                uniq, inv = np.unique(keys, axis=0, return_inverse=True)
                if len(uniq) == 1:
                    new_cells.append(X)
                    new_pending.append(flag)
                    continue
                inv = np.asarray(inv).reshape(-1)
                for t in range(len(uniq)):
                    new_cells.append(sorted(Xa[inv == t].tolist()))
                    new_pending.append(True)
                trace.append((s, len(X), tuple(np.bincount(inv).tolist())))
            cells, pending = new_cells, new_pending
        return cells, (tuple(len(c) for c in cells), tuple(trace))

    @staticmethod
    def target(cells) -> int | None:
        best = None
        for idx, c in enumerate(cells):
            if len(c) > 1 and (best is None or len(c) < len(cells[best])):
                best = idx
        return best

    def individualize(self, cells, idx, v):
        rest = [x for x in cells[idx] if x != v]
        new_cells = cells[:idx] + [[v], rest] + cells[idx + 1:]
        pending = [False] * len(new_cells)
        pending[idx] = pending[idx + 1] = True
        return self.refine(new_cells, pending)

    def first_path(self):
        """Leftmost root-to-leaf path: per level (cells, target index, chosen point, trace)."""
        self._tick()
        cells, trace = self.refine(*self.initial())
        path = []
        traces = [trace]
        while (idx := self.target(cells)) is not None:
            v = cells[idx][0]
            path.append((cells, idx, v))
            self._tick()
            cells, trace = self.individualize(cells, idx, v)
            traces.append(trace)
        leaf = [c[0] for c in cells]
        return path, traces, leaf

    def search_leaves(self, cells, depth, traces, accept):
        """DFS below a node whose trace already matched; returns the first accepted leaf."""
        idx = self.target(cells)
        if idx is None:
            leaf = [c[0] for c in cells]
            return leaf if accept(leaf) else None
        if depth + 1 >= len(traces):
            return None
        for v in cells[idx]:
            self._tick()
            sub, trace = self.individualize(cells, idx, v)
            if trace != traces[depth + 1]:
                continue
            found = self.search_leaves(sub, depth + 1, traces, accept)
            if found is not None:
                return found
        return None


def _leaf_map(src_leaf, dst_leaf) -> Permutation:
    images = [0] * len(src_leaf)
    for a, b in zip(src_leaf, dst_leaf):
        images[a] = b
    return Permutation(tuple(images))


def _prefix_orbits(chain, prefix: list[int]) -> list[set[int]]:
    """For each i, the orbit of ``prefix[i]`` under the pointwise stabilizer of ``prefix[:i]``."""
    return [set(chain.levels[i].orbit) for i in range(len(prefix))]


def matrix_automorphisms(M: np.ndarray, node_cap: int = DEFAULT_NODE_CAP,
                         known: Sequence[Permutation] = (),
                         max_degree: int = MAX_SEARCH_DEGREE,
                         stop_on_new: bool = False) -> PermGroup:
    """The full group of permutations preserving the colour matrix ``M``.

    ``known`` seeds the search with automorphisms already in hand.  With
    ``stop_on_new`` the search returns as soon as it finds one automorphism
    outside ``<known>``, so the result equals ``<known>`` exactly when the
    full group does.
    """
    M = np.asarray(M)
    n = M.shape[0]
    if n > max_degree:
        raise CapacityError(f"degree {n} exceeds search ceiling {max_degree}")
    found = []
    for g in known:
        if not preserves(M, g):
            raise DomainError("seeded permutation does not preserve the colouring")
        if not g.is_identity():
            found.append(g)

    s = _Searcher(M, node_cap)
    path, traces, leaf0 = s.first_path()
    prefix_pts = [v for _, _, v in path]

    def is_aut(leaf):
        return preserves(M, _leaf_map(leaf0, leaf))

    chain = schreier_sims(found or [Permutation.identity(n)], base=prefix_pts)
    orbits = _prefix_orbits(chain, prefix_pts)
    for level in range(len(path) - 1, -1, -1):
        cells, idx, v = path[level]
        for w in cells[idx]:
            if w in orbits[level]:
                continue
            s._tick()
            sub, trace = s.individualize(cells, idx, w)
            leaf = None
            if trace == traces[level + 1]:
                leaf = s.search_leaves(sub, level + 1, traces, is_aut)
            if leaf is not None:
                g = _leaf_map(leaf0, leaf)
                found.append(g)
                if stop_on_new:
                    return PermGroup(found, n)
                extend_chain(chain, g)
                orbits = _prefix_orbits(chain, prefix_pts)
    return PermGroup(found, n)


def color_automorphisms(C: OrbitalColoring, node_cap: int = DEFAULT_NODE_CAP,
                        known: Sequence[Permutation] = ()) -> PermGroup:
    return matrix_automorphisms(C.color, node_cap, known)


def two_closure(G: PermGroup, node_cap: int = DEFAULT_NODE_CAP) -> PermGroup:
    """Automorphism group of the orbital colouring of G; always contains G."""
    return color_automorphisms(orbital_coloring(G), node_cap, known=G.generators)


def _generate_from(perms: Iterable[Permutation], degree: int) -> PermGroup:
    gens: list[Permutation] = []
    G = PermGroup.trivial(degree)
    for p in perms:
        if not G.contains(p):
            gens.append(p)
            G = PermGroup(gens, degree)
    return G


def brute_two_closure(G: PermGroup) -> PermGroup:
    """The 2-closure by testing every permutation of the points (degree <= 8)."""
    n = G.degree
    if n > BRUTE_DEGREE:
        raise CapacityError(f"brute force limited to degree {BRUTE_DEGREE}, got {n}")
    M = orbital_coloring(G).color
    P = np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)
    ok = (M[P[:, :, None], P[:, None, :]] == M[None, :, :]).all(axis=(1, 2))
    kept = [Permutation(tuple(row)) for row in P[ok].tolist()]
    closure = _generate_from(kept, n)
    assert closure.order() == len(kept)
    return closure


def arcs_of_colors(C: OrbitalColoring, colors: Iterable[int]) -> ArcSet:
    colors = set(colors)
    bad = colors & C.diagonal_colors()
    if bad:
        raise DomainError(f"diagonal colours {sorted(bad)} cannot form arcs")
    if colors:
        mask = np.isin(C.color, sorted(colors))
        us, vs = np.nonzero(mask)
        return ArcSet.from_arcs(C.degree, zip(us.tolist(), vs.tolist()))
    return ArcSet(C.degree, frozenset())


def digraph_automorphisms(A: ArcSet, node_cap: int = DEFAULT_NODE_CAP,
                          known: Sequence[Permutation] = (),
                          stop_on_new: bool = False) -> PermGroup:
    return matrix_automorphisms(A.matrix(), node_cap, known, stop_on_new=stop_on_new)


def matrix_isomorphism(A: np.ndarray, B: np.ndarray,
                       node_cap: int = DEFAULT_NODE_CAP,
                       max_degree: int = MAX_SEARCH_DEGREE) -> Permutation | None:
    """A permutation g with ``B[u^g, v^g] == A[u, v]``, or None."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise DomainError("matrices of different degree")
    n = A.shape[0]
    if n > max_degree:
        raise CapacityError(f"degree {n} exceeds search ceiling {max_degree}")
    if sorted(A.ravel().tolist()) != sorted(B.ravel().tolist()):
        return None
    if sorted(np.diag(A).tolist()) != sorted(np.diag(B).tolist()):
        return None

    sa = _Searcher(A, node_cap)
    _, traces, leaf_a = sa.first_path()
    sb = _Searcher(B, node_cap)
    sb._tick()
    cells, trace = sb.refine(*sb.initial())
    if trace != traces[0]:
        return None

    def accept(leaf):
        idx = np.asarray(_leaf_map(leaf_a, leaf).images)
        return bool(np.array_equal(B[np.ix_(idx, idx)], A))

    leaf = sb.search_leaves(cells, 0, traces, accept)
    return None if leaf is None else _leaf_map(leaf_a, leaf)


def digraph_isomorphism(A: ArcSet, B: ArcSet, node_cap: int = DEFAULT_NODE_CAP) -> Permutation | None:
    if A.degree != B.degree:
        raise DomainError("digraphs of different degree")
    if len(A) != len(B):
        return None
    return matrix_isomorphism(A.matrix(), B.matrix(), node_cap)


# export formats --------------------------------------------------------------

def to_adjacency_text(A: ArcSet) -> str:
    lines = [str(A.degree)] + [f"{u} {v}" for u, v in sorted(A.arcs)]
    return "\n".join(lines) + "\n"


def from_adjacency_text(text: str) -> ArcSet:
    rows = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows or len(rows[0]) != 1:
        raise DomainError("adjacency text must start with the vertex count")
    try:
        n = int(rows[0][0])
        arcs = [(int(u), int(v)) for u, v in rows[1:]]
    except ValueError as exc:
        raise DomainError("malformed adjacency text") from exc
    return ArcSet.from_arcs(n, arcs)


def to_dot(A: ArcSet, k: int | None = None, r: int | None = None, name: str = "witness") -> str:
    out = [f"digraph {name} {{"]
    for x in range(A.degree):
        if k is not None and r is not None:
            i, j, l = decode(x, k, r)
            label = f"({i},{j},{l})"
        else:
            label = str(x)
        out.append(f'  {x} [label="{label}"];')
    for u, v in sorted(A.arcs):
        out.append(f"  {u} -> {v};")
    out.append("}")
    return "\n".join(out) + "\n"
