"""Independent oracles and generators shared by the test modules."""

import random

from hypothesis import strategies as st

from dcirefute.groups import PermGroup
from dcirefute.perm import Permutation


def bfs_closure(gens):
    """Element set of <gens> as image tuples, by plain breadth-first search."""
    n = len(gens[0])
    e = tuple(range(n))
    seen = {e}
    queue = [e]
    for x in queue:
        for g in gens:
            y = tuple(g[v] for v in x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def random_generators(rng: random.Random, max_degree=8, max_order=2000):
    """Random generator list of degree <= max_degree whose group has order <= max_order."""
    while True:
        n = rng.randint(2, max_degree)
        gens = []
        for _ in range(rng.randint(1, 3)):
            if rng.random() < 0.5:
                xs = list(range(n))
                rng.shuffle(xs)
            else:
                # a product of short cycles keeps groups small more often
                xs = list(range(n))
                pts = rng.sample(range(n), rng.randint(2, n))
                for a, b in zip(pts[::2], pts[1::2]):
                    xs[a], xs[b] = xs[b], xs[a]
            gens.append(tuple(xs))
        elems = bfs_closure(gens)
        if len(elems) <= max_order:
            return [Permutation(g) for g in gens], len(elems)


@st.composite
def small_groups(draw, max_degree=8, max_order=2000):
    seed = draw(st.integers(0, 2**32 - 1))
    gens, order = random_generators(random.Random(seed), max_degree, max_order)
    return PermGroup(gens), order


def union_find_orbitals(gens, n):
    """Number of orbits of <gens> on ordered pairs, via union-find."""
    parent = list(range(n * n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for u in range(n):
            for v in range(n):
                a, b = find(u * n + v), find(g[u] * n + g[v])
                if a != b:
                    parent[a] = b
    return len({find(x) for x in range(n * n)})


def index2_instances(max_order=12, per_group=3):
    """Pairs (name, G) with G = <regular R, sigma> for involutory automorphisms sigma of R."""
    from dcirefute.abstract import abstract_automorphisms, small_groups

    out = []
    for R in small_groups(max_order):
        n = R.order
        regular = R.right_regular()
        invols = [a for a in abstract_automorphisms(R)
                  if a != list(range(n)) and all(a[a[x]] == x for x in range(n))]
        for a in invols[:per_group]:
            sigma = Permutation(tuple(a))
            out.append((R.name, PermGroup(list(regular.generators) + [sigma], n)))
    return out
