import pytest
from helpers import bfs_closure, small_groups
from hypothesis import given, settings

from dcirefute.errors import CapacityError, DomainError
from dcirefute.groups import (
    PermGroup,
    are_conjugate_subgroups,
    closure_elements,
    contains,
    elements,
    elements_of_order,
    group_order,
    is_regular,
    orbits,
    schreier_sims,
    use_seed,
)
from dcirefute.perm import Permutation, power


def test_chain_examples(b11):
    assert schreier_sims([Permutation.identity(8)]).order() == 1
    assert schreier_sims([b11.tau1]).order() == 8
    assert schreier_sims([b11.tau1, b11.tau2]).order() == 16


def test_chain_levels_fix_earlier_base_points(b31):
    chain = b31.G.chain
    base = chain.base
    for i, level in enumerate(chain.levels):
        for g in level.gens:
            assert all(g(base[j]) == base[j] for j in range(i))
        for pt, u in level.transversal.items():
            assert u(base[i]) == pt


@pytest.mark.parametrize("params", [(1, 1), (3, 1), (1, 3), (5, 1)])
def test_h_has_order_16(params):
    from dcirefute.construction import build
    assert group_order(build(params).H) == 16


def test_orders_at_k3(b31):
    assert group_order(b31.G) == 48
    assert group_order(b31.R1) == 24
    assert len(bfs_closure([g.images for g in b31.G.generators])) == 48
    assert len(bfs_closure([g.images for g in b31.R1.generators])) == 24


def test_membership_examples(b31):
    assert contains(b31.R1, b31.tau1)
    assert not contains(b31.R1, power(b31.tau2, 5))
    assert contains(b31.H, b31.tau2 * b31.h)
    with pytest.raises(DomainError):
        contains(b31.R1, Permutation.identity(8))


def test_elements_examples(b11, b31):
    assert elements(PermGroup([Permutation.identity(4)])) == [Permutation.identity(4)]
    H = elements(b11.H)
    forms = {(b11.tau2 ** l * b11.h ** e).images for l in range(8) for e in range(2)}
    assert len(H) == 16 and {p.images for p in H} == forms
    G = elements(b31.G)
    assert len(G) == 48 == len({p.images for p in G})
    with pytest.raises(CapacityError):
        elements(b31.G, cap=47)


def test_orbit_examples(b31):
    assert orbits(PermGroup([Permutation.identity(8)])) == [[x] for x in range(8)]
    assert orbits(b31.R1) == [list(range(24))]
    rho_orbits = orbits(PermGroup([b31.rho1]))
    assert len(rho_orbits) == 8 and all(len(o) == 3 for o in rho_orbits)


def test_regularity_examples(b31):
    assert is_regular(b31.R1)
    assert not is_regular(b31.H)
    assert not is_regular(b31.G)


def test_elements_of_order_examples(b31):
    C = PermGroup([b31.tau1])
    assert {p.images for p in elements_of_order(C, 8)} == {
        power(b31.tau1, e).images for e in (1, 3, 5, 7)}
    assert elements_of_order(b31.H, 16) == []
    eight = elements_of_order(b31.R2, 8)
    assert eight and not {p.images for p in eight} & {p.images for p in elements(b31.R1)}


def test_conjugate_subgroups_examples(b31):
    G = b31.G
    g = are_conjugate_subgroups(G, b31.R1, b31.R1)
    assert g is not None and b31.R1.conjugate(g).equals(b31.R1)
    assert are_conjugate_subgroups(G, b31.R2, b31.R1) is None
    A = PermGroup([b31.tau1])
    B = PermGroup([b31.tau1.conjugate(b31.rho1)])
    g = are_conjugate_subgroups(G, A, B)
    assert g is not None
    assert all(B.contains(a.conjugate(g)) for a in A.generators)


def test_conjugate_subgroups_preconditions(b31):
    outside = PermGroup([Permutation.from_cycles([(0, 1)], 24)])
    with pytest.raises(DomainError):
        are_conjugate_subgroups(b31.G, outside, b31.R1)
    with pytest.raises(CapacityError):
        are_conjugate_subgroups(b31.G, b31.R1, b31.R2, cap=10)


def test_symmetric_group_order():
    n = 7
    G = PermGroup([Permutation.from_cycles([(0, 1)], n), Permutation.from_cycles([tuple(range(n))], n)])
    assert G.order() == 5040
    assert len(closure_elements(G.generators)) == 5040


def test_seed_does_not_change_order(b31):
    for seed in (0, 1, 99):
        with use_seed(seed):
            assert PermGroup(b31.G.generators).order() == 48


def test_stabilizer(b31):
    S = b31.G.stabilizer(0)
    assert S.order() == 2
    assert all(g(0) == 0 for g in S.generators)


@given(small_groups())
@settings(max_examples=60, deadline=None)
def test_chain_order_matches_closure(data):
    G, order = data
    assert G.order() == order
    assert len(G.elements()) == order


@given(small_groups(max_order=500))
@settings(max_examples=40, deadline=None)
def test_membership_agrees_with_closure(data):
    G, order = data
    inside = bfs_closure([g.images for g in G.generators])
    for p in G.elements():
        assert p.images in inside
    n = G.degree
    # a transposition is in G iff the closure says so
    t = Permutation.from_cycles([(0, 1)], n)
    assert G.contains(t) == (t.images in inside)


@given(small_groups(max_order=300))
@settings(max_examples=30, deadline=None)
def test_products_stay_inside_and_lagrange(data):
    G, order = data
    elems = G.elements()
    for x in elems[:10]:
        for y in elems[-10:]:
            assert G.contains(x * y)
    assert all(order % p.order() == 0 for p in elems)
