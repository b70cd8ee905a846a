import dataclasses

import pytest
from helpers import bfs_closure

from dcirefute.abstract import abelian, cyclic
from dcirefute.certificate import verify_certificate
from dcirefute.closure import ArcSet
from dcirefute.construction import build
from dcirefute.dci import (
    PipelineError,
    RegularEmbedding,
    babai_refutation,
    cayley_digraph,
    classify_conjugacy,
    connection_set,
    cross_validate,
    dci_brute,
    find_regular_subgroups,
    verify_nonconjugacy,
    witness_digraphs,
)
from dcirefute.errors import CapacityError, DomainError, VerificationError
from dcirefute.groups import PermGroup
from dcirefute.perm import Permutation


def regular_subgroups_by_joins(G):
    """All regular subgroups of G, found by closing cyclic subgroups under joins.

    Every subgroup is reached from a cyclic one by adding one element at a
    time, so growing the family of subgroups of order <= degree is exhaustive.
    """
    n = G.degree
    elems = [p.images for p in G.elements()]
    family = set()
    frontier = []
    for x in elems:
        H = frozenset(bfs_closure([x]))
        if len(H) <= n and H not in family:
            family.add(H)
            frontier.append(H)
    while frontier:
        H = frontier.pop()
        for x in elems:
            if x in H:
                continue
            K = frozenset(bfs_closure(list(H) + [x]))
            if len(K) <= n and K not in family:
                family.add(K)
                frontier.append(K)
    return {H for H in family if len(H) == n and len({p[0] for p in H}) == n}


def element_set(K):
    return frozenset(p.images for p in K.elements())


@pytest.mark.parametrize("params", [(1, 1), (3, 1), (1, 3)])
def test_regular_subgroup_count_matches_join_oracle(params):
    b = build(params)
    found = find_regular_subgroups(b.G)
    oracle = regular_subgroups_by_joins(b.G)
    assert {element_set(K) for K in found} == oracle
    assert len(found) == 2
    assert element_set(b.R1) in oracle and element_set(b.R2) in oracle


def test_regular_subgroups_of_regular_group():
    C8 = PermGroup([Permutation.from_cycles([tuple(range(8))], 8)])
    found = find_regular_subgroups(C8)
    assert len(found) == 1 and found[0].equals(C8)


def test_regular_subgroups_of_dihedral_action():
    # D8 on 4 points has exactly the cyclic and the Klein regular subgroups
    D8 = PermGroup([Permutation.from_cycles([(0, 1, 2, 3)], 4), Permutation.from_cycles([(1, 3)], 4)])
    found = find_regular_subgroups(D8)
    assert {element_set(K) for K in found} == regular_subgroups_by_joins(D8)
    assert len(found) == 2


def test_find_regular_subgroups_preconditions(b31):
    with pytest.raises(DomainError):
        find_regular_subgroups(PermGroup([Permutation.from_cycles([(0, 1)], 4)]))
    with pytest.raises(CapacityError):
        find_regular_subgroups(b31.G, cap=10)


def test_regular_subgroups_invariants(b31):
    for K in find_regular_subgroups(b31.G):
        assert K.is_transitive() and K.order() == K.degree
        assert K.is_subgroup_of(b31.G)


def test_classify_conjugacy_examples(b31):
    G = b31.G
    assert len(classify_conjugacy(G, [b31.R1])) == 1
    classes = classify_conjugacy(G, [b31.R1, b31.R2])
    assert len(classes) == 2
    g = b31.tau2 * b31.rho1
    classes = classify_conjugacy(G, [b31.R1, b31.R1.conjugate(g)])
    assert len(classes) == 1
    cls = classes[0]
    for K, c in zip(cls.members, cls.conjugators):
        assert cls.members[0].conjugate(c).equals(K)


@pytest.mark.parametrize("params", [(1, 1), (3, 1), (5, 1), (1, 3)])
def test_nonconjugacy_both_routes(params):
    assert verify_nonconjugacy(build(params)) == {"exhaustive": True, "algebraic": True}


def test_regular_embedding_labels(b31):
    e = RegularEmbedding.of(b31.R1)
    assert e.labels == list(range(24))
    assert e.elements[0].is_identity()
    # right translation by label y sends x to x*y
    t = e.table
    for x in range(24):
        for y in range(24):
            assert e.elements[y](x) == t.mul(x, y)
    with pytest.raises(DomainError):
        RegularEmbedding.of(b31.G)


def test_connection_set_examples():
    C8 = PermGroup([Permutation.from_cycles([tuple(range(8))], 8)])
    e = RegularEmbedding.of(C8)
    assert connection_set(e, ArcSet.from_arcs(8, [])) == []
    cyc = ArcSet.from_arcs(8, ((x, (x + 1) % 8) for x in range(8)))
    assert connection_set(e, cyc) == [1]


def test_cayley_digraph_matches_connection_set():
    R = abelian(2, 4)
    S = (1, 3, 6)
    D = cayley_digraph(R, S)
    e = RegularEmbedding.of(R.right_regular())
    assert len(D) == 8 * 3
    assert connection_set(e, D) == sorted(S)


def test_witness_k1(b11):
    w = witness_digraphs(b11)
    assert w.kind == "digraph"
    assert w.colors == [1, 2] and w.S == [1, 2, 5] and w.T == [1, 5, 6]
    # R1 = <tau1> labels point x by x, so Cay(C8, S) is the witness digraph itself
    assert cayley_digraph(cyclic(8), w.S) == w.arcs
    iso = Permutation(tuple(w.iso))
    assert cayley_digraph(cyclic(8), w.S).image(iso) == cayley_digraph(cyclic(8), w.T)


def test_witness_iso_maps_cayley_digraphs(b31, cert31):
    from dcirefute.certificate import cayley_arcs, regular_table
    g = cert31.generators
    t = regular_table([g["tau1"], g["rho1"], g["rho2"]], 24)
    iso = cert31.iso
    assert {(iso[u], iso[v]) for u, v in cayley_arcs(t, cert31.S)} == cayley_arcs(t, cert31.T)


def test_colored_fallback(b11):
    w = witness_digraphs(b11, max_candidates=0)
    assert w.kind == "colored"
    assert len(w.S) == len(w.T) == len(w.colors)


def test_pipeline_certificates(cert11, cert31):
    assert cert11.kind == "digraph" and cert11.aut_count == 4
    assert cert31.kind == "digraph" and cert31.aut_count == 24
    assert cert31.colors == [1, 8] and cert31.S == [1, 5, 10] and cert31.T == [3, 7, 10]
    for cert in (cert11, cert31):
        assert all(cert.checks.values())
        assert cert.checks["regular_classes_at_least_2"]
        assert verify_certificate(cert).ok


def test_pipeline_rejects_even_k():
    with pytest.raises(DomainError):
        babai_refutation((2, 1))


def test_pipeline_stage_failure(monkeypatch):
    import dcirefute.dci as dci

    monkeypatch.setattr(dci, "two_closure", lambda G, cap: PermGroup.trivial(G.degree))
    with pytest.raises(PipelineError) as err:
        dci.babai_refutation((1, 1))
    assert err.value.check == "two_closed"


@pytest.mark.parametrize("R", [cyclic(2), cyclic(3), cyclic(5)], ids=lambda R: R.name)
def test_brute_dci_prime_cyclic(R):
    assert dci_brute(R) == []


def test_brute_dci_c8():
    pairs = dci_brute(cyclic(8))
    assert len(pairs) == 8
    for S, T in pairs:
        assert len(S) == len(T)
        assert {tuple(sorted(u * x % 8 for x in S)) for u in (1, 3, 5, 7)}.isdisjoint({T})


def test_brute_dci_limits():
    with pytest.raises(CapacityError):
        dci_brute(cyclic(9))
    assert dci_brute(cyclic(8), size_cap=2) == []


def test_cross_validate(cert11):
    report = cross_validate((1, 1), cert11)
    assert all(report.values())
    with pytest.raises(DomainError):
        cross_validate((3, 1))


def test_cross_validate_rejects_corrupted(cert11):
    bad = dataclasses.replace(cert11, T=list(cert11.S))
    with pytest.raises(VerificationError):
        cross_validate((1, 1), bad)
