import dataclasses

import pytest

from dcirefute.construction import ConstructionParams, build, normal_form_in_H, verify_bundle
from dcirefute.errors import CapacityError, DomainError, VerificationError
from dcirefute.groups import PermGroup
from dcirefute.perm import Permutation, decode, encode

CHECKS = ["H_order_16", "H_normal_form", "tau2_conj_h_is_tau2_pow5",
          "A_abelian_inverted", "R1_iso_R2", "R1_R2_regular", "index_2"]
PARAMS = [(1, 1), (3, 1), (5, 1), (1, 3), (7, 1)]


def coordinate_image(p, k, r, fn):
    """Expected image of point p under the coordinate map fn."""
    return encode(fn(*decode(p, k, r)), k, r)


@pytest.mark.parametrize("k, r", [(2, 1), (0, 1), (-1, 1), (3, 2), (3, 0)])
def test_invalid_params(k, r):
    with pytest.raises(DomainError):
        ConstructionParams(k, r)


def test_degenerate_k1(b11):
    assert b11.rho1.is_identity() and b11.rho2.is_identity()
    assert b11.R1.order() == 8


def test_point_examples_k3(b31):
    assert b31.tau2(1) == 6
    assert b31.rho1(1) == 17


@pytest.mark.parametrize("k, r", PARAMS)
def test_generators_follow_coordinate_rules(k, r):
    b = build((k, r))
    tau1 = {i: (i + 1) % 8 for i in range(8)}
    cyc = (0, 1, 6, 7, 4, 5, 2, 3)
    tau2 = {a: c for a, c in zip(cyc, cyc[1:] + cyc[:1])}
    h = {0: 0, 1: 5, 2: 2, 3: 7, 4: 4, 5: 1, 6: 6, 7: 3}
    rules = {
        "tau1": lambda i, j, l: (tau1[i], j, l),
        "tau2": lambda i, j, l: (tau2[i], j, l),
        "rho1": lambda i, j, l: (i, (j + (1 if i % 2 == 0 else -1)) % k, l),
        "rho2": lambda i, j, l: (i, j, (l + (1 if i % 2 == 0 else -1)) % r),
        "h": lambda i, j, l: (h[i], j, l),
    }
    for name, fn in rules.items():
        perm = getattr(b, name)
        assert perm.images == tuple(coordinate_image(p, k, r, fn) for p in range(8 * k * r)), name


@pytest.mark.parametrize("k, r", PARAMS)
def test_orders_and_relations(k, r):
    b = build((k, r))
    assert b.tau1.order() == 8 and b.tau2.order() == 8
    if k > 1:
        assert b.rho1.order() == k
    if r == 3:
        assert b.rho2.order() == 3
    for t in (b.tau1, b.tau2):
        assert b.rho1.conjugate(t) == b.rho1.inverse()
        assert b.rho2.conjugate(t) == b.rho2.inverse()
    A = PermGroup([b.rho1, b.rho2], b.degree)
    assert A.order() == k * r
    assert all(A.contains(a.conjugate(g)) for a in A.generators for g in b.G.generators)
    assert b.G.order() == 16 * k * r
    assert b.G.order() == 2 * b.R1.order() == 2 * b.R2.order()


def test_conjugation_of_rho1_by_tau1_pointwise(b31):
    # tau1^-1 rho1 tau1 moves j the opposite way on each fibre
    k, r = 3, 1
    expected = tuple(
        coordinate_image(p, k, r, lambda i, j, l: (i, (j - (1 if i % 2 == 0 else -1)) % k, l))
        for p in range(24))
    assert b31.rho1.conjugate(b31.tau1).images == expected


@pytest.mark.parametrize("k, r", PARAMS)
def test_verify_bundle_passes(k, r):
    report = verify_bundle(build((k, r)))
    assert list(report) == CHECKS
    assert all(report.values())


def test_verify_bundle_detects_wrong_tau2(b31):
    bad = dataclasses.replace(b31, tau2=b31.tau1)
    report = verify_bundle(bad, strict=False)
    # tau1 also satisfies tau1^h = tau1^5, so the tampering shows up in H and the index
    assert b31.tau1.conjugate(b31.h) == b31.tau1 ** 5
    assert report["tau2_conj_h_is_tau2_pow5"] is True
    assert not report["H_order_16"] and not report["H_normal_form"] and not report["index_2"]
    with pytest.raises(VerificationError) as err:
        verify_bundle(bad)
    assert err.value.check == "H_order_16"


def test_verify_bundle_above_abstract_ceiling():
    # R has order 72 here, beyond the abstract-table ceiling
    with pytest.raises(CapacityError):
        verify_bundle(build((3, 3)), strict=False)


def test_normal_form_examples(b11):
    assert normal_form_in_H(Permutation.identity(8), b11) == (0, 0)
    assert normal_form_in_H(b11.h, b11) == (0, 1)
    assert normal_form_in_H(b11.tau1, b11) == (5, 1)
    with pytest.raises(DomainError):
        normal_form_in_H(Permutation.from_cycles([(0, 1)], 8), b11)


def test_normal_form_tau1_by_scan(b31):
    # independent scan over the 16 candidate words
    hits = [(l, e) for l in range(8) for e in range(2)
            if b31.tau2 ** l * b31.h ** e == b31.tau1]
    assert hits == [(5, 1)] == [normal_form_in_H(b31.tau1, b31)]


def test_normal_form_is_bijective(b13):
    forms = {normal_form_in_H(p, b13) for p in b13.H.elements()}
    assert forms == {(l, e) for l in range(8) for e in range(2)}
