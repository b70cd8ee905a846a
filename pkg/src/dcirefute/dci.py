"""Babai's criterion applied to the construction, plus a brute-force DCI oracle.

A group R fails the DCI property as soon as some 2-closed group contains two
regular subgroups isomorphic to R that are not conjugate in it.  The
pipeline here establishes exactly that for ``G = <R1, R2>`` and then turns
it into a pair of isomorphic Cayley digraphs Cay(R, S), Cay(R, T) with no
automorphism of R carrying S to T.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

from .abstract import (AbstractGroup, abstract_automorphisms, abstract_isomorphism,
                       cyclic, to_abstract)
from .certificate import DciCertificate, verify_certificate
from .closure import (DEFAULT_NODE_CAP, ArcSet, arcs_of_colors, digraph_automorphisms,
                      digraph_isomorphism, orbital_coloring, two_closure)
from .construction import ConstructionBundle, ConstructionParams, build, verify_bundle
from .errors import CapacityError, DomainError, VerificationError
from .groups import DEFAULT_ELEMENT_CAP, PermGroup, are_conjugate_subgroups
from .perm import Permutation

log = logging.getLogger(__name__)

BASE_POINT = 0
BRUTE_ORDER = 8


# regular subgroups ----------------------------------------------------------

def _key(K: PermGroup) -> tuple:
    return tuple(p.images for p in K.elements())


def find_regular_subgroups(G2: PermGroup, cap: int = DEFAULT_ELEMENT_CAP) -> list[PermGroup]:
    """Every regular subgroup of a transitive group, sorted by element list.

    Grows a subgroup one point at a time: the first point outside the current
    orbit of 0 must be reached by exactly one element of the final regular
    subgroup, and that element lies in the coset of the stabilizer of 0.
    """
    n = G2.degree
    if not G2.is_transitive():
        raise DomainError("group is not transitive")
    if G2.order() > cap:
        raise CapacityError(f"group order {G2.order()} exceeds cap {cap}")
    chain = G2.chain_with_base([BASE_POINT])
    transversal = chain.levels[0].transversal
    stab = PermGroup(chain.levels[1].gens if len(chain.levels) > 1 else [], n).elements(cap)

    found: dict[tuple, PermGroup] = {}
    visited: set[tuple] = set()

    def rec(gens):
        K = PermGroup(gens, n)
        key = _key(K)
        if key in visited:
            return
        visited.add(key)
        orbit = set(K.orbit(BASE_POINT))
        if len(orbit) == n:
            found[key] = K
            return
        x = min(set(range(n)) - orbit)
        for s in stab:
            g = s * transversal[x]
            K2 = PermGroup(gens + [g], n)
            order = K2.order()
            if order <= n and len(K2.orbit(BASE_POINT)) == order:
                rec(gens + [g])

    rec([])
    return [found[key] for key in sorted(found)]


@dataclass
class ConjugacyClass:
    members: list[PermGroup]
    conjugators: list[Permutation]  # representative^g == member


def classify_conjugacy(G2: PermGroup, subs: list[PermGroup],
                       cap: int = DEFAULT_ELEMENT_CAP) -> list[ConjugacyClass]:
    classes: list[ConjugacyClass] = []
    for K in subs:
        for cls in classes:
            g = are_conjugate_subgroups(G2, cls.members[0], K, cap)
            if g is not None:
                if not cls.members[0].conjugate(g).equals(K):
                    raise VerificationError("conjugator", "recorded conjugator does not conjugate")
                cls.members.append(K)
                cls.conjugators.append(g)
                break
        else:
            classes.append(ConjugacyClass([K], [G2.identity()]))
    return classes


def verify_nonconjugacy(b: ConstructionBundle, cap: int = DEFAULT_ELEMENT_CAP) -> dict[str, bool]:
    """Non-conjugacy of R1 and R2 in G, by exhaustion and by the tau2^h argument.

    The second route checks: tau2^h = tau2^5; every element of G is
    ``tau2^l h^e rho1^i rho2^j``; each conjugate ``tau2^(h^e rho1^i rho2^j)``
    lies in R2; and no element of order 8 in R2 lies in R1.
    """
    out = {"exhaustive": are_conjugate_subgroups(b.G, b.R2, b.R1, cap) is None}
    k, r = b.params.k, b.params.r
    words = set()
    for l, e, i, j in itertools.product(range(8), range(2), range(k), range(r)):
        words.add((b.tau2 ** l * b.h ** e * b.rho1 ** i * b.rho2 ** j).images)
    normal_form = len(words) == b.G.order() and all(
        b.G.contains(Permutation(w)) for w in words)
    conj_in_R2 = all(
        b.R2.contains(b.tau2.conjugate(b.h ** e * b.rho1 ** i * b.rho2 ** j))
        for e, i, j in itertools.product(range(2), range(k), range(r)))
    order8_avoid = not any(b.R1.contains(p) for p in b.R2.elements_of_order(8, cap))
    out["algebraic"] = (b.tau2.conjugate(b.h) == b.tau2 ** 5 and normal_form
                        and conj_in_R2 and order8_avoid)
    return out


# labellings and witnesses ---------------------------------------------------

@dataclass
class RegularEmbedding:
    """A regular subgroup with points labelled by abstract elements.

    Elements are sorted by image tuple, which for a regular group puts the
    element sending 0 to x at index x; the labelling is thus the identity on
    points and the base point 0 carries the identity.
    """
    subgroup: PermGroup
    table: AbstractGroup
    elements: list[Permutation]
    labels: list[int] = field(init=False)

    def __post_init__(self):
        self.labels = [0] * self.subgroup.degree
        for idx, p in enumerate(self.elements):
            self.labels[p.images[BASE_POINT]] = idx

    @classmethod
    def of(cls, R: PermGroup, cap: int = DEFAULT_ELEMENT_CAP) -> RegularEmbedding:
        if not R.is_regular():
            raise DomainError("subgroup is not regular")
        table, elems = to_abstract(R, cap)
        return cls(R, table, elems)


def connection_set(e: RegularEmbedding, arcs: ArcSet) -> list[int]:
    return sorted(e.labels[v] for u, v in arcs.arcs if u == BASE_POINT)


@dataclass
class Witness:
    kind: str  # "digraph" or "colored"
    colors: list[int]
    S: list
    T: list
    iso: list[int]
    arcs: ArcSet | None = None


def witness_digraphs(b: ConstructionBundle, node_cap: int = DEFAULT_NODE_CAP,
                     max_candidates: int | None = None) -> Witness:
    """Smallest union of orbitals whose automorphism group is exactly G.

    Candidates are colour subsets by increasing size, then lexicographic.
    Without a hit the whole orbital colouring is returned as a coloured witness.
    """
    G = b.G
    C = orbital_coloring(G)
    off = C.off_diagonal_colors()
    e1 = RegularEmbedding.of(b.R1)
    e2 = RegularEmbedding.of(b.R2)
    phi = abstract_isomorphism(e2.table, e1.table)
    if phi is None:
        raise VerificationError("R1_iso_R2")
    # point x carries label x in both embeddings, so phi is also the relabelling of points
    iso = [phi[e2.labels[x]] for x in range(G.degree)]

    tried = 0
    for size in range(1, len(off) + 1):
        for combo in itertools.combinations(off, size):
            if max_candidates is not None and tried >= max_candidates:
                break
            tried += 1
            U = arcs_of_colors(C, combo)
            A = digraph_automorphisms(U, node_cap, known=G.generators, stop_on_new=True)
            if A.order() == G.order():
                S = connection_set(e1, U)
                T = sorted(phi[x] for x in connection_set(e2, U))
                log.info("digraph witness after %d candidates: colours %s", tried, combo)
                return Witness("digraph", list(combo), S, T, iso, U)
    log.info("no single-digraph witness among %d candidates; using colours", tried)
    S = [connection_set(e1, arcs_of_colors(C, [c])) for c in off]
    T = [sorted(phi[x] for x in connection_set(e2, arcs_of_colors(C, [c]))) for c in off]
    return Witness("colored", off, S, T, iso)


# the pipeline ----------------------------------------------------------------

class PipelineError(VerificationError):
    """A named pipeline stage failed."""


def _stage(name, ok, detail=""):
    if not ok:
        raise PipelineError(name, detail)


def babai_refutation(params: ConstructionParams | tuple[int, int],
                     node_cap: int = DEFAULT_NODE_CAP,
                     element_cap: int = DEFAULT_ELEMENT_CAP) -> DciCertificate:
    if not isinstance(params, ConstructionParams):
        params = ConstructionParams(*params)
    b = build(params)
    G = b.G
    checks: dict[str, bool] = {}

    try:
        checks.update(verify_bundle(b))
    except VerificationError as exc:
        raise PipelineError("construction", str(exc)) from exc

    closure = two_closure(G, node_cap)
    checks["two_closed"] = closure.order() == G.order() and closure.equals(G)
    _stage("two_closed", checks["two_closed"], f"|G| = {G.order()}, |G^(2)| = {closure.order()}")

    R_table, _ = to_abstract(b.R1, element_cap)
    regular = find_regular_subgroups(G, element_cap)
    iso_regular = [K for K in regular
                   if abstract_isomorphism(to_abstract(K, element_cap)[0], R_table) is not None]
    keys = {_key(K) for K in iso_regular}
    checks["R1_R2_found_regular"] = _key(b.R1) in keys and _key(b.R2) in keys
    _stage("regular_subgroups", checks["R1_R2_found_regular"])

    classes = classify_conjugacy(G, iso_regular, element_cap)
    which = {}
    for idx, cls in enumerate(classes):
        for K in cls.members:
            which[_key(K)] = idx
    checks["regular_classes_at_least_2"] = len(classes) >= 2
    routes = verify_nonconjugacy(b, element_cap)
    checks["R1_R2_not_conjugate"] = (which[_key(b.R1)] != which[_key(b.R2)]
                                     and routes["exhaustive"])
    checks["R1_R2_not_conjugate_algebraic"] = routes["algebraic"]
    _stage("conjugacy", checks["regular_classes_at_least_2"] and checks["R1_R2_not_conjugate"]
           and checks["R1_R2_not_conjugate_algebraic"])
    log.info("(k=%d, r=%d): %d regular subgroups isomorphic to R in %d classes",
             params.k, params.r, len(iso_regular), len(classes))

    w = witness_digraphs(b, node_cap)
    checks["witness_digraph"] = w.kind == "digraph"

    auts = abstract_automorphisms(R_table)
    cert = DciCertificate(
        k=params.k, r=params.r, degree=params.degree,
        generators={name: list(p.images) for name, p in b.named_generators().items()},
        kind=w.kind, colors=w.colors, S=w.S, T=w.T, iso=w.iso,
        aut_count=len(auts),
        checks={name: v for name, v in checks.items() if name != "witness_digraph"},
    )
    result = verify_certificate(cert, rebuild=construction_generators)
    _stage("certificate", result.ok, "; ".join(result.failed))
    return cert


def construction_generators(k: int, r: int) -> dict[str, list[int]]:
    b = build(ConstructionParams(k, r))
    return {name: list(p.images) for name, p in b.named_generators().items()}


# brute-force DCI oracle --------------------------------------------------------

def cayley_digraph(R: AbstractGroup, S) -> ArcSet:
    t = R.table
    return ArcSet.from_arcs(R.order, ((g, t[s][g]) for g in range(R.order) for s in S))


def dci_brute(R: AbstractGroup, size_cap: int | None = None,
              node_cap: int = DEFAULT_NODE_CAP) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All pairs (S, T) with Cay(R,S) isomorphic to Cay(R,T) but S, T in different Aut(R)-orbits.

    Pairs are unordered (S listed before T in enumeration order).
    """
    if R.order > BRUTE_ORDER:
        raise CapacityError(f"brute-force DCI check limited to order {BRUTE_ORDER}")
    nonid = [x for x in range(R.order) if x != R.identity]
    auts = abstract_automorphisms(R)
    top = len(nonid) if size_cap is None else min(size_cap, len(nonid))
    subsets = [c for m in range(top + 1) for c in itertools.combinations(nonid, m)]

    def orbit_key(S):
        return min(tuple(sorted(a[x] for x in S)) for a in auts)

    classes: list[list[tuple[int, ...]]] = []
    digraphs = {}
    for S in subsets:
        D = cayley_digraph(R, S)
        digraphs[S] = D
        for cls in classes:
            rep = cls[0]
            if len(rep) == len(S) and digraph_isomorphism(digraphs[rep], D, node_cap) is not None:
                cls.append(S)
                break
        else:
            classes.append([S])

    violations = []
    for cls in classes:
        keys = {S: orbit_key(S) for S in cls}
        for S, T in itertools.combinations(cls, 2):
            if keys[S] != keys[T]:
                violations.append((S, T))
    return violations


def cross_validate(params: ConstructionParams | tuple[int, int],
                   certificate: DciCertificate | None = None) -> dict[str, bool]:
    """Check that the pipeline's witness for R = C8 is among the brute-force violations."""
    if not isinstance(params, ConstructionParams):
        params = ConstructionParams(*params)
    if (params.k, params.r) != (1, 1):
        raise DomainError("cross-validation needs k = 1, r = 1 (degree 8)")
    cert = certificate if certificate is not None else babai_refutation(params)
    report = {"certificate_verifies": verify_certificate(cert).ok}
    if cert.kind != "digraph":
        report["witness_in_brute_violations"] = False
        raise VerificationError("witness_in_brute_violations", "coloured witness")
    C8 = cyclic(8)
    t = _table_from_cert(cert)
    f = abstract_isomorphism(t, C8)
    S = tuple(sorted(f[x] for x in cert.S))
    T = tuple(sorted(f[x] for x in cert.T))
    pairs = {frozenset(p) for p in dci_brute(C8)}
    report["witness_in_brute_violations"] = frozenset((S, T)) in pairs
    report["brute_nonempty"] = bool(pairs)
    for name, ok in report.items():
        if not ok:
            raise VerificationError(name)
    return report


def _table_from_cert(cert: DciCertificate) -> AbstractGroup:
    from .certificate import regular_table
    g = cert.generators
    t = regular_table([g["tau1"], g["rho1"], g["rho2"]], cert.degree)
    if t is None:
        raise VerificationError("R_regular")
    return AbstractGroup(tuple(tuple(row) for row in t), 0)
