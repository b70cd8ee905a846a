"""Certificate document for a DCI refutation, and its stand-alone verifier.

The verifier rebuilds everything from the serialized fields.  It uses
breadth-first closure rather than stabilizer chains and its own
automorphism enumeration, so it shares no search code with the pipeline
that produced the certificate.

Abstract group convention: R = <tau1, rho1, rho2> acts regularly, and the
element of R sending point 0 to point x is labelled x.  Then
``x * y = y-element applied to x`` and Cay(R, S) has arcs ``g -> s*g``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .errors import DomainError

GENERATOR_NAMES = ("tau1", "tau2", "rho1", "rho2")
WITNESS_KINDS = ("digraph", "colored")


class CertificateFormatError(DomainError):
    """The certificate document is malformed."""


@dataclass
class DciCertificate:
    k: int
    r: int
    degree: int
    generators: dict[str, list[int]]
    kind: str
    colors: list[int]
    S: list  # list[int] for digraphs, list[list[int]] for coloured witnesses
    T: list
    iso: list[int]
    aut_count: int
    checks: dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "params": {"k": self.k, "r": self.r},
            "degree": self.degree,
            "generators": {name: list(self.generators[name]) for name in GENERATOR_NAMES},
            "witness": {
                "kind": self.kind,
                "colors": list(self.colors),
                "S": self.S,
                "T": self.T,
                "iso": list(self.iso),
            },
            "aut_count": self.aut_count,
            "checks": dict(self.checks),
        }

    def dumps(self) -> str:
        return _format(self.to_dict(), 0) + "\n"

    @classmethod
    def loads(cls, text: str) -> DciCertificate:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateFormatError(f"not valid JSON: {exc}") from exc
        return cls.from_dict(doc)

    @classmethod
    def from_dict(cls, doc) -> DciCertificate:
        try:
            params = doc["params"]
            w = doc["witness"]
            cert = cls(
                k=_int(params["k"]), r=_int(params["r"]),
                degree=_int(doc["degree"]),
                generators={name: _int_list(doc["generators"][name]) for name in GENERATOR_NAMES},
                kind=w["kind"],
                colors=_int_list(w["colors"]),
                S=w["S"], T=w["T"],
                iso=_int_list(w["iso"]),
                aut_count=_int(doc["aut_count"]),
                checks={str(k): bool(v) for k, v in doc["checks"].items()},
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise CertificateFormatError(f"missing or mistyped field: {exc}") from exc
        if cert.kind not in WITNESS_KINDS:
            raise CertificateFormatError(f"unknown witness kind {cert.kind!r}")
        if cert.kind == "digraph":
            cert.S, cert.T = _int_list(cert.S), _int_list(cert.T)
        else:
            if not isinstance(cert.S, list) or not isinstance(cert.T, list):
                raise CertificateFormatError("coloured witness needs lists of connection sets")
            cert.S = [_int_list(x) for x in cert.S]
            cert.T = [_int_list(x) for x in cert.T]
        return cert


def _int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise CertificateFormatError(f"expected an integer, got {x!r}")
    return x


def _int_list(xs) -> list[int]:
    if not isinstance(xs, list):
        raise CertificateFormatError(f"expected a list, got {type(xs).__name__}")
    return [_int(x) for x in xs]


def _format(obj, depth: int) -> str:
    # dicts one key per line, lists on a single line: stable and diffable
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        pad = "  " * (depth + 1)
        items = [f"{pad}{json.dumps(k)}: {_format(v, depth + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * depth + "}"
    return json.dumps(obj, separators=(", ", ": "))


# verification ----------------------------------------------------------------

@dataclass
class VerificationResult:
    ok: bool
    log: list[str]

    def __bool__(self):
        return self.ok

    @property
    def failed(self) -> list[str]:
        return [line for line in self.log if line.startswith("FAIL")]


def _is_perm(xs, n) -> bool:
    return len(xs) == n and sorted(xs) == list(range(n))


def _closure(gens: list[tuple[int, ...]], n: int) -> dict[int, tuple[int, ...]]:
    """Elements of <gens> keyed by the image of point 0 (meaningful when regular)."""
    e = tuple(range(n))
    seen = {e}
    queue = [e]
    for x in queue:
        for g in gens:
            y = tuple(g[v] for v in x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    by_point: dict[int, tuple[int, ...]] = {}
    for p in queue:
        by_point.setdefault(p[0], p)
    if len(queue) != n or len(by_point) != n:
        return {}
    return by_point


def regular_table(gens: list[list[int]], n: int) -> list[list[int]] | None:
    """Multiplication table of a regular group labelled by images of point 0."""
    elems = _closure([tuple(g) for g in gens], n)
    if not elems:
        return None
    return [[elems[y][x] for y in range(n)] for x in range(n)]


def _table_ok(t) -> bool:
    n = len(t)
    full = list(range(n))
    if any(sorted(row) != full for row in t):
        return False
    if any(sorted(t[a][c] for a in range(n)) != full for c in range(n)):
        return False
    if any(t[0][x] != x or t[x][0] != x for x in range(n)):
        return False
    return all(t[t[a][b]][c] == t[a][t[b][c]] for a in range(n) for b in range(n) for c in range(n))


def _order(t, a) -> int:
    m, x = 1, a
    while x != 0:
        x = t[x][a]
        m += 1
    return m


def enumerate_automorphisms(t, gens: list[int]) -> list[list[int]]:
    """Automorphisms of the table ``t`` by trying every image of the generators ``gens``."""
    n = len(t)
    orders = [_order(t, a) for a in range(n)]
    cands = [[b for b in range(n) if orders[b] == orders[g]] for g in gens]
    found = []
    for imgs in itertools.product(*cands):
        f = {0: 0}
        queue = [0]
        ok = True
        for x in queue:
            for g, h in zip(gens, imgs):
                y, fy = t[x][g], t[f[x]][h]
                if y in f:
                    if f[y] != fy:
                        ok = False
                        break
                else:
                    f[y] = fy
                    queue.append(y)
            if not ok:
                break
        if not ok or len(f) != n or len(set(f.values())) != n:
            continue
        fl = [f[x] for x in range(n)]
        if all(fl[t[a][b]] == t[fl[a]][fl[b]] for a in range(n) for b in range(n)):
            found.append(fl)
    return found


def cayley_arcs(t, S) -> set[tuple[int, int]]:
    n = len(t)
    return {(g, t[s][g]) for g in range(n) for s in S}


def verify_certificate(cert: DciCertificate, rebuild=None) -> VerificationResult:
    """Re-check a certificate from its own fields.

    ``rebuild`` optionally maps ``(k, r)`` to the expected generator image
    lists; when given, the stored generators must match it.
    """
    log: list[str] = []
    ok = True

    def record(name, passed, detail=""):
        nonlocal ok
        ok = ok and passed
        log.append(f"{'ok  ' if passed else 'FAIL'} {name}" + (f": {detail}" if detail else ""))
        return passed

    n = cert.degree
    if not record("degree", cert.r in (1, 3) and cert.k % 2 == 1 and n == 8 * cert.k * cert.r,
                  f"k={cert.k} r={cert.r} degree={n}"):
        return VerificationResult(False, log)
    gens = cert.generators
    if not record("generators_are_permutations",
                  all(_is_perm(gens[name], n) for name in GENERATOR_NAMES)):
        return VerificationResult(False, log)
    if rebuild is not None:
        record("generators_match_construction", rebuild(cert.k, cert.r) == gens)

    t = regular_table([gens["tau1"], gens["rho1"], gens["rho2"]], n)
    if not record("R_regular", t is not None, "<tau1, rho1, rho2> is not regular"):
        return VerificationResult(False, log)
    if not record("group_table", _table_ok(t)):
        return VerificationResult(False, log)
    t2 = regular_table([gens["tau2"], gens["rho1"], gens["rho2"]], n)
    record("R2_regular", t2 is not None)

    if cert.kind == "digraph":
        fam_S, fam_T = [cert.S], [cert.T]
    else:
        fam_S, fam_T = cert.S, cert.T
    sets_ok = (len(fam_S) == len(fam_T) and len(fam_S) > 0
               and all(all(0 < x < n for x in X) and len(set(X)) == len(X)
                       for X in fam_S + fam_T))
    if not record("connection_sets", sets_ok, "elements must be distinct non-identity labels"):
        return VerificationResult(False, log)
    record("equal_sizes", all(len(a) == len(b) for a, b in zip(fam_S, fam_T)))

    iso = cert.iso
    if record("iso_bijection", _is_perm(iso, n)):
        iso_ok = all(
            {(iso[u], iso[v]) for u, v in cayley_arcs(t, Si)} == cayley_arcs(t, Ti)
            for Si, Ti in zip(fam_S, fam_T))
        record("iso_maps_Cay_S_to_Cay_T", iso_ok)

    # tau1 = order-8 element, rho1/rho2 = generators of the odd-order part
    pt_gens = sorted({gens[name][0] for name in ("tau1", "rho1", "rho2")} - {0})
    auts = enumerate_automorphisms(t, pt_gens)
    record("aut_count", len(auts) == cert.aut_count, f"enumerated {len(auts)}, stored {cert.aut_count}")
    target = [frozenset(X) for X in fam_T]
    hit = None
    for a in auts:
        if all(frozenset(a[x] for x in Si) == Ti for Si, Ti in zip(fam_S, target)):
            hit = a
            break
    record("no_automorphism_maps_S_to_T", hit is None,
           "" if hit is None else f"automorphism {hit} maps S to T")
    failed_checks = [name for name, v in cert.checks.items() if not v]
    record("stored_checks", not failed_checks, ", ".join(failed_checks))
    return VerificationResult(ok, log)
