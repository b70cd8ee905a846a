"""The two regular copies of ``A x| C8`` inside ``G = <R1, R2>`` on Z8 x Zk x Zr.

Points are flattened with :func:`dcirefute.perm.encode`.  For parameters
``(k, r)`` with k odd and r in {1, 3}:

* ``tau1`` cycles the first coordinate along (0 1 2 3 4 5 6 7),
* ``tau2`` cycles it along (0 1 6 7 4 5 2 3),
* ``rho1`` adds 1 to j on even i and subtracts 1 on odd i,
* ``rho2`` does the same to l,
* ``h`` acts as (1 5)(3 7) on the first coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abstract import abstract_isomorphism, to_abstract
from .errors import DomainError, VerificationError
from .groups import PermGroup
from .perm import Permutation, decode, encode

TAU1_CYCLE = (0, 1, 2, 3, 4, 5, 6, 7)
TAU2_CYCLE = (0, 1, 6, 7, 4, 5, 2, 3)
H_CYCLES = ((1, 5), (3, 7))


@dataclass(frozen=True)
class ConstructionParams:
    k: int
    r: int = 1

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1 or self.k % 2 == 0:
            raise DomainError(f"k must be a positive odd integer, got {self.k!r}")
        if self.r not in (1, 3):
            raise DomainError(f"r must be 1 or 3, got {self.r!r}")

    @property
    def degree(self) -> int:
        return 8 * self.k * self.r


@dataclass
class ConstructionBundle:
    params: ConstructionParams
    tau1: Permutation
    tau2: Permutation
    rho1: Permutation
    rho2: Permutation
    h: Permutation
    R1: PermGroup = field(init=False)
    R2: PermGroup = field(init=False)
    H: PermGroup = field(init=False)
    G: PermGroup = field(init=False)

    def __post_init__(self):
        self.R1 = PermGroup([self.tau1, self.rho1, self.rho2], self.degree)
        self.R2 = PermGroup([self.tau2, self.rho1, self.rho2], self.degree)
        self.H = PermGroup([self.tau1, self.tau2], self.degree)
        self.G = PermGroup([self.tau1, self.tau2, self.rho1, self.rho2], self.degree)

    @property
    def degree(self) -> int:
        return self.params.degree

    def named_generators(self) -> dict[str, Permutation]:
        return {"tau1": self.tau1, "tau2": self.tau2, "rho1": self.rho1, "rho2": self.rho2}


def _first_coordinate_perm(cycle_images: dict[int, int], k: int, r: int) -> Permutation:
    n = 8 * k * r
    images = []
    for p in range(n):
        i, j, l = decode(p, k, r)
        images.append(encode((cycle_images.get(i, i), j, l), k, r))
    return Permutation(tuple(images))


def _cycle_map(cycles) -> dict[int, int]:
    out = {}
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            out[a] = b
    return out


def _fibre_shift(k: int, r: int, coordinate: int) -> Permutation:
    n = 8 * k * r
    images = []
    for p in range(n):
        i, j, l = decode(p, k, r)
        step = 1 if i % 2 == 0 else -1
        if coordinate == 1:
            j = (j + step) % k
        else:
            l = (l + step) % r
        images.append(encode((i, j, l), k, r))
    return Permutation(tuple(images))


def build(params: ConstructionParams | tuple[int, int]) -> ConstructionBundle:
    if not isinstance(params, ConstructionParams):
        params = ConstructionParams(*params)
    k, r = params.k, params.r
    return ConstructionBundle(
        params=params,
        tau1=_first_coordinate_perm(_cycle_map([TAU1_CYCLE]), k, r),
        tau2=_first_coordinate_perm(_cycle_map([TAU2_CYCLE]), k, r),
        rho1=_fibre_shift(k, r, 1),
        rho2=_fibre_shift(k, r, 2),
        h=_first_coordinate_perm(_cycle_map(H_CYCLES), k, r),
    )


def normal_form_in_H(p: Permutation, b: ConstructionBundle) -> tuple[int, int]:
    """The unique ``(l, e)`` with ``p == tau2**l * h**e``."""
    for e in (0, 1):
        for l in range(8):
            if b.tau2 ** l * b.h ** e == p:
                return l, e
    raise DomainError("permutation is not in H")


def verify_bundle(b: ConstructionBundle, strict: bool = True) -> dict[str, bool]:
    """Run the identities the construction rests on and report each by name.

    With ``strict`` a failing check raises :class:`VerificationError`;
    otherwise every check runs and the report records the failures.  A
    check that exceeds a size ceiling raises :class:`CapacityError` either way.
    """
    report: dict[str, bool] = {}

    def check(name, fn, detail=""):
        try:
            ok = bool(fn())
        except (VerificationError, DomainError):
            ok = False
        report[name] = ok
        if strict and not ok:
            raise VerificationError(name, detail)

    params = b.params
    kr = params.k * params.r

    check("H_order_16", lambda: b.H.order() == 16, f"|H| = {b.H.order()}")

    def normal_form():
        forms = set()
        for p in b.H.elements():
            forms.add(normal_form_in_H(p, b))
        return len(forms) == 16

    check("H_normal_form", lambda: b.H.order() == 16 and normal_form())
    check("tau2_conj_h_is_tau2_pow5", lambda: b.tau2.conjugate(b.h) == b.tau2 ** 5)

    def abelian_inverted():
        A = PermGroup([b.rho1, b.rho2], b.degree)
        if A.order() != kr or b.rho1 * b.rho2 != b.rho2 * b.rho1:
            return False
        return all(rho.conjugate(t) == rho.inverse()
                   for t in (b.tau1, b.tau2) for rho in (b.rho1, b.rho2))

    check("A_abelian_inverted", abelian_inverted)

    def isomorphic():
        T1, _ = to_abstract(b.R1)
        T2, _ = to_abstract(b.R2)
        return abstract_isomorphism(T1, T2) is not None

    check("R1_iso_R2", isomorphic)
    check("R1_R2_regular", lambda: b.R1.is_regular() and b.R2.is_regular())
    check("index_2", lambda: b.G.order() == 2 * b.R1.order() == 2 * b.R2.order()
          and b.R1.is_subgroup_of(b.G) and b.R2.is_subgroup_of(b.G))
    return report
