"""Co-rank 1 toric foliations and their singularities.

A toric foliation of co-rank 1 is given by a logarithmic 1-form
``sum lambda_i dx_i / x_i``, i.e. by a functional ``lambda`` on the lattice.
Coefficients live in ``Q + Q*tau`` for a fixed formal irrational ``tau``:
the functional is stored as two rational covectors ``rat`` and ``tau`` and
``lambda(v) = 0`` exactly when both pairings vanish.

A torus-invariant divisor (or toric valuation) ``v`` is foliation-invariant
iff ``lambda(v) != 0``; ``epsilon(v)`` is 0 for invariant and 1 otherwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import NotInSupport, NotMaximal, NotPrimitive, UnboundedWithBoundary, ZeroVector
from .fan import Cone, Fan, Wall, cone_contains, minimal_cone_containing, multiplicity, star_subdivision
from .intersection import ToricDivisor, WallLike, as_wall, pullback_divisor
from .lattice import (
    IntVector,
    RatVector,
    dot,
    int_vector,
    integer_kernel,
    is_primitive,
    lp_feasible_point,
    lp_minimize,
    primitive_part,
    scale_to_lattice,
    solve,
)


def _parse_rational(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass(frozen=True)
class FoliationForm:
    rat: RatVector
    tau: RatVector

    def __init__(self, rat: Sequence, tau: Optional[Sequence] = None):
        rat = tuple(_parse_rational(x) for x in rat)
        tau = tuple(_parse_rational(x) for x in tau) if tau is not None else (Fraction(0),) * len(rat)
        if len(rat) != len(tau):
            raise ValueError("rational and tau parts have different lengths")
        if not any(rat) and not any(tau):
            raise ValueError("the zero functional does not define a foliation")
        object.__setattr__(self, "rat", rat)
        object.__setattr__(self, "tau", tau)

    @property
    def dim(self) -> int:
        return len(self.rat)

    def __call__(self, v: Sequence) -> tuple[Fraction, Fraction]:
        return dot(self.rat, v), dot(self.tau, v)

    def vanishes(self, v: Sequence) -> bool:
        a, b = self(v)
        return a == 0 and b == 0

    def rows(self) -> list[RatVector]:
        """The non-zero covectors among ``rat`` and ``tau``."""
        return [r for r in (self.rat, self.tau) if any(r)]

    def __str__(self):
        def term(a, b):
            if b == 0:
                return str(a)
            if a == 0:
                return f"{b}t"
            return f"{a}{'+' if b > 0 else '-'}{abs(b)}t"

        return "(" + ", ".join(term(a, b) for a, b in zip(self.rat, self.tau)) + ")"


def epsilon(lam: FoliationForm, v: Sequence) -> int:
    """0 if the divisor or valuation ``v`` is invariant, 1 if it is transverse."""
    if not any(v):
        raise ZeroVector("epsilon of the zero vector")
    return 1 if lam.vanishes(v) else 0


def _check_dims(fan: Fan, lam: FoliationForm):
    if lam.dim != fan.dim:
        raise ValueError(f"functional of length {lam.dim} on a fan of dimension {fan.dim}")


def epsilons(fan: Fan, lam: FoliationForm) -> tuple[int, ...]:
    _check_dims(fan, lam)
    return tuple(epsilon(lam, u) for u in fan.rays)


def foliated_canonical_divisor(fan: Fan, lam: FoliationForm) -> ToricDivisor:
    """K_F: coefficient -1 on each non-invariant ray and 0 on invariant ones."""
    return ToricDivisor(-e for e in epsilons(fan, lam))


def boundary_divisor(fan: Fan, boundary=None) -> ToricDivisor:
    """Normalise a boundary given as None, a sequence or a {ray: coeff} map."""
    n = len(fan.rays)
    if boundary is None:
        return ToricDivisor([0] * n)
    if isinstance(boundary, dict):
        out = [Fraction(0)] * n
        for k, c in boundary.items():
            out[int(k)] = _parse_rational(c)
        return ToricDivisor(out)
    boundary = ToricDivisor(_parse_rational(c) for c in boundary)
    if len(boundary) != n:
        raise ValueError("boundary has the wrong number of coefficients")
    return boundary


# -- discrepancies -------------------------------------------------------------


class DiscrepancyValue(NamedTuple):
    value: Fraction
    is_ray: bool


def _check_point(fan: Fan, v) -> IntVector:
    v = int_vector(v)
    if len(v) != fan.dim:
        raise ValueError("point has the wrong dimension")
    if not any(v):
        raise ZeroVector("the zero vector is not a valuation")
    if not is_primitive(v):
        raise NotPrimitive(f"{v} is not primitive")
    return v


def foliated_discrepancy(fan: Fan, lam: FoliationForm, boundary, v: Sequence[int]) -> DiscrepancyValue:
    """Discrepancy of the toric valuation ``v`` for the foliated pair.

    With ``v = sum c_i u_i`` in its minimal cone, the value is
    ``sum c_i (eps(u_i) - d_i) - eps(v)``.  For ``v`` an existing ray the
    result is the tautological ``-d_v`` with ``is_ray`` set.
    """
    v = _check_point(fan, v)
    delta = boundary_divisor(fan, boundary)
    eps = epsilons(fan, lam)
    tau = minimal_cone_containing(fan, v)
    c = solve(fan.ray_vectors(tau), v)
    psi = sum((ci * (eps[i] - delta[i]) for ci, i in zip(c, tau)), Fraction(0))
    return DiscrepancyValue(psi - epsilon(lam, v), fan.ray_index(v) is not None)


def log_pullback(fan: Fan, lam: FoliationForm, boundary, v: Sequence[int]) -> tuple[Fan, ToricDivisor]:
    """Blow up the valuation ``v`` and write ``pi^*(K_F + Delta) = K_G + Gamma``.

    Returns the subdivided fan and ``Gamma``; the new ray is the last one.
    """
    delta = boundary_divisor(fan, boundary)
    refined = star_subdivision(fan, v)
    pulled = pullback_divisor(fan, foliated_canonical_divisor(fan, lam) + delta, refined)
    return refined, pulled - foliated_canonical_divisor(refined, lam)


def discrepancy_oracle(fan: Fan, lam: FoliationForm, boundary, v: Sequence[int]) -> DiscrepancyValue:
    """Discrepancy read off the defining equation on an actual blow-up.

    Subdivides at ``v``, computes K of the foliation upstairs, pulls
    ``K_F + Delta`` back through Cartier data and takes the coefficient of
    the new ray in ``K_G + strict transform(Delta) - pi^*(K_F + Delta)``.
    """
    v = _check_point(fan, v)
    _check_dims(fan, lam)
    delta = boundary_divisor(fan, boundary)
    i = fan.ray_index(v)
    if i is not None:
        return DiscrepancyValue(-delta[i], True)
    minimal_cone_containing(fan, v)  # raises NotInSupport
    refined = star_subdivision(fan, v)
    pulled = pullback_divisor(fan, foliated_canonical_divisor(fan, lam) + delta, refined)
    strict = ToricDivisor(list(delta) + [0])
    diff = foliated_canonical_divisor(refined, lam) + strict - pulled
    return DiscrepancyValue(diff[len(fan.rays)], False)


# -- singularity classes -------------------------------------------------------


class SingularityClass(enum.IntEnum):
    NOT_LOG_CANONICAL = 0
    LOG_CANONICAL = 1
    CANONICAL = 2
    TERMINAL = 3

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass
class SingularityVerdict:
    """``witness`` is a primitive lattice vector whose discrepancy
    ``discrepancy`` violates the next stronger class (absent for terminal)."""

    cls: SingularityClass
    witness: Optional[IntVector] = None
    discrepancy: Optional[Fraction] = None
    certificate: list = field(default_factory=list)

    @property
    def label(self) -> str:
        return self.cls.label

    def at_least(self, other: SingularityClass) -> bool:
        return self.cls >= other


def _kernel_rows(lam: FoliationForm, U: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    return [[dot(r, u) for u in U] for r in lam.rows()]


def _combine(U, c) -> RatVector:
    n = len(U[0])
    return tuple(sum((ci * u[j] for ci, u in zip(c, U)), Fraction(0)) for j in range(n))


def _box_points(U, A_ub, b_ub, A_eq, b_eq):
    """Integer points ``U c`` with ``c >= 0`` satisfying the constraints.

    The feasible region must be bounded.  Bounds on each ambient coordinate
    come from exact LPs; the integer box is then scanned.
    """
    n = len(U[0])
    k = len(U)
    lo, hi = [], []
    for j in range(n):
        row = [u[j] for u in U]
        mn = lp_minimize(row, A_ub, b_ub, A_eq, b_eq)
        if mn is None:
            return [], None
        mx = lp_minimize([-x for x in row], A_ub, b_ub, A_eq, b_eq)
        lo.append(-((-mn.value.numerator) // mn.value.denominator))  # ceil
        hi.append((-mx.value).numerator // (-mx.value).denominator)  # floor
    box = list(zip(lo, hi))
    pts = []
    for v in product(*(range(a, b + 1) for a, b in box)):
        if not any(v):
            continue
        c = solve(U, v)
        if c is None or any(x < 0 for x in c):
            continue
        if any(sum((a * x for a, x in zip(row, c)), Fraction(0)) > b for row, b in zip(A_ub, b_ub)):
            continue
        if any(sum((a * x for a, x in zip(row, c)), Fraction(0)) != b for row, b in zip(A_eq, b_eq)):
            continue
        pts.append((tuple(v), c))
    return pts, box


def _scan_cone(fan: Fan, lam: FoliationForm, cone: Cone, alpha: Sequence[Fraction]):
    """Worst discrepancies over toric valuations in one cone.

    Returns ``(witnesses, note)`` where witnesses are ``(a, v, eps)`` triples
    for every non-ray valuation found with ``a <= 0`` and ``note`` records
    how the search was bounded.
    """
    U = fan.ray_vectors(cone)
    k = len(U)
    al = [alpha[i] for i in cone]
    ker = _kernel_rows(lam, U)
    found = []
    note = {"cone": list(cone)}

    # transverse directions on which psi vanishes
    A_eq = ker + [al, [1] * k]
    b_eq = [0] * len(ker) + [0, 1]
    x = lp_feasible_point(k, A_eq=A_eq, b_eq=b_eq)
    extra_ub, extra_b = [], []
    if x is not None:
        supp = [i for i in range(k) if x[i] > 0]
        if len(supp) >= 2:
            found.append((Fraction(-1), scale_to_lattice(_combine(U, x)), 1))
            note["null_face"] = "transverse"
            return found, note
        (i0,) = supp
        res = lp_minimize([0 if j == i0 else -1 for j in range(k)], A_eq=A_eq, b_eq=b_eq)
        if res.value < 0:
            y = res.x
            if sum(1 for t in y if t > 0) < 2:
                y = tuple(a + b for a, b in zip(x, y))
            found.append((Fraction(-1), scale_to_lattice(_combine(U, y)), 1))
            note["null_face"] = "transverse"
            return found, note
        # the only psi-null transverse direction is the ray u_i0 itself;
        # translating by u_i0 preserves psi and lambda, so c_i0 <= 2 suffices
        extra_ub.append([int(j == i0) for j in range(k)])
        extra_b.append(2)
        note["null_face"] = f"ray {cone[i0]}"

    A_ub = [al] + extra_ub
    b_ub = [1] + extra_b
    pts, box = _box_points(U, A_ub, b_ub, ker, [0] * len(ker))
    note["box"] = box
    for v, c in pts:
        if sum(1 for t in c if t > 0) < 2 or not is_primitive(v):
            continue
        psi = sum((a * t for a, t in zip(al, c)), Fraction(0))
        found.append((psi - 1, v, 1))

    # invariant valuations with psi = 0 live on the face of psi-null rays
    null = [j for j in range(k) if al[j] == 0]
    for i, j in combinations(null, 2):
        for v in ((1, 1), (2, 1), (1, 2)):
            w = tuple(v[0] * a + v[1] * b for a, b in zip(U[i], U[j]))
            if not lam.vanishes(w):
                found.append((Fraction(0), primitive_part(w)[0], 0))
                break
        else:
            continue
        break
    return found, note


def check_singularity_class(fan: Fan, lam: FoliationForm, boundary=None) -> SingularityVerdict:
    """Infimum class of the foliated discrepancies over all toric valuations.

    Raises ``UnboundedWithBoundary`` if a ray lying in a cone of dimension
    at least 2 has ``d_rho > eps(rho)``: discrepancies are then unbounded
    below.
    """
    _check_dims(fan, lam)
    delta = boundary_divisor(fan, boundary)
    eps = epsilons(fan, lam)
    alpha = [e - d for e, d in zip(eps, delta)]
    for c in fan.cones:
        if len(c) >= 2:
            for i in c:
                if alpha[i] < 0:
                    raise UnboundedWithBoundary(
                        f"ray {i} has boundary coefficient {delta[i]} > epsilon {eps[i]}"
                    )
    worst = None
    zero = None
    notes = []
    for c in fan.cones:
        if len(c) < 2:
            continue
        found, note = _scan_cone(fan, lam, c, alpha)
        notes.append(note)
        for a, v, e in found:
            if a < 0 and (worst is None or (a, v) < (worst[0], worst[1])):
                worst = (a, v)
            elif a == 0 and (zero is None or v < zero[1]):
                zero = (a, v)
    if worst is not None:
        return SingularityVerdict(SingularityClass.LOG_CANONICAL, worst[1], worst[0], notes)
    if zero is not None:
        return SingularityVerdict(SingularityClass.CANONICAL, zero[1], zero[0], notes)
    return SingularityVerdict(SingularityClass.TERMINAL, None, None, notes)


# -- dicriticality ---------------------------------------------------------------


@dataclass
class DicriticalityReport:
    """``certificates`` maps each cone of dimension >= 2 to a covector in the
    span of lambda's components that is >= 0 on its rays and sums to 1 over
    them, which rules out kernel points in the relative interior."""

    non_dicritical: bool
    witness: Optional[IntVector] = None
    cone: Optional[Cone] = None
    certificates: dict = field(default_factory=dict)

    def __bool__(self):
        return self.non_dicritical


def _relint_kernel_point(fan: Fan, lam: FoliationForm, cone: Cone) -> Optional[IntVector]:
    U = fan.ray_vectors(cone)
    k = len(U)
    ker = _kernel_rows(lam, U)
    A_ub = [[-int(i == j) for j in range(k)] for i in range(k)]
    x = lp_feasible_point(k, A_ub, [-1] * k, ker, [0] * len(ker))
    return None if x is None else scale_to_lattice(_combine(U, x))


def _separating_covector(fan: Fan, lam: FoliationForm, cone: Cone) -> Optional[RatVector]:
    rows = lam.rows()
    U = fan.ray_vectors(cone)
    vals = [[dot(r, u) for r in rows] for u in U]  # one row per ray
    A_ub = [[-x for x in row] for row in vals]
    A_eq = [[sum(row[j] for row in vals) for j in range(len(rows))]]
    y = lp_feasible_point(len(rows), A_ub, [0] * len(U), A_eq, [1], free=True)
    if y is None:
        return None
    return tuple(sum((yj * r[i] for yj, r in zip(y, rows)), Fraction(0)) for i in range(fan.dim))


def check_non_dicritical(fan: Fan, lam: FoliationForm, certificates: bool = True) -> DicriticalityReport:
    """Toric criterion: no lattice point of ker(lambda) lies in the relative
    interior of a cone of dimension >= 2."""
    _check_dims(fan, lam)
    certs = {}
    for c in fan.all_cones:
        if len(c) < 2:
            continue
        w = _relint_kernel_point(fan, lam, c)
        if w is not None:
            return DicriticalityReport(False, w, c, certs)
        if certificates:
            certs[c] = _separating_covector(fan, lam, c)
    return DicriticalityReport(True, None, None, certs)


# -- fixed points, pullbacks, tangency -------------------------------------------


class FixedPointType(enum.Enum):
    SMOOTH_POINT = "smooth_point"
    SIMPLE_TYPE_I = "simple_type_I"
    RESONANT = "resonant"
    QUOTIENT_SINGULARITY = "quotient_singularity"


def resonance(fan: Fan, lam: FoliationForm, rays: Sequence[int]) -> Optional[IntVector]:
    """A non-zero lattice point of cone(rays) killed by lambda, if any."""
    if not rays:
        return None
    U = fan.ray_vectors(rays)
    k = len(U)
    ker = _kernel_rows(lam, U)
    x = lp_feasible_point(k, A_eq=ker + [[1] * k], b_eq=[0] * len(ker) + [1])
    return None if x is None else scale_to_lattice(_combine(U, x))


def classify_fixed_point(fan: Fan, lam: FoliationForm, cone: Iterable[int]) -> FixedPointType:
    cone = tuple(sorted(cone))
    if cone not in fan.cones:
        raise NotMaximal(f"{cone} is not a maximal cone")
    if multiplicity(fan, cone) > 1:
        return FixedPointType.QUOTIENT_SINGULARITY
    invariant = [i for i in cone if not lam.vanishes(fan.rays[i])]
    if len(invariant) <= 1:
        return FixedPointType.SMOOTH_POINT
    if resonance(fan, lam, invariant) is None:
        return FixedPointType.SIMPLE_TYPE_I
    return FixedPointType.RESONANT


def _integer_rows(rows: Iterable[Sequence[Fraction]]) -> list[IntVector]:
    out = []
    for r in rows:
        r = tuple(Fraction(x) for x in r)
        if any(r):
            out.append(scale_to_lattice(r))
    return out


def detect_pullback(lam: FoliationForm, n: Optional[int] = None) -> tuple[int, list[IntVector]]:
    """Saturated sublattice ``ker(lambda)`` of N and its rank.

    Rank ``r >= 1`` means the foliation is pulled back from the quotient
    torus of dimension ``n - r``.
    """
    n = lam.dim if n is None else n
    if n != lam.dim:
        raise ValueError("dimension mismatch")
    basis = integer_kernel(_integer_rows(lam.rows()), ncols=n)
    return len(basis), basis


def wall_tangency(fan: Fan, lam: FoliationForm, w: WallLike) -> bool:
    """V(w) is tangent iff some ray of w is an invariant divisor."""
    w = as_wall(fan, w)
    return any(not lam.vanishes(fan.rays[i]) for i in w.rays)


__all__ = [
    "DicriticalityReport",
    "DiscrepancyValue",
    "FixedPointType",
    "FoliationForm",
    "SingularityClass",
    "SingularityVerdict",
    "boundary_divisor",
    "check_non_dicritical",
    "check_singularity_class",
    "classify_fixed_point",
    "detect_pullback",
    "discrepancy_oracle",
    "epsilon",
    "epsilons",
    "foliated_canonical_divisor",
    "foliated_discrepancy",
    "log_pullback",
    "resonance",
    "wall_tangency",
]
