"""Torus-invariant divisors, wall relations, intersection numbers and the
cone of curves of a simplicial toric variety.

Curve classes are stored as full intersection vectors ``(D_rho . C)_rho``
against every boundary divisor, so no basis of N_1 is ever chosen.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .errors import BoundaryWall, NoCompactCurves, NotComplete
from .fan import Fan, Wall, is_complete, minimal_cone_containing, multiplicity, walls
from .lattice import (
    RatVector,
    dot,
    integer_kernel,
    lp_feasible_point,
    pivot_columns,
    rank,
    scale_to_lattice,
    solve,
)

WallLike = Union[Wall, Sequence[int]]


@dataclass(frozen=True)
class ToricDivisor:
    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in coeffs))

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def __add__(self, other):
        if len(other) != len(self):
            raise ValueError("divisors live on different fans")
        return ToricDivisor(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ToricDivisor(-a for a in self)

    def __mul__(self, k):
        return ToricDivisor(k * a for a in self)

    __rmul__ = __mul__

    def __repr__(self):
        return "ToricDivisor(" + ", ".join(str(c) for c in self.coeffs) + ")"

    def is_zero(self) -> bool:
        return not any(self.coeffs)


def prime_divisor(fan: Fan, ray: int, coeff=1) -> ToricDivisor:
    return ToricDivisor(coeff if i == ray else 0 for i in range(len(fan.rays)))


def zero_divisor(fan: Fan) -> ToricDivisor:
    return ToricDivisor([0] * len(fan.rays))


def canonical_divisor(fan: Fan) -> ToricDivisor:
    """K_X = -(sum of all torus-invariant prime divisors)."""
    return ToricDivisor([-1] * len(fan.rays))


def principal_divisor(fan: Fan, m: Sequence) -> ToricDivisor:
    """div(chi^m) = sum <m, u_rho> D_rho."""
    return ToricDivisor(dot(m, u) for u in fan.rays)


# -- Cartier data --------------------------------------------------------------


@dataclass(frozen=True)
class CartierData:
    """Per full-dimensional cone (by index into ``fan.cones``) the covector
    ``m`` with ``<m, u_i> = -d_i`` on its rays.  ``index`` is the smallest
    ``k > 0`` with ``k D`` Cartier."""

    covectors: dict[int, RatVector]
    index: int


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def cartier_data(fan: Fan, D: ToricDivisor) -> CartierData:
    if len(D) != len(fan.rays):
        raise ValueError("divisor has the wrong number of coefficients")
    covs = {}
    k = 1
    for ci, c in enumerate(fan.cones):
        if len(c) != fan.dim:
            continue
        # rows: <m, u_i> = -d_i, solved as columns of the transpose
        cols = [[fan.rays[i][j] for i in c] for j in range(fan.dim)]
        m = solve(cols, [-D[i] for i in c])
        covs[ci] = m
        for x in m:
            k = _lcm(k, x.denominator)
    return CartierData(covs, k)


def pullback_divisor(fan: Fan, D: ToricDivisor, refined: Fan) -> ToricDivisor:
    """Pull ``D`` back along a refinement ``refined -> fan`` via Cartier data."""
    data = cartier_data(fan, D)
    out = []
    for u in refined.rays:
        i = fan.ray_index(u)
        if i is not None:
            out.append(D[i])
            continue
        tau = set(minimal_cone_containing(fan, u))
        ci = next(ci for ci, c in enumerate(fan.cones) if len(c) == fan.dim and tau <= set(c))
        out.append(-dot(data.covectors[ci], u))
    return ToricDivisor(out)


# -- walls ---------------------------------------------------------------------


def as_wall(fan: Fan, w: WallLike) -> Wall:
    if isinstance(w, Wall):
        if len(fan.facet_map.get(w.rays, [])) != 2:
            raise BoundaryWall(f"{w.rays} is not an interior wall")
        return w
    return fan.wall(w)


@dataclass(frozen=True)
class WallRelation:
    """Primitive integer relation ``sum b_i u_i = 0`` over the n+1 rays of the
    two cones adjacent to ``wall``; the two non-shared rays carry ``b > 0``."""

    wall: Wall
    coeffs: dict[int, int] = field(hash=False)

    @property
    def positive(self) -> tuple[int, ...]:
        return tuple(sorted(i for i, b in self.coeffs.items() if b > 0))

    @property
    def negative(self) -> tuple[int, ...]:
        return tuple(sorted(i for i, b in self.coeffs.items() if b < 0))

    @property
    def zero(self) -> tuple[int, ...]:
        return tuple(sorted(i for i, b in self.coeffs.items() if b == 0))

    @property
    def circuit(self) -> tuple[int, ...]:
        return tuple(sorted(i for i, b in self.coeffs.items() if b != 0))


def wall_relation(fan: Fan, w: WallLike) -> WallRelation:
    w = as_wall(fan, w)
    a, b = fan.opposite_rays(w)
    idx = (a, b) + w.rays
    # kernel of the n x (n+1) matrix whose columns are the rays
    cols = [[fan.rays[i][j] for i in idx] for j in range(fan.dim)]
    (k,) = integer_kernel(cols, ncols=len(idx))
    if k[0] < 0:
        k = tuple(-x for x in k)
    return WallRelation(w, dict(zip(idx, k)))


CurveClass = tuple[Fraction, ...]


def curve_class(fan: Fan, w: WallLike) -> CurveClass:
    """Intersection vector ``(D_rho . V(w))`` for every ray rho.

    The vector is the wall relation rescaled so that the entry of the first
    non-shared ray equals ``mult(w) / mult(sigma)``.
    """
    rel = wall_relation(fan, w)
    w = rel.wall
    a, _ = fan.opposite_rays(w)
    scale = Fraction(multiplicity(fan, w.rays), multiplicity(fan, fan.cones[w.cones[0]]) * rel.coeffs[a])
    out = [Fraction(0)] * len(fan.rays)
    for i, b in rel.coeffs.items():
        out[i] = b * scale
    return tuple(out)


def _intersect_cartier(fan: Fan, D: ToricDivisor, w: Wall) -> Fraction:
    data = cartier_data(fan, D)
    s, t = w.cones
    _, b = fan.opposite_rays(w)
    diff = [x - y for x, y in zip(data.covectors[s], data.covectors[t])]
    return dot(diff, fan.rays[b]) * Fraction(multiplicity(fan, w.rays), multiplicity(fan, fan.cones[t]))


def _intersect_relation(fan: Fan, D: ToricDivisor, w: Wall) -> Fraction:
    if any(multiplicity(fan, c) != 1 for c in (w.rays, fan.cones[w.cones[0]], fan.cones[w.cones[1]])):
        raise ValueError("the wall-relation method needs a unimodular wall and adjacent cones")
    rel = wall_relation(fan, w)
    return sum((D[i] * b for i, b in rel.coeffs.items()), Fraction(0))


def intersect(fan: Fan, D: ToricDivisor, w: WallLike, method: str = "cartier") -> Fraction:
    """Intersection number ``D . V(w)``.

    ``method="cartier"`` pairs the difference of the Cartier covectors of the
    two adjacent cones with the non-shared ray of the second cone; it works
    on any simplicial fan.  ``method="relation"`` reads the coefficients of
    the wall relation and is valid only when everything is unimodular.
    """
    w = as_wall(fan, w)
    if method == "cartier":
        return _intersect_cartier(fan, D, w)
    if method == "relation":
        return _intersect_relation(fan, D, w)
    raise ValueError(f"unknown method {method!r}")


def pair(D: Sequence, cls: CurveClass) -> Fraction:
    return sum((Fraction(d) * c for d, c in zip(D, cls)), Fraction(0))


class NefResult(NamedTuple):
    nef: bool
    wall: Optional[Wall]
    value: Optional[Fraction]


def is_nef(fan: Fan, D: ToricDivisor) -> NefResult:
    """Nef iff non-negative on every interior wall; the first negative wall
    is returned as witness."""
    for w in walls(fan):
        v = pair(D, curve_class(fan, w))
        if v < 0:
            return NefResult(False, w, v)
    return NefResult(True, None, None)


# -- cone of curves ------------------------------------------------------------


@dataclass(frozen=True)
class CurveRay:
    """Wall classes sharing one ray of the class space.

    ``direction`` is the primitive integral multiple of the classes;
    ``classes[i]`` is the actual class of ``walls[i]``.
    """

    direction: tuple[int, ...]
    walls: tuple[Wall, ...]
    classes: tuple[CurveClass, ...]
    extremal: bool

    @property
    def curve_class(self) -> CurveClass:
        return self.classes[0]

    def degree(self, D: Sequence) -> Fraction:
        """``D`` paired with the first wall's class."""
        return pair(D, self.classes[0])


def _group_wall_classes(fan: Fan) -> list[tuple[tuple[int, ...], list[Wall], list[CurveClass]]]:
    groups: dict[tuple, tuple[list, list]] = {}
    for w in walls(fan):
        cls = curve_class(fan, w)
        key = scale_to_lattice(cls)
        ws, cs = groups.setdefault(key, ([], []))
        ws.append(w)
        cs.append(cls)
    return [(k, ws, cs) for k, (ws, cs) in groups.items()]


def wall_classes(fan: Fan, only=None) -> list[CurveRay]:
    """All wall classes grouped by proportionality, each tagged extremal or not.

    A direction is extremal iff it is not a non-negative combination of the
    other directions (the relative cone of curves is pointed).  When ``only``
    is given (a collection of directions or a predicate on
    ``(direction, classes)``), the test is run only for the selected
    directions; the others are reported with ``extremal=False``.
    """
    groups = _group_wall_classes(fan)
    if not groups:
        raise NoCompactCurves("the fan has no interior wall")
    if only is None:
        wanted = lambda k, cs: True
    elif callable(only):
        wanted = only
    else:
        chosen = set(map(tuple, only))
        wanted = lambda k, cs: k in chosen
    cols = pivot_columns([k for k, _, _ in groups])
    reduced = {k: [k[c] for c in cols] for k, _, _ in groups}
    out = []
    for k, ws, cs in groups:
        extremal = False
        if wanted(k, cs):
            others = [reduced[o] for o, _, _ in groups if o != k]
            extremal = in_cone(others, reduced[k]) is None
        out.append(CurveRay(k, tuple(ws), tuple(cs), extremal))
    out.sort(key=lambda r: r.direction)
    return out


def supporting_divisor(fan: Fan, direction: Sequence[int]) -> Optional[RatVector]:
    """Divisor vanishing on ``direction`` and >= 1 on every other wall class.

    Exists exactly when the direction spans an extremal ray; it certifies
    extremality independently of ``wall_classes``.
    """
    direction = tuple(direction)
    others = [k for k, _, _ in _group_wall_classes(fan) if k != direction]
    A_ub = [[-x for x in c] for c in others]
    b_ub = [-1] * len(others)
    return lp_feasible_point(len(direction), A_ub, b_ub, [list(direction)], [0], free=True)


def extremal_rays(fan: Fan) -> list[CurveRay]:
    return [r for r in wall_classes(fan) if r.extremal]


def in_cone(generators: Sequence[Sequence], v: Sequence) -> Optional[RatVector]:
    """Non-negative coefficients expressing ``v`` in terms of ``generators``."""
    if not generators:
        return () if not any(v) else None
    A_eq = [[g[i] for g in generators] for i in range(len(v))]
    return lp_feasible_point(len(generators), A_eq=A_eq, b_eq=list(v))


def picard_rank(fan: Fan, relative: bool = False) -> int:
    """``#rays - n`` for complete fans.  With ``relative=True`` a non-complete
    fan reports the rank of the span of its interior wall classes."""
    if is_complete(fan):
        return len(fan.rays) - fan.dim
    if not relative:
        raise NotComplete("Picard rank needs a complete fan; pass relative=True")
    classes = [curve_class(fan, w) for w in walls(fan)]
    return rank(classes) if classes else 0


__all__ = [
    "CartierData",
    "CurveClass",
    "CurveRay",
    "NefResult",
    "ToricDivisor",
    "WallRelation",
    "as_wall",
    "canonical_divisor",
    "cartier_data",
    "curve_class",
    "extremal_rays",
    "in_cone",
    "intersect",
    "is_nef",
    "pair",
    "picard_rank",
    "prime_divisor",
    "principal_divisor",
    "pullback_divisor",
    "supporting_divisor",
    "wall_classes",
    "wall_relation",
    "zero_divisor",
]
