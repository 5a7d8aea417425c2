"""Simplicial fans: validation, walls, star subdivisions and predicates.

A cone is a sorted tuple of indices into ``Fan.rays``.  Fans are immutable;
every surgery returns a new ``Fan``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import AlreadyRay, BoundaryWall, NotInSupport, NotPrimitive
from .lattice import (
    IntVector,
    cone_coordinates,
    cone_multiplicity,
    dot,
    int_vector,
    integer_kernel,
    is_primitive,
    lp_feasible_point,
    rank,
    solve,
)

Cone = tuple[int, ...]


@dataclass(frozen=True)
class Wall:
    """Codimension-1 cone shared by the maximal cones ``cones[0]`` and ``cones[1]``
    (indices into ``Fan.cones``)."""

    rays: Cone
    cones: tuple[int, int]


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


@dataclass(frozen=True, eq=False)
class Fan:
    dim: int
    rays: tuple[IntVector, ...]
    cones: tuple[Cone, ...]

    def __init__(self, dim: int, rays: Iterable[Sequence[int]], cones: Iterable[Iterable[int]]):
        rays = tuple(int_vector(r) for r in rays)
        for r in rays:
            if len(r) != dim:
                raise ValueError(f"ray {r} does not have dimension {dim}")
        cones = tuple(sorted({tuple(sorted(set(c))) for c in cones}))
        for c in cones:
            if any(i < 0 or i >= len(rays) for i in c):
                raise ValueError(f"cone {c} references a missing ray")
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "cones", cones)

    def __eq__(self, other):
        return isinstance(other, Fan) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Fan(dim={self.dim}, rays={list(self.rays)}, cones={list(self.cones)})"

    def key(self) -> tuple:
        """Index-free identity: the set of cones as sets of ray vectors."""
        return (self.dim, frozenset(frozenset(self.rays[i] for i in c) for c in self.cones))

    def ray_vectors(self, cone: Iterable[int]) -> list[IntVector]:
        return [self.rays[i] for i in cone]

    def ray_index(self, v: Sequence[int]) -> Optional[int]:
        v = tuple(v)
        return self._ray_lookup.get(v)

    @cached_property
    def _ray_lookup(self) -> dict:
        return {r: i for i, r in enumerate(self.rays)}

    @cached_property
    def full_cones(self) -> tuple[Cone, ...]:
        return tuple(c for c in self.cones if len(c) == self.dim)

    @cached_property
    def facet_map(self) -> dict[Cone, list[int]]:
        """Codimension-1 faces of full-dimensional cones -> containing cone indices."""
        out = defaultdict(list)
        for ci, c in enumerate(self.cones):
            if len(c) != self.dim:
                continue
            for i in range(len(c)):
                out[c[:i] + c[i + 1:]].append(ci)
        return dict(out)

    @cached_property
    def all_cones(self) -> tuple[Cone, ...]:
        """Every face of every maximal cone, including the zero cone ``()``."""
        faces = set()
        for c in self.cones:
            for k in range(len(c) + 1):
                faces.update(combinations(c, k))
        return tuple(sorted(faces, key=lambda f: (len(f), f)))

    def wall(self, rays: Iterable[int]) -> Wall:
        key = tuple(sorted(rays))
        owners = self.facet_map.get(key, [])
        if len(owners) != 2:
            raise BoundaryWall(f"cone {key} lies in {len(owners)} maximal cone(s), not 2")
        return Wall(key, (owners[0], owners[1]))

    def opposite_rays(self, w: Wall) -> tuple[int, int]:
        """The ray of each adjacent cone that is not in the wall."""
        a = next(i for i in self.cones[w.cones[0]] if i not in w.rays)
        b = next(i for i in self.cones[w.cones[1]] if i not in w.rays)
        return a, b


# -- validation ---------------------------------------------------------------


def _facet_normal(fan: Fan, facet: Cone, inside: int) -> IntVector:
    """Primitive normal of the hyperplane spanned by ``facet``, positive on ray ``inside``."""
    (m,) = integer_kernel(fan.ray_vectors(facet), ncols=fan.dim)
    if dot(m, fan.rays[inside]) < 0:
        m = tuple(-x for x in m)
    return m


def _properly_intersect(fan: Fan, s: Cone, t: Cone) -> bool:
    """True iff the simplicial cones ``s`` and ``t`` meet in their common face.

    Looks for a covector m that vanishes on the shared rays, is positive on
    the other rays of ``s`` and negative on the other rays of ``t``.
    """
    common = set(s) & set(t)
    s_only = [i for i in s if i not in common]
    t_only = [i for i in t if i not in common]
    if not s_only or not t_only:
        # one cone is a face of the other (or equal)
        return set(s) <= set(t) or set(t) <= set(s)
    n = fan.dim
    A_ub = [[-x for x in fan.rays[i]] for i in s_only] + [list(fan.rays[i]) for i in t_only]
    b_ub = [-1] * len(s_only) + [-1] * len(t_only)
    A_eq = [list(fan.rays[i]) for i in common]
    b_eq = [0] * len(common)
    return lp_feasible_point(n, A_ub, b_ub, A_eq, b_eq, free=True) is not None


def _generic_point(fan: Fan) -> Optional[IntVector]:
    """A point on no hyperplane spanned by a facet of a maximal cone."""
    normals = [_facet_normal(fan, f, next(i for i in fan.cones[o[0]] if i not in f)) for f, o in fan.facet_map.items()]
    for m in range(7919, 7919 + 200):
        v = tuple(m ** j + j for j in range(fan.dim))
        if all(dot(nv, v) != 0 for nv in normals):
            return v
    return None


def _closed_pseudomanifold_violations(fan: Fan) -> Optional[list[Violation]]:
    """Fast check for pure fans in which every facet lies in two cones.

    Adjacent cones on opposite sides of each shared facet make the cones a
    branched cover of the sphere; it is a fan exactly when a generic point
    is covered once.  Returns None when the shortcut does not apply.
    """
    out = []
    for f, (s, t) in fan.facet_map.items():
        a = next(i for i in fan.cones[s] if i not in f)
        b = next(i for i in fan.cones[t] if i not in f)
        m = _facet_normal(fan, f, a)
        if dot(m, fan.rays[b]) >= 0:
            out.append(Violation("BadIntersection", f"cones {fan.cones[s]} and {fan.cones[t]} lie on the same side of {f}"))
    if out:
        return out
    v = _generic_point(fan)
    if v is None:
        return None
    cover = [c for c in fan.cones if cone_contains(fan, c, v) is not None]
    if len(cover) != 1:
        return [Violation("BadIntersection", f"the point {v} lies in {len(cover)} maximal cones")]
    return []


def validate_fan(fan: Fan) -> list[Violation]:
    """Structured list of violations; an empty list means the fan is valid."""
    out = []
    seen = {}
    for i, r in enumerate(fan.rays):
        if not any(r):
            out.append(Violation("ZeroRay", f"ray {i} is zero"))
            continue
        if not is_primitive(r):
            out.append(Violation("NonPrimitiveRay", f"ray {i} = {r} is not primitive"))
        if r in seen:
            out.append(Violation("DuplicateRay", f"rays {seen[r]} and {i} are both {r}"))
        seen.setdefault(r, i)
    used = set()
    for c in fan.cones:
        used.update(c)
        if len(c) == 0:
            out.append(Violation("EmptyCone", "the zero cone is listed as maximal"))
        elif rank(fan.ray_vectors(c)) < len(c):
            out.append(Violation("NotSimplicial", f"cone {c} has dependent rays"))
    for i in range(len(fan.rays)):
        if i not in used:
            out.append(Violation("UnusedRay", f"ray {i} lies in no cone"))
    for s, t in combinations(fan.cones, 2):
        if set(s) <= set(t) or set(t) <= set(s):
            out.append(Violation("NotMaximal", f"cone {s} is a face of {t}" if set(s) <= set(t) else f"cone {t} is a face of {s}"))
    if out:
        return out
    if is_pure(fan) and fan.cones and all(len(o) == 2 for o in fan.facet_map.values()):
        fast = _closed_pseudomanifold_violations(fan)
        if fast is not None:
            return fast
    for s, t in combinations(fan.cones, 2):
        if not _properly_intersect(fan, s, t):
            out.append(Violation("BadIntersection", f"cones {s} and {t} do not meet in a common face"))
    return out


def is_valid(fan: Fan) -> bool:
    return not validate_fan(fan)


# -- walls and predicates -----------------------------------------------------


def walls(fan: Fan) -> list[Wall]:
    return [Wall(f, (o[0], o[1])) for f, o in sorted(fan.facet_map.items()) if len(o) == 2]


def boundary_facets(fan: Fan) -> list[tuple[Cone, int]]:
    return [(f, o[0]) for f, o in sorted(fan.facet_map.items()) if len(o) == 1]


def multiplicity(fan: Fan, cone: Iterable[int]) -> int:
    return cone_multiplicity(fan.ray_vectors(cone))


def is_smooth(fan: Fan) -> bool:
    return all(multiplicity(fan, c) == 1 for c in fan.cones)


def is_pure(fan: Fan) -> bool:
    return all(len(c) == fan.dim for c in fan.cones)


def is_complete(fan: Fan) -> bool:
    if not fan.cones or not is_pure(fan):
        return False
    return all(len(o) == 2 for o in fan.facet_map.values())


def has_convex_support(fan: Fan) -> bool:
    """Every boundary facet's hyperplane keeps all rays on the side of its cone."""
    if len(fan.cones) == 1:
        return True
    if not is_pure(fan):
        return False
    for facet, ci in boundary_facets(fan):
        inside = next(i for i in fan.cones[ci] if i not in facet)
        m = _facet_normal(fan, facet, inside)
        if any(dot(m, r) < 0 for r in fan.rays):
            return False
    return True


def cone_contains(fan: Fan, cone: Iterable[int], v: Sequence) -> Optional[tuple[Fraction, ...]]:
    """Cone coordinates of ``v`` if it lies in the cone, else ``None``."""
    cone = tuple(cone)
    sol = solve(fan.ray_vectors(cone), v)
    if sol is None or any(c < 0 for c in sol):
        return None
    return sol


def minimal_cone_containing(fan: Fan, v: Sequence) -> Cone:
    """The unique cone of the fan having ``v`` in its relative interior."""
    v = tuple(v)
    if not any(v):
        return ()
    for c in fan.cones:
        coords = cone_contains(fan, c, v)
        if coords is not None:
            return tuple(i for i, x in zip(c, coords) if x > 0)
    raise NotInSupport(f"{v} is not in the support of the fan")


def in_support(fan: Fan, v: Sequence) -> bool:
    try:
        minimal_cone_containing(fan, v)
    except NotInSupport:
        return False
    return True


def star_subdivision(fan: Fan, v: Sequence[int]) -> Fan:
    """Insert the primitive vector ``v`` as a new ray (appended last).

    Each maximal cone containing ``v`` is replaced by the cones spanned by
    ``v`` and the facets of it that do not contain the minimal cone of ``v``.
    """
    v = int_vector(v)
    if not is_primitive(v):
        raise NotPrimitive(f"{v} is not primitive")
    if fan.ray_index(v) is not None:
        raise AlreadyRay(f"{v} is already a ray")
    tau = set(minimal_cone_containing(fan, v))
    new = len(fan.rays)
    cones = []
    for c in fan.cones:
        if tau <= set(c):
            for i in tau:
                cones.append(tuple(j for j in c if j != i) + (new,))
        else:
            cones.append(c)
    return Fan(fan.dim, fan.rays + (v,), cones)


__all__ = [
    "Cone",
    "Fan",
    "Violation",
    "Wall",
    "boundary_facets",
    "cone_contains",
    "has_convex_support",
    "in_support",
    "is_complete",
    "is_pure",
    "is_smooth",
    "is_valid",
    "minimal_cone_containing",
    "multiplicity",
    "star_subdivision",
    "validate_fan",
    "walls",
]
