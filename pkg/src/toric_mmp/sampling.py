"""Seeded random fans, foliations and lattice points for property checks.

``mmp_instance`` draws complete projective fans carrying a foliation whose
kernel is spanned by a pair of opposite rays ``k`` and ``-k``.  Such pairs
are canonical and non-dicritical: every transverse valuation is a multiple
of ``k`` or ``-k``, hence a ray.  Star subdivisions keep both properties and
projectivity, so they are used to grow the fans.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .fan import Fan, in_support, is_complete, star_subdivision
from .foliation import FoliationForm
from .lattice import IntVector, is_primitive, primitive_part, rank

# complete smooth projective fans containing the opposite pair (+-e1)
_BASES = {
    2: [
        ("p1xp1", [(1, 0), (-1, 0), (0, 1), (0, -1)], [(0, 2), (0, 3), (1, 2), (1, 3)]),
        ("f1", [(1, 0), (-1, 0), (0, 1), (1, -1)], [(0, 2), (0, 3), (1, 2), (1, 3)]),
        ("f2", [(1, 0), (-1, 0), (0, 1), (2, -1)], [(0, 2), (0, 3), (1, 2), (1, 3)]),
    ],
    3: [
        (
            "p1cubed",
            [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)],
            [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)],
        ),
        (
            "p1xp2",
            [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, 0, 1), (0, -1, -1)],
            [(a, b, c) for a in (0, 1) for b, c in ((2, 3), (3, 4), (2, 4))],
        ),
        (
            "p1-bundle-over-p1xp1",
            [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, 0), (0, 0, -1)],
            [(a, b, c) for a in (0, 1) for b in (2, 4) for c in (3, 5)],
        ),
        (
            "twisted-p1-bundle",
            [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, -1)],
            [(a, b, c) for a in (0, 1) for b, c in ((2, 3), (3, 4), (2, 4))],
        ),
    ],
}


def random_unimodular(rng: random.Random, n: int, steps: int = 6) -> list[list[int]]:
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-1, 1))
        for r in m:
            r[i] += c * r[j]
    return m


def _apply(m, v) -> IntVector:
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m)))


def random_primitive(rng: random.Random, n: int, bound: int = 2) -> IntVector:
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(n))
        if any(v) and is_primitive(v):
            return v


def random_subdivisions(rng: random.Random, fan: Fan, count: int, bound: int = 2) -> Fan:
    """Star-subdivide ``fan`` at ``count`` random small primitive points."""
    tries = 0
    while count > 0 and tries < 50 * (count + 1):
        tries += 1
        v = random_primitive(rng, fan.dim, bound)
        if fan.ray_index(v) is not None or not in_support(fan, v):
            continue
        fan = star_subdivision(fan, v)
        count -= 1
    return fan


def _kernel_form(rng: random.Random, k: IntVector, n: int) -> FoliationForm:
    """A functional whose rational kernel is exactly the line through ``k``."""
    while True:
        if n == 2:
            rat = (k[1], -k[0])
            tau = (0, 0)
        else:
            a = [rng.randint(-3, 3) for _ in range(n)]
            b = [rng.randint(-3, 3) for _ in range(n)]
            rat = _perp(a, k)
            tau = _perp(b, k)
        # the kernel of (rat, tau) must be one-dimensional
        rows = [r for r in (rat, tau) if any(r)]
        if rows and rank(rows) == n - 1:
            form = FoliationForm(rat, tau)
            if rng.random() < 0.5 and n == 2:
                form = FoliationForm(tuple(-x for x in rat), tau)
            return form


def _perp(a, k):
    """Project ``a`` to an integer covector vanishing on ``k``."""
    kk = sum(x * x for x in k)
    ak = sum(x * y for x, y in zip(a, k))
    return tuple(kk * x - ak * y for x, y in zip(a, k))


def mmp_instance(rng: random.Random, dim: Optional[int] = None, max_rays: int = 12) -> tuple[str, Fan, FoliationForm]:
    """A complete projective fan with a canonical non-dicritical foliation."""
    dim = dim or rng.choice((2, 3))
    name, rays, cones = rng.choice(_BASES[dim])
    m = random_unimodular(rng, dim)
    fan = Fan(dim, [_apply(m, r) for r in rays], cones)
    k = fan.rays[0]
    extra = rng.randint(0, max_rays - len(fan.rays))
    fan = random_subdivisions(rng, fan, extra)
    return name, fan, _kernel_form(rng, k, dim)


def random_form(rng: random.Random, n: int) -> FoliationForm:
    """Rational, tau-mixed or kernel-heavy functionals in roughly equal shares."""
    kind = rng.randrange(3)
    if kind == 0:
        rat = [rng.randint(-2, 2) for _ in range(n)]
        if not any(rat):
            rat[0] = 1
        return FoliationForm(rat)
    if kind == 1:
        rat = [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(n)]
        tau = [rng.randint(-1, 1) for _ in range(n)]
        if not any(rat) and not any(tau):
            tau[0] = 1
        return FoliationForm(rat, tau)
    k = random_primitive(rng, n, 1)
    return _kernel_form(rng, k, n)


def random_boundary(rng: random.Random, fan: Fan) -> list[Fraction]:
    return [Fraction(rng.randint(-2, 2), rng.randint(1, 3)) if rng.random() < 0.4 else Fraction(0) for _ in fan.rays]


def random_fan(rng: random.Random, dim: Optional[int] = None, max_rays: int = 12) -> Fan:
    """A complete projective fan or a subdivided smooth cone."""
    dim = dim or rng.choice((2, 3))
    if rng.random() < 0.3:
        fan = Fan(dim, [tuple(int(i == j) for j in range(dim)) for i in range(dim)], [tuple(range(dim))])
        fan = random_subdivisions(rng, fan, rng.randint(0, 3), bound=3)
        return fan
    _, fan, _ = mmp_instance(rng, dim, max_rays)
    return fan


def random_support_point(rng: random.Random, fan: Fan, bound: int = 3, avoid_rays: bool = True) -> IntVector:
    while True:
        if is_complete(fan):
            v = random_primitive(rng, fan.dim, bound)
        else:
            c = rng.choice(fan.cones)
            coeffs = [rng.randint(0, bound) for _ in c]
            v = tuple(sum(a * fan.rays[i][j] for a, i in zip(coeffs, c)) for j in range(fan.dim))
            if not any(v):
                continue
            v = primitive_part(v)[0]
        if avoid_rays and fan.ray_index(v) is not None:
            continue
        if in_support(fan, v):
            return v


__all__ = [
    "mmp_instance",
    "random_boundary",
    "random_fan",
    "random_form",
    "random_primitive",
    "random_subdivisions",
    "random_support_point",
    "random_unimodular",
]
