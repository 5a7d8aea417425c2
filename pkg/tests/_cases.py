"""Fans and functionals shared by the test modules."""

from toric_mmp.fan import Fan
from toric_mmp.foliation import FoliationForm

E = {1: (1, 0), 2: (0, 1)}

P2 = Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
# rays e1, e2, -e1-e2 and the exceptional ray e1+e2 (index 3)
F1 = Fan(2, [(1, 0), (0, 1), (-1, -1), (1, 1)], [(0, 3), (1, 3), (0, 2), (1, 2)])
P1P1 = Fan(2, [(1, 0), (-1, 0), (0, 1), (0, -1)], [(0, 2), (0, 3), (1, 2), (1, 3)])
P1CUBED = Fan(
    3,
    [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)],
    [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)],
)
C2 = Fan(2, [(1, 0), (0, 1)], [(0, 1)])
C3 = Fan(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2)])
HALF = Fan(2, [(1, 0), (1, 2), (0, 1)], [(0, 1), (1, 2)])

# w1, w2, s1, s2 with s1 + s2 = w1 + w2
FLOP_RAYS = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)]
X1 = Fan(3, FLOP_RAYS, [(0, 1, 2), (0, 1, 3)])
X2 = Fan(3, FLOP_RAYS, [(2, 3, 0), (2, 3, 1)])
X0 = Fan(3, FLOP_RAYS + [(1, 1, 0)], [(0, 2, 4), (0, 3, 4), (1, 2, 4), (1, 3, 4)])
FLOP_FORM = FoliationForm((1, 0, 0), (0, 1, 0))

RADIAL = FoliationForm((1, -1))
PENCIL = RADIAL
IRRATIONAL = FoliationForm((1, 0), (0, -1))
ONE_TAU = FoliationForm((1, 0), (0, 1))
