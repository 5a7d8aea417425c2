# Walking through a toric flop with a foliation on it.
#
# The local model: rays w1, w2, s1, s2 in Z^3 with s1 + s2 = w1 + w2.
# X1 uses the diagonal w1 w2, X2 the other one, X0 is the common blow-up
# at w1 + w2.  The foliation is dx/x + tau dy/y pulled back from the surface
# factor, so only s1 is transverse.

# %%
from toric_mmp import Fan, FoliationForm, run_mmp
from toric_mmp.fan import star_subdivision, walls
from toric_mmp.foliation import epsilons, foliated_canonical_divisor
from toric_mmp.intersection import intersect, wall_relation

rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)]
X1 = Fan(3, rays, [(0, 1, 2), (0, 1, 3)])
X2 = Fan(3, rays, [(0, 2, 3), (1, 2, 3)])
lam = FoliationForm((1, 0, 0), (0, 1, 0))

print("epsilon per ray:", epsilons(X1, lam))
print("K_F on X1:", list(foliated_canonical_divisor(X1, lam)))

# %%
# One interior wall on each side.  Its relation has two negative entries,
# which makes it a flipping contraction rather than a divisorial one.
for name, fan in (("X1", X1), ("X2", X2)):
    (w,) = walls(fan)
    kf = foliated_canonical_divisor(fan, lam)
    print(name, "wall", w.rays, "relation", wall_relation(fan, w).coeffs, "K_F.C =", intersect(fan, kf, w))

# %%
# The common blow-up.  The strict transform of C1 lives on the wall
# spanned by w1 and the new ray.
X0 = star_subdivision(X1, (1, 1, 0))
assert X0 == star_subdivision(X2, (1, 1, 0))
kf0 = foliated_canonical_divisor(X0, lam)
for w in walls(X0):
    print("X0 wall", [X0.rays[i] for i in w.rays], "K_F0 =", intersect(X0, kf0, w))

# %%
# The MMP does the flip and stops: K_F is nef on X2.
trace = run_mmp(X1, lam)
for step in trace.steps:
    print(step.index, step.kind, "K_F degree", step.kf_degree)
    for p in step.monitors_before:
        print("   a(%s): %s -> %s" % (p, step.monitors_before[p], step.monitors_after[p]))
print("outcome:", trace.outcome, "| final fan is X2:", trace.final == X2)
