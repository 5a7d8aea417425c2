# When does a linear foliation on the plane blow up to something transverse?
#
# On the cone over e1, e2 the form q dx/x - dy/y has kernel spanned by
# (1, q).  For q > 0 that kernel direction sits inside the cone, the blow-up
# there is a transverse divisor, and the foliation is dicritical.

# %%
from fractions import Fraction

from toric_mmp import Fan, FoliationForm
from toric_mmp.foliation import check_non_dicritical, check_singularity_class, classify_fixed_point

C2 = Fan(2, [(1, 0), (0, 1)], [(0, 1)])

for q in [Fraction(-2), Fraction(-1, 3), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3)]:
    lam = FoliationForm((q, -1))
    rep = check_non_dicritical(C2, lam)
    verdict = check_singularity_class(C2, lam)
    print(
        f"q = {str(q):>5}: {'non-dicritical' if rep else 'dicritical, witness ' + str(rep.witness):<28}"
        f" {verdict.label:<14} fixed point {classify_fixed_point(C2, lam, (0, 1)).value}"
    )

# %%
# An irrational slope never meets the lattice, so nothing goes wrong.
irr = FoliationForm((1, 0), (0, -1))
print("irrational:", bool(check_non_dicritical(C2, irr)), check_singularity_class(C2, irr).label)

# %%
# The separating covectors behind a positive answer: each is >= 0 on the
# rays and sums to 1 over them, so no kernel vector is interior.
print(check_non_dicritical(C2, FoliationForm((-1, -1))).certificates)
