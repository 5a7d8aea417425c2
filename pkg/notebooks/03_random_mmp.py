# Running the MMP over a batch of random canonical, non-dicritical inputs.
#
# Each input is a complete projective fan containing a pair of opposite
# rays k, -k, with a foliation whose kernel is exactly the line through k.

# %%
import random
from collections import Counter

from toric_mmp import run_mmp
from toric_mmp.sampling import mmp_instance

rng = random.Random(7)
outcomes = Counter()
kinds = Counter()
longest = None
for _ in range(20):
    name, fan, lam = mmp_instance(rng)
    trace = run_mmp(fan, lam)
    outcomes[trace.outcome] += 1
    kinds.update(s.kind for s in trace.steps)
    if longest is None or len(trace.steps) > len(longest[1].steps):
        longest = (name, trace)
    assert trace.certified

print("outcomes:", dict(outcomes))
print("steps:", dict(kinds))

# %%
name, trace = longest
print(f"longest run started from a modified {name}, {len(trace.initial.rays)} rays")
for s in trace.steps:
    after = "" if s.after is None else f" -> {len(s.after.rays)} rays"
    print(f"  step {s.index}: {s.kind:<10} K_F degree {s.kf_degree}{after}")
fib = trace.fibre
print("fibre over a base of dimension", fib.base_dim, "pulled back:", fib.pulled_back)
