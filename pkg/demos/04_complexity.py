"""
Arithmetic cost per iteration
=============================

Operation counts for one iteration of each algorithm, and for a single
application of each shrinkage function. SA-ALT-LMS pays roughly 2.5 to 3.5
times the LMS cost for its second coefficient vector.

From the shell::

    altlms cost SA-ALT-LMS l0 16
"""

from altlms import ShrinkageSpec, algorithm_cost, shrinkage_cost
from altlms.filters import LMS_KIND, SA_ALT_LMS_KIND, SA_LMS_KIND

M = 16
penalties = [ShrinkageSpec.l1(), ShrinkageSpec.logsum(10), ShrinkageSpec.l0(10)]

print(f"shrinkage, one application to an M = {M} vector")
for spec in penalties:
    print(f"  {spec.kind:7} {shrinkage_cost(spec, M)}")

print(f"\nalgorithms, one iteration at M = {M}")
print(f"  {'LMS':18} {algorithm_cost(LMS_KIND, None, M)}")
for kind, name in ((SA_LMS_KIND, "SA-LMS"), (SA_ALT_LMS_KIND, "SA-ALT-LMS")):
    for spec in penalties:
        print(f"  {name + ' ' + spec.kind:18} {algorithm_cost(kind, spec, M)}")

# %%
# Every count is linear in M.
spec = penalties[2]
for m in (1, 10, 16, 32, 64):
    c = algorithm_cost(SA_ALT_LMS_KIND, spec, m)
    print(f"M = {m:3d}: {c}   per tap {c.adds / m:.0f}/{c.mults / m:.0f}/{c.divs / m:.0f}")
