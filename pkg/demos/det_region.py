"""Capacity region of the three-user deterministic channel.

The region is computed twice: from the closed-form entropy inequalities
and by Fourier-Motzkin elimination of the rate-splitting constraints.
Both must give the same polytope.
"""
import numpy as np

from simocap.detchan import (
    ProductDistribution,
    achievable_constraints,
    build_canonical_det_channel,
    entropy_table,
    project_to_rates,
    theorem1_region,
)
from simocap.polytope import default_directions, support, worst_support_gap

dc = build_canonical_det_channel(2)
dirs = default_directions(3)

t = entropy_table(dc, ProductDistribution.uniform(2))
for name, value in list(t.to_dict().items())[:4]:
    print(f"{name:>16} = {value:.3f}")

closed = theorem1_region(t, prune=True)
elim = project_to_rates(achievable_constraints(t))
print("facets:", len(closed.b), "closed form,", len(elim.b), "after elimination")
print("sum rate:", support(elim, np.ones(3)), "bits")

for s in range(5):
    t = entropy_table(dc, ProductDistribution.dirichlet(2, np.random.default_rng(s)))
    gap, where = worst_support_gap(theorem1_region(t), project_to_rates(achievable_constraints(t)),
                                   dirs)
    print(f"dirichlet seed {s}: worst support difference {gap:.1e}")
