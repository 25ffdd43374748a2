"""
Gauge-fine partitions and Riemann sums
======================================

A gauge assigns each point a radius; a tagged partition is fine when every
cell fits inside its tag's radius. On an unbounded interval the end cells
[-inf, x1] and [x_{n-1}, inf] are tagged at infinity and must sit beyond
1/edge_delta.
"""

import math

import numpy as np

from hkfourier import Gauge, check_fineness, make_delta_fine_partition, riemann_sum

# a gauge that tightens near t = 0.3
g = Gauge(lambda t: 0.02 + 0.5 * np.abs(np.asarray(t) - 0.3))
p = make_delta_fine_partition(g, 0.0, 1.0)
widths = p.rights - p.lefts
print(f"{len(p)} cells, narrowest {widths.min():.3g} near t={p.tags[widths.argmin()]:.3f}, "
      f"fine: {check_fineness(p, g).is_fine}")

# %%
for k in range(1, 5):
    d = 10.0 ** -k
    q = make_delta_fine_partition(Gauge.constant(d), 0.0, 1.0)
    print(f"delta = 1e-{k}: Riemann sum of t^2 = {riemann_sum(lambda t: t * t, q):.10f}")

# %%
q = make_delta_fine_partition(Gauge.constant(1e-3, edge_delta_pos=1e-3), 0.0, math.inf)
print("last cell:", q.cells[-1])
print(f"exp(-t) on [0, inf]: {riemann_sum(lambda t: np.exp(-t), q):.6f}")
