"""
Truncated integrals and acceleration
====================================

The Dirichlet integral of sin(t)/t converges only conditionally. Its
truncations over [-T, T] wobble around pi with amplitude ~1/T, and
averaging partials taken half a period apart removes the wobble.
"""

import math

import numpy as np

from hkfourier import HakeConfig, accelerate, hake_limit


def sinc(t):
    return np.sinc(np.asarray(t) / np.pi)


seq = hake_limit(sinc, HakeConfig(alignment_freq=1.0))
print(f"levels used: {seq.levels_used}, converged: {seq.converged}")
print(f"last raw partial : {seq.partials[-1]:.12f}  (error {abs(seq.partials[-1] - math.pi):.1e})")
print(f"accelerated      : {seq.accelerated:.12f}  (error {abs(seq.accelerated - math.pi):.1e})")

# %%
# The three schemes on the same partial sums: the alternating harmonic series.

partials = np.cumsum([(-1) ** k / (k + 1) for k in range(15)])
for scheme in ("none", "averaging", "epsilon"):
    value, err, fallback = accelerate(partials, scheme)
    print(f"{scheme:>9}: {value:.15f}  |value - ln 2| = {abs(value - math.log(2)):.1e}")

# %%
# A bounded oscillation has no limit; the guard says so instead of returning noise.

from hkfourier import DivergenceError

try:
    hake_limit(np.cos, HakeConfig())
except DivergenceError as exc:
    print("cos(t):", exc)
