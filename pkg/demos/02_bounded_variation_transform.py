"""
Transform of a function that is not absolutely integrable
=========================================================

phi(t) = arctan|t| - pi/2 decays like -1/|t|, so the Fourier integral
exists only as a limit of truncations. Integrating by parts turns it into
an absolutely convergent integral of phi'(t) = sign(t)/(1+t^2). The two
routes and the even-function shortcut should agree; |s F(s)| should stay
below int|phi'| / sqrt(2 pi) = pi / sqrt(2 pi) and decrease.
"""

import math

from hkfourier import corpus_entry, decay_profile, transform

phi = corpus_entry("example2").function
print(f"{'s':>5} {'direct':>22} {'by_parts':>22} {'even_formula':>22}")
for s in (0.5, 1.0, 2.0, 5.0):
    row = [transform(phi, s, m).value.real for m in ("direct", "by_parts", "even_formula")]
    print(f"{s:5g} " + " ".join(f"{v:22.15f}" for v in row))

# %%
bound = math.pi / math.sqrt(2 * math.pi)
print(f"\nbound {bound:.6f}")
for s, v in decay_profile(phi, [1, 2, 4, 8, 16, 32, 64]):
    print(f"s = {s:4g}   |s F(s)| = {v:.6f}")
