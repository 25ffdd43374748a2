"""
A transform built on the Cantor function
========================================

f(t) = h1(t)/t on (2, inf) with h1(t) = 1 - C((2/pi) arctan t), plus
h2(t) = t^(1/3) sin(1/t) on (0, 1). The first piece is a devil's staircase
that decays like t^-1.63; the second oscillates infinitely often near 0.
t f(t) is split into h1 on (2, inf), which is of bounded variation but not
integrable, plus t h2(t), which is integrable. The derivative of the
transform is -i times the transform of that split. Takes about half a minute.
"""

from hkfourier import HakeConfig, TransformConfig, corpus_entry, transform, transform_derivative

entry = corpus_entry("example3")
f = entry.function
cfg = TransformConfig(hake=HakeConfig(k_max=20000, min_radius=4000))

for s in (1.0, 2.0):
    r = transform(f, s, "direct", cfg)
    d = transform_derivative(f, entry.tf_pieces, s, cfg)
    print(f"s = {s:g}: F = {r.value:.10f}  converged={r.converged}  levels={r.levels}")
    print(f"         dF/ds (formula) = {d.value:.8f}")
    for h in (1e-2, 1e-3):
        fd = (transform(f, s + h, "direct", cfg).value - transform(f, s - h, "direct", cfg).value) / (2 * h)
        print(f"         central difference h={h:g}: {fd:.8f}  (|diff| {abs(fd - d.value):.1e})")
