"""Invariant suites shared by the ``validate`` command and the test-suite."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import functions as fn
from .hk_core import Gauge, check_fineness, make_delta_fine_partition, riemann_sum
from .transforms import (
    TransformConfig,
    applicable_methods,
    derivative_l1_norm,
    transform,
    transform_derivative,
)

__all__ = ["Check", "SUITES", "run_suite", "S_GRID", "ac_entries"]

S_GRID = (0.5, 1.0, 2.0, 5.0, 10.0)
INV_SQRT_2PI = 1 / math.sqrt(2 * math.pi)


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""


def _check(name: str, measured: float, tol: float, detail: str = "") -> Check:
    return Check(name, float(measured), float(tol), bool(measured <= tol), detail)


def ac_entries() -> list[fn.CorpusEntry]:
    """Entries admitting the integration-by-parts path (BV0, locally AC, derivative)."""
    return [e for e in fn.corpus() if "by_parts" in applicable_methods(e.function)]


def closed_form(cfg: TransformConfig | None = None) -> list[Check]:
    out = []
    for e in fn.corpus():
        if e.reference_transform is None:
            continue
        for m in applicable_methods(e.function):
            for s in S_GRID:
                r = transform(e.function, s, m, cfg)
                err = abs(r.value - complex(e.reference_transform(s)))
                out.append(_check(f"{e.label} {m} s={s:g}", err, 1e-7))
    return out


def cross_method(cfg: TransformConfig | None = None) -> list[Check]:
    out = []
    for e in fn.corpus():
        methods = applicable_methods(e.function)
        if len(methods) < 2:
            continue
        base = "by_parts" if "by_parts" in methods else "direct"
        for s in S_GRID:
            ref = transform(e.function, s, base, cfg).value
            for m in methods:
                if m == base:
                    continue
                v = transform(e.function, s, m, cfg).value
                rel = abs(v - ref) / (1 + abs(ref))
                out.append(_check(f"{e.label} {m} vs {base} s={s:g}", rel, 1e-6))
    return out


def bounds(cfg: TransformConfig | None = None) -> list[Check]:
    out = []
    for e in ac_entries():
        f = e.function
        norm = derivative_l1_norm(f, cfg).value
        if f.total_variation is not None:
            out.append(_check(f"{e.label} int|phi'| vs declared variation",
                              abs(norm - f.total_variation), 1e-6,
                              f"int|phi'| = {norm:.12g}, declared {f.total_variation:.12g}"))
        for s in S_GRID:
            for m in applicable_methods(f):
                r = transform(f, s, m, cfg)
                excess = abs(r.value) * abs(s) * math.sqrt(2 * math.pi) - norm
                out.append(_check(f"{e.label} {m} bound s={s:g}", excess, 1e-9,
                                  f"margin {-excess:.3g}"))
    return out


def finite_difference(f, s: float, h: float, cfg: TransformConfig | None = None,
                      method: str = "auto") -> complex:
    return (transform(f, s + h, method, cfg).value - transform(f, s - h, method, cfg).value) / (2 * h)


def derivative(cfg: TransformConfig | None = None) -> list[Check]:
    out = []
    for label in ("gaussian", "cauchy_full", "example1"):
        e = fn.corpus_entry(label)
        for s in (0.5, 1.0, 2.0):
            d = transform_derivative(e.function, e.tf_pieces, s, cfg).value
            fd = finite_difference(e.function, s, 1e-3, cfg)
            out.append(_check(f"{label} derivative vs central difference s={s:g}",
                              abs(d - fd) / abs(fd), 1e-4))
    g = fn.corpus_entry("gaussian")
    for s in S_GRID:
        d = transform_derivative(g.function, g.tf_pieces, s, cfg).value
        out.append(_check(f"gaussian derivative vs -s exp(-s^2/2) s={s:g}",
                          abs(d - (-s * math.exp(-0.5 * s * s))), 1e-7))
    return out


def cantor(seed: int = 2024) -> list[Check]:
    rng = np.random.default_rng(seed)
    c = fn.cantor_eval
    out = [
        _check("C(0) = 0", abs(c(0.0)), 0.0),
        _check("C(1) = 1", abs(c(1.0) - 1.0), 0.0),
        _check("C(1/2) = 1/2", abs(c(0.5) - 0.5), 0.0),
        _check("C(1/3) = 1/2", abs(c(1 / 3) - 0.5), 1e-15),
        _check("C(1/4) = 1/3", abs(c(0.25) - 1 / 3), 1e-15),
    ]
    x = rng.random(1000)
    out.append(_check("C(x) + C(1-x) = 1 on 1000 points", float(np.max(np.abs(c(x) + c(1 - x) - 1))), 1e-12))
    y = np.sort(rng.random(10_000))
    drops = np.diff(c(y))
    out.append(_check("nondecreasing on 10^4 sorted points", float(max(0.0, -drops.min())), 0.0))
    gap = c(np.array([0.4, 0.45, 0.5, 0.6]))
    out.append(_check("constant on the middle gap", float(np.max(np.abs(gap - 0.5))), 0.0))
    gap2 = c(np.array([0.12, 0.15, 0.2]))
    out.append(_check("constant on (1/9, 2/9)", float(np.max(np.abs(gap2 - 0.25))), 0.0))
    return out


def random_gauge(rng: np.random.Generator) -> Gauge:
    """Positive gauges with a few dips; bounded below on compacts."""
    base = 10 ** rng.uniform(-3, 0)
    centres = rng.uniform(-5, 5, size=3)
    widths = 10 ** rng.uniform(-2, 0, size=3)
    depth = 10 ** rng.uniform(-3, -1)

    def delta(t):
        t = np.asarray(t, dtype=float)
        d = np.full(t.shape, base)
        for c0, w in zip(centres, widths):
            d = np.minimum(d, depth + np.abs(t - c0) * w)
        return d

    return Gauge(delta, 10 ** rng.uniform(-2, 0), 10 ** rng.uniform(-2, 0))


def hk_core(seed: int = 7, n_gauges: int = 100) -> list[Check]:
    rng = np.random.default_rng(seed)
    bad = 0
    for i in range(n_gauges):
        g = random_gauge(rng)
        kind = i % 4
        a, b = [(-3.0, 4.0), (0.0, math.inf), (-math.inf, 1.0), (-math.inf, math.inf)][kind]
        p = make_delta_fine_partition(g, a, b)
        if not check_fineness(p, g).is_fine:
            bad += 1
    out = [_check(f"{n_gauges} random gauges give fine partitions", bad, 0)]
    p = make_delta_fine_partition(Gauge.constant(1e-4), 0.0, 1.0)
    out.append(_check("Riemann sum of t^2 on [0,1] at delta=1e-4",
                      abs(riemann_sum(lambda t: t * t, p) - 1 / 3), 1e-3))
    p = make_delta_fine_partition(Gauge.constant(1.0, edge_delta_pos=0.01), 0.0, math.inf)
    out.append(_check("[0, inf] clip point >= 1/edge_delta_pos", max(0.0, 100 - p.lefts[-1]), 0.0,
                      f"last finite endpoint {p.lefts[-1]:g}"))
    p = make_delta_fine_partition(Gauge.constant(1.0, 0.1, 0.1), -math.inf, math.inf)
    worst = max(0.0, p.rights[0] + 10, 10 - p.lefts[-1])
    out.append(_check("[-inf, inf] clip points beyond +-10", worst, 0.0,
                      f"x1 = {p.rights[0]:g}, x_(n-1) = {p.lefts[-1]:g}"))
    return out


SUITES: dict[str, Callable[..., list[Check]]] = {
    "closed_form": closed_form,
    "cross_method": cross_method,
    "bounds": bounds,
    "derivative": derivative,
    "cantor": lambda cfg=None: cantor(),
    "hk_core": lambda cfg=None: hk_core(),
}


def run_suite(name: str, cfg: TransformConfig | None = None) -> list[Check]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](cfg)
