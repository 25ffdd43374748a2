"""Improper integrals over the line as limits of truncated integrals.

``hake_limit`` builds the sequence ``I(T_k) = int_{-T_k}^{T_k} f`` (or
``int_lower^{T_k} f`` on a half-line) shell by shell and extrapolates its
limit. When an oscillation frequency ``w`` is known the radii are spaced by
half periods, ``T_k = base_T + k*pi/w``, which turns the partials into an
eventually alternating sequence; iterated averaging then removes the
alternating tail very efficiently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Literal, NamedTuple, Sequence

import numpy as np

from .quadrature import QuadratureConfig, integrate_finite, scale_breaks

__all__ = [
    "HakeConfig",
    "HakeSequence",
    "Extrapolation",
    "DivergenceError",
    "accelerate",
    "hake_limit",
    "integrate_oscillatory_endpoint",
]

Scheme = Literal["none", "averaging", "epsilon"]
SCHEMES = ("none", "averaging", "epsilon")

MAX_AVERAGING_DEPTH = 12
EPSILON_WINDOW = 25
GROWTH_RUN = 10
GROWTH_FACTOR = 1e3
# shells must shrink at least like T^-0.2 to count as decaying
DECAY_EXPONENT = 0.2


class DivergenceError(ArithmeticError):
    """The truncated integrals do not settle; the improper integral likely does not exist."""

    def __init__(self, message: str, sequence: "HakeSequence"):
        super().__init__(message)
        self.sequence = sequence


@dataclass(frozen=True)
class HakeConfig:
    k_min: int = 4
    k_max: int = 200
    base_T: float = 1.0
    alignment_freq: float | None = None
    target_tol: float = 1e-10
    acceleration: Scheme | None = None  # None: averaging when aligned, epsilon otherwise
    min_radius: float = 0.0  # do not accept a limit before the radius reaches this

    def __post_init__(self):
        if not (0 < self.k_min < self.k_max):
            raise ValueError("need 0 < k_min < k_max")
        if self.base_T <= 0:
            raise ValueError("base_T must be positive")
        if self.min_radius < 0:
            raise ValueError("min_radius must be >= 0")
        if self.target_tol <= 0:
            raise ValueError("target_tol must be positive")
        if self.alignment_freq is not None and self.alignment_freq <= 0:
            raise ValueError("alignment_freq must be positive")
        if self.acceleration is not None and self.acceleration not in SCHEMES:
            raise ValueError(f"unknown acceleration {self.acceleration!r}")

    @property
    def scheme(self) -> Scheme:
        if self.acceleration is not None:
            return self.acceleration
        return "averaging" if self.alignment_freq else "epsilon"

    def radius(self, k: int, lower: float = 0.0) -> float:
        if self.alignment_freq:
            return lower + self.base_T + k * math.pi / self.alignment_freq
        return lower + self.base_T * (k + 1)


@dataclass(frozen=True)
class HakeSequence:
    radii: tuple[float, ...]
    partials: tuple[float, ...]
    accelerated: float
    error_estimate: float
    converged: bool
    levels_used: int
    scheme: str
    fallback: bool = False
    quadrature_error: float = 0.0
    evaluations: int = 0
    lower: float | None = field(default=None, compare=False)


class Extrapolation(NamedTuple):
    value: float
    error_estimate: float
    fallback: bool


def _averaging(s: np.ndarray) -> Extrapolation:
    if s.size < 3:
        raise ValueError("averaging needs at least 3 partials")
    depth = min(s.size - 2, MAX_AVERAGING_DEPTH)
    row = s[-(depth + 2):].copy()
    for _ in range(depth):
        row = 0.5 * (row[:-1] + row[1:])
    return Extrapolation(float(row[-1]), float(abs(row[-1] - row[-2])), False)


def _wynn_epsilon(s: np.ndarray) -> Extrapolation | None:
    """Last two entries of the highest even column; ``None`` on breakdown before column 2."""
    s = s[-EPSILON_WINDOW:]
    prev = np.zeros(s.size + 1)
    cur = s.astype(float)
    best = None
    k = 0
    while cur.size >= 2:
        diff = cur[1:] - cur[:-1]
        scale = max(float(np.max(np.abs(cur))), np.finfo(float).tiny)
        if np.any(np.abs(diff) <= 1e-15 * scale):
            break
        prev, cur = cur, prev[1:cur.size] + 1.0 / diff
        k += 1
        if k % 2 == 0 and cur.size >= 2 and np.all(np.isfinite(cur[-2:])):
            best = Extrapolation(float(cur[-1]), float(abs(cur[-1] - cur[-2])), False)
    return best


def accelerate(partials: Sequence[float], scheme: Scheme = "epsilon") -> Extrapolation:
    """Extrapolate the limit of ``partials``.

    ``averaging`` applies iterated pairwise means to the tail of the
    sequence; ``epsilon`` is Wynn's epsilon algorithm. The error estimate is
    the difference of the last two extrapolants. If the epsilon table breaks
    down (vanishing differences) the averaging value is returned with
    ``fallback=True``.
    """
    s = np.asarray(partials, dtype=float)
    if scheme not in SCHEMES:
        raise ValueError(f"unknown acceleration scheme {scheme!r}")
    if s.size == 0:
        raise ValueError("no partials")
    if scheme == "none" or s.size < 3:
        err = abs(s[-1] - s[-2]) if s.size >= 2 else math.inf
        return Extrapolation(float(s[-1]), float(err), scheme not in ("none",) and s.size < 3)
    if scheme == "averaging":
        return _averaging(s)
    if s.size >= 5:
        tail = s[-5:]
        if np.all(tail == tail[-1]):
            return Extrapolation(float(tail[-1]), 0.0, False)
        result = _wynn_epsilon(s)
        if result is not None and math.isfinite(result.value):
            return result
    return _averaging(s)._replace(fallback=True)


def _shrinking(increments: list[float], radii: list[float], parts: int) -> bool:
    """Mean |increment| of the last ``1/parts`` versus the first, against the radius growth."""
    q = len(increments) // parts
    early = float(np.mean(np.abs(increments[:q])))
    late = float(np.mean(np.abs(increments[-q:])))
    if early == 0:
        return True
    # increments[j] is the shell ending at radii[j + 1]
    r_early = float(np.mean(radii[1:q + 1]))
    r_late = float(np.mean(radii[-q:]))
    return late < early * (r_early / r_late) ** DECAY_EXPONENT


def _divergence_check(partials: list[float], increments: list[float], radii: list[float],
                      seq_factory, stagnation: bool):
    n = len(partials)
    if n > GROWTH_RUN:
        mags = np.abs(partials[-(GROWTH_RUN + 1):])
        if np.all(np.diff(mags) > 0) and mags[-1] > GROWTH_FACTOR * np.median(np.abs(partials)):
            raise DivergenceError(
                f"|partials| grew for {GROWTH_RUN} consecutive levels to {mags[-1]:.3g}", seq_factory())
    if stagnation and len(increments) >= 8 and not _shrinking(increments, radii, 4):
        raise DivergenceError(
            "shell contributions do not decay with the radius (bounded oscillation): "
            f"mean |shell| {np.mean(np.abs(increments[-(len(increments) // 4):])):.3g} "
            f"after {len(increments)} shells", seq_factory())


def _decaying(increments: list[float], radii: list[float]) -> bool:
    # bounded oscillation has an epsilon "antilimit"; only accept shrinking shells
    return len(increments) >= 4 and _shrinking(increments, radii, 2)


def hake_limit(
    f: Callable[[np.ndarray], np.ndarray],
    cfg: HakeConfig | None = None,
    qcfg: QuadratureConfig | None = None,
    *,
    lower: float | None = None,
    knots: Callable[[float, float], np.ndarray] | None = None,
) -> HakeSequence:
    """Limit of truncated integrals of ``f``.

    With ``lower=None`` the partials are over ``[-T_k, T_k]``; otherwise over
    ``[lower, T_k]``. ``knots(a, b)``, if given, returns extra non-smooth
    points inside a shell, passed to the quadrature as singular points.

    Raises :class:`DivergenceError` when the partials grow without bound or
    the shell contributions stay of constant size until ``k_max``.
    """
    cfg = cfg or HakeConfig()
    qcfg = qcfg or QuadratureConfig()
    scheme = cfg.scheme
    start = 0.0 if lower is None else float(lower)

    def piece(a: float, b: float):
        pts = tuple(qcfg.singular_points) + scale_breaks(a, b, cfg.base_T)
        if knots is not None:
            pts = tuple(pts) + tuple(np.asarray(knots(a, b), dtype=float))
        r = integrate_finite(f, a, b, replace(qcfg, singular_points=pts) if pts else qcfg)
        return r.value, r.error_estimate, r.evaluations

    radii: list[float] = []
    partials: list[float] = []
    increments: list[float] = []
    quad_err = 0.0
    evals = 0

    def shell(a: float, b: float):
        nonlocal quad_err, evals
        total = 0.0
        spans = [(a, b)] if lower is not None else [(-b, -a), (a, b)]
        for lo, hi in spans:
            v, e, n = piece(lo, hi)
            total += v
            quad_err += e
            evals += n
        return total

    extrap = Extrapolation(math.nan, math.inf, False)

    def snapshot(converged: bool) -> HakeSequence:
        return HakeSequence(tuple(radii), tuple(partials), extrap.value, extrap.error_estimate,
                            converged, len(partials), scheme, extrap.fallback, quad_err, evals,
                            lower)

    T0 = cfg.radius(0, start)
    value, e, n = piece(-T0, T0) if lower is None else piece(start, T0)
    quad_err += e
    evals += n
    radii.append(T0)
    partials.append(value)

    for k in range(1, cfg.k_max + 1):
        T = cfg.radius(k, start)
        inc = shell(radii[-1], T)
        radii.append(T)
        increments.append(inc)
        partials.append(partials[-1] + inc)
        _divergence_check(partials, increments, radii, lambda: snapshot(False), stagnation=False)
        if len(partials) >= max(cfg.k_min, 3) and T - start >= cfg.min_radius:
            extrap = accelerate(partials, scheme)
            if extrap.error_estimate <= cfg.target_tol and _decaying(increments, radii):
                return snapshot(True)

    _divergence_check(partials, increments, radii, lambda: snapshot(False), stagnation=True)
    return snapshot(False)


def integrate_oscillatory_endpoint(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    freq: float,
    cfg: HakeConfig | None = None,
    qcfg: QuadratureConfig | None = None,
    *,
    at: Literal["left", "right"] = "left",
) -> HakeSequence:
    """``int_a^b f`` where ``f`` oscillates like ``sin(freq/|t - p|)`` near the endpoint ``p``.

    The substitution ``u = 1/|t - p|`` maps the endpoint to infinity, where
    the oscillation has constant frequency ``freq`` and the half-line Hake
    limit applies.
    """
    if not a < b:
        raise ValueError("need a < b")
    cfg = cfg or HakeConfig()
    if at == "left":
        def g(u):
            return np.asarray(f(a + 1.0 / u), dtype=float) / (u * u)
    else:
        def g(u):
            return np.asarray(f(b - 1.0 / u), dtype=float) / (u * u)
    u0 = 1.0 / (b - a)
    hcfg = replace(cfg, alignment_freq=freq, acceleration=cfg.acceleration)
    return hake_limit(g, hcfg, qcfg, lower=u0)
