"""Fourier transforms of L1 + BV0 functions as gauge integrals.

Convention: ``F(f)(s) = (2 pi)^(-1/2) int f(t) exp(-i s t) dt``, split into
the cosine part ``C`` and sine part ``S`` with ``F = (C - i S) / sqrt(2 pi)``.

Evaluation paths:

``direct``
    Both parts as limits of truncated integrals, with shells aligned to the
    half period ``pi / |s|``.
``by_parts``
    For absolutely continuous ``phi`` of bounded variation vanishing at
    infinity, ``F(phi)(s) = -(i / s) F(phi')(s)``. The integrand ``phi'`` is
    absolutely integrable, so this path is better conditioned. The bound
    ``|F(phi)(s)| <= |phi'|_1 / (|s| sqrt(2 pi))`` is checked on every call.
``even_formula`` / ``odd_formula``
    Half-line versions of ``by_parts`` for functions with parity. They only
    need ``phi`` absolutely continuous on ``(0, inf)``, so an odd function may
    jump at 0.
``derivative_formula``
    ``d/ds F(f)(s) = -i F(t f)(s)``, with ``t f`` given as a declared sum of
    pieces, each sent down its best path.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, NamedTuple, Sequence, Union

import numpy as np

from .functions import AC_LOC, AC_POS, BV0, L1, RealFunction
from .hake import DivergenceError, HakeConfig, HakeSequence, hake_limit, integrate_oscillatory_endpoint
from .quadrature import (
    QuadratureConfig,
    QuadratureResult,
    integrate_finite,
    integrate_to_infinity,
    scale_breaks,
)

__all__ = [
    "TransformConfig",
    "TransformResult",
    "FrequencyDomainError",
    "PreconditionError",
    "InternalConsistencyError",
    "METHODS",
    "hkft_cos",
    "hkft_sin",
    "hkft_direct",
    "hkft_by_parts",
    "hkft_even",
    "hkft_odd",
    "transform",
    "transform_grid",
    "transform_derivative",
    "derivative_l1_norm",
    "decay_profile",
    "applicable_methods",
    "select_method",
]

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
METHODS = ("direct", "by_parts", "even_formula", "odd_formula")
_ALIASES = {"by-parts": "by_parts", "even": "even_formula", "odd": "odd_formula",
            "even-formula": "even_formula", "odd-formula": "odd_formula"}

Function = Union[RealFunction, Sequence[RealFunction]]


class FrequencyDomainError(ValueError):
    """Requested frequency is below ``s_min`` in magnitude (or not finite)."""


class PreconditionError(ValueError):
    """The function's declared metadata does not admit the requested path."""


class InternalConsistencyError(ArithmeticError):
    """A computed value contradicts an analytic guarantee."""


@dataclass(frozen=True)
class TransformConfig:
    s_min: float = 1e-3
    hake: HakeConfig = field(default_factory=HakeConfig)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    bound_tol: float = 1e-9
    consistency_samples: int = 64

    def __post_init__(self):
        if not self.s_min > 0:
            raise ValueError("s_min must be positive")
        if self.bound_tol < 0:
            raise ValueError("bound_tol must be >= 0")


@dataclass(frozen=True)
class TransformResult:
    s: float
    value: complex
    method: str
    error_estimate: float
    converged: bool
    diagnostics: tuple[HakeSequence | QuadratureResult, ...] = field(default=(), compare=False)
    bound: float | None = None  # |phi'|_1 / (|s| sqrt(2 pi)) when checked

    @property
    def levels(self) -> int:
        return max((d.levels_used for d in self.diagnostics if isinstance(d, HakeSequence)),
                   default=0)


class _Part(NamedTuple):
    value: float
    error: float
    converged: bool
    diagnostics: tuple


def _check_s(s: float, cfg: TransformConfig) -> float:
    s = float(s)
    if not math.isfinite(s) or abs(s) < cfg.s_min:
        raise FrequencyDomainError(
            f"|s| must be at least s_min={cfg.s_min:g} (got s={s!r}); the transform "
            "integrals need not converge at s = 0")
    return s


def _qcfg(f: RealFunction, cfg: TransformConfig) -> QuadratureConfig:
    pts = tuple(sorted(set(cfg.quadrature.singular_points) | set(f.singular_points)))
    return replace(cfg.quadrature, singular_points=pts)


def _oscillation_at(f: RealFunction, p: float) -> float | None:
    for q, w in f.oscillatory_points:
        if q == p:
            return w
    return None


def _integrate(f: RealFunction, values: Callable[[np.ndarray], np.ndarray], freq: float,
               cfg: TransformConfig, lower: float | None = None) -> _Part:
    """``int values(t) dt`` over the support of ``f`` (restricted to ``t >= lower``).

    ``values`` carries the kernel; ``f`` supplies support, non-smooth points,
    knots and oscillatory endpoints. Unbounded pieces go through the Hake
    limit with shells aligned to ``pi / freq``.
    """
    qcfg = _qcfg(f, cfg)
    hcfg = replace(cfg.hake, alignment_freq=freq)
    parts: list[_Part] = []
    for a, b in f.support:
        if lower is not None:
            if b <= lower:
                continue
            a = max(a, lower)
        parts.append(_interval(f, values, a, b, hcfg, qcfg))
    if not parts:
        return _Part(0.0, 0.0, True, ())
    return _Part(math.fsum(p.value for p in parts), sum(p.error for p in parts),
                 all(p.converged for p in parts), sum((p.diagnostics for p in parts), ()))


def _from_hake(seq: HakeSequence) -> _Part:
    return _Part(seq.accelerated, seq.error_estimate + seq.quadrature_error, seq.converged, (seq,))


def _interval(f: RealFunction, values, a: float, b: float, hcfg: HakeConfig,
              qcfg: QuadratureConfig) -> _Part:
    knots = f.knots
    if math.isfinite(a) and math.isfinite(b):
        left, right = _oscillation_at(f, a), _oscillation_at(f, b)
        if left is not None and right is not None:
            m = 0.5 * (a + b)
            p1 = _interval(replace(f, oscillatory_points=((a, left),)), values, a, m, hcfg, qcfg)
            p2 = _interval(replace(f, oscillatory_points=((b, right),)), values, m, b, hcfg, qcfg)
            return _Part(p1.value + p2.value, p1.error + p2.error, p1.converged and p2.converged,
                         p1.diagnostics + p2.diagnostics)
        if left is not None or right is not None:
            w = left if left is not None else right
            seq = integrate_oscillatory_endpoint(values, a, b, w, hcfg, qcfg,
                                                 at="left" if left is not None else "right")
            return _from_hake(seq)
        pts = tuple(qcfg.singular_points) + scale_breaks(a, b, hcfg.base_T)
        if knots is not None:
            pts = pts + tuple(np.asarray(knots(a, b), dtype=float))
        r = integrate_finite(values, a, b, replace(qcfg, singular_points=pts))
        return _Part(r.value, r.error_estimate, r.converged, (r,))
    if any(_oscillation_at(f, p) is not None for p in (a, b) if math.isfinite(p)):
        raise PreconditionError("oscillatory endpoints are supported on bounded intervals only")
    if a == -math.inf and b == math.inf:
        return _from_hake(hake_limit(values, hcfg, qcfg, knots=knots))
    if b == math.inf:
        return _from_hake(hake_limit(values, hcfg, qcfg, lower=a, knots=knots))
    # (-inf, b]: reflect t -> -t
    ref_knots = None if knots is None else (lambda lo, hi: -np.asarray(knots(-hi, -lo))[::-1])
    ref_q = replace(qcfg, singular_points=tuple(-p for p in qcfg.singular_points))
    seq = hake_limit(lambda u: values(-np.asarray(u)), hcfg, ref_q, lower=-b, knots=ref_knots)
    return _from_hake(seq)


def _require_transformable(f: RealFunction):
    if not (f.has(L1) or f.has(BV0)):
        raise PreconditionError(
            f"{f.label or 'function'} is flagged neither L1 nor BV0; declare a decomposition "
            "into such pieces")


def _kernel_part(f: RealFunction, s: float, cfg: TransformConfig, kernel) -> _Part:
    ev = f.eval

    def values(t):
        t = np.asarray(t, dtype=float)
        return kernel(s * t) * np.asarray(ev(t), dtype=float)

    return _integrate(f, values, abs(s), cfg)


def _cos(f, s, cfg) -> _Part:
    _require_transformable(f)
    return _kernel_part(f, s, cfg, np.cos)


def _sin(f, s, cfg) -> _Part:
    _require_transformable(f)
    return _kernel_part(f, s, cfg, np.sin)


def hkft_cos(f: RealFunction, s: float, cfg: TransformConfig | None = None) -> tuple[float, float]:
    """Cosine part ``(2 pi)^(-1/2) int cos(s t) f(t) dt`` and its error estimate."""
    cfg = cfg or TransformConfig()
    s = _check_s(s, cfg)
    p = _cos(f, s, cfg)
    return INV_SQRT_2PI * p.value, INV_SQRT_2PI * p.error


def hkft_sin(f: RealFunction, s: float, cfg: TransformConfig | None = None) -> tuple[float, float]:
    """Sine part ``(2 pi)^(-1/2) int sin(s t) f(t) dt`` (enters ``F`` with a factor ``-i``)."""
    cfg = cfg or TransformConfig()
    s = _check_s(s, cfg)
    p = _sin(f, s, cfg)
    return INV_SQRT_2PI * p.value, INV_SQRT_2PI * p.error


def hkft_direct(f: RealFunction, s: float, cfg: TransformConfig | None = None) -> TransformResult:
    cfg = cfg or TransformConfig()
    s = _check_s(s, cfg)
    c = _cos(f, s, cfg)
    si = _sin(f, s, cfg)
    value = complex(INV_SQRT_2PI * c.value, -INV_SQRT_2PI * si.value)
    return TransformResult(s, value, "direct", INV_SQRT_2PI * (c.error + si.error),
                           c.converged and si.converged, c.diagnostics + si.diagnostics)


def _require_derivative(phi: RealFunction, flag: str, path: str):
    if phi.derivative is None:
        raise PreconditionError(f"{path} needs an analytic derivative of {phi.label or 'phi'}")
    allowed = (AC_LOC,) if flag == AC_LOC else (AC_LOC, AC_POS)
    if not any(phi.has(fl) for fl in allowed):
        raise PreconditionError(f"{path} needs {phi.label or 'phi'} flagged {' or '.join(allowed)}")
    if not phi.has(BV0):
        raise PreconditionError(f"{path} needs {phi.label or 'phi'} flagged BV0")


def derivative_l1_norm(phi: RealFunction, cfg: TransformConfig | None = None,
                       lower: float | None = None) -> QuadratureResult:
    """``int |phi'|`` over the support (restricted to ``t >= lower``)."""
    cfg = cfg or TransformConfig()
    if phi.derivative is None:
        raise PreconditionError("no derivative available")
    d = phi.derivative

    def absd(t):
        return np.abs(np.asarray(d(np.asarray(t, dtype=float)), dtype=float))

    qcfg = _qcfg(phi, cfg)
    value = err = 0.0
    evals = 0
    ok = True
    for a, b in phi.support:
        if lower is not None:
            if b <= lower:
                continue
            a = max(a, lower)
        inner = sorted(p for p in set(qcfg.singular_points) | {0.0} if a < p < b)
        cuts = [a] + inner + [b]
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            if math.isfinite(lo) and math.isfinite(hi):
                r = integrate_finite(absd, lo, hi, qcfg)
            elif math.isfinite(lo):
                r = integrate_to_infinity(absd, lo, replace(qcfg, singular_points=()))
            elif math.isfinite(hi):
                r = integrate_to_infinity(lambda u: absd(-np.asarray(u)), -hi,
                                          replace(qcfg, singular_points=()))
            else:
                raise AssertionError("unreachable: 0 always splits the line")
            value += r.value
            err += r.error_estimate
            evals += r.evaluations
            ok = ok and r.converged
    return QuadratureResult(value, err, evals, ok)


def _bound(phi: RealFunction, s: float, cfg: TransformConfig, lower: float | None = None,
           factor: float = 1.0) -> float:
    if phi.total_variation is not None and lower is None:
        norm = phi.total_variation
    else:
        norm = derivative_l1_norm(phi, cfg, lower).value
    return factor * norm * INV_SQRT_2PI / abs(s)


def _check_bound(value: complex, bound: float, err: float, cfg: TransformConfig, label: str):
    if abs(value) > bound * (1 + cfg.bound_tol) + cfg.bound_tol + err:
        raise InternalConsistencyError(
            f"|F({label})| = {abs(value):.17g} exceeds the variation bound {bound:.17g}")


def hkft_by_parts(phi: RealFunction, s: float, cfg: TransformConfig | None = None) -> TransformResult:
    """``F(phi)(s) = -(i/s) F(phi')(s)`` for ``phi`` in BV0 and locally AC."""
    cfg = cfg or TransformConfig()
    s = _check_s(s, cfg)
    _require_derivative(phi, AC_LOC, "by_parts")
    dphi = phi.derivative_function()
    # phi' is odd for even phi (cosine integral vanishes) and even for odd phi
    zero = _Part(0.0, 0.0, True, ())
    c = zero if phi.parity == "even" else _kernel_part(dphi, s, cfg, np.cos)
    si = zero if phi.parity == "odd" else _kernel_part(dphi, s, cfg, np.sin)
    value = complex(-si.value, -c.value) * (INV_SQRT_2PI / s)
    err = (c.error + si.error) * INV_SQRT_2PI / abs(s)
    bound = _bound(phi, s, cfg)
    _check_bound(value, bound, err, cfg, phi.label)
    return TransformResult(s, value, "by_parts", err, c.converged and si.converged,
                           c.diagnostics + si.diagnostics, bound)


def _require_parity(phi: RealFunction, parity: str, path: str):
    if phi.parity != parity:
        raise PreconditionError(f"{path} needs an {parity} function; "
                                f"{phi.label or 'phi'} is declared {phi.parity}")


def hkft_even(phi: RealFunction, s: float, cfg: TransformConfig | None = None) -> TransformResult:
    """Even ``phi``: ``F = -sqrt(2/pi) (1/s) int_0^inf sin(s t) phi'(t) dt`` (real)."""
    cfg = cfg or TransformConfig()
    s = _check_s(s, cfg)
    _require_parity(phi, "even", "even_formula")
    _require_derivative(phi, AC_POS, "even_formula")
    dphi = phi.derivative_function()
    d = dphi.eval

    def values(t):
        t = np.asarray(t, dtype=float)
        return np.sin(s * t) * np.asarray(d(t), dtype=float)

    p = _integrate(dphi, values, abs(s), cfg, lower=0.0)
    value = complex(-SQRT_2_OVER_PI * p.value / s, 0.0)
    err = SQRT_2_OVER_PI * p.error / abs(s)
    bound = _bound(phi, s, cfg)
    _check_bound(value, bound, err, cfg, phi.label)
    return TransformResult(s, value, "even_formula", err, p.converged, p.diagnostics, bound)


def hkft_odd(phi: RealFunction, s: float, cfg: TransformConfig | None = None) -> TransformResult:
    """Odd ``phi``: ``F = -i sqrt(2/pi) (1/s) int_0^inf (cos(s t) - 1) phi'(t) dt``.

    On ``[0, R]`` the kernel is written ``-2 sin^2(s t / 2)`` to avoid
    cancellation; beyond ``R`` the oscillatory part goes through an aligned
    Hake limit and ``int_R^inf phi'`` is an ordinary absolutely convergent
    integral.
    """
    cfg = cfg or TransformConfig()
    s = _check_s(s, cfg)
    _require_parity(phi, "odd", "odd_formula")
    _require_derivative(phi, AC_POS, "odd_formula")
    dphi = phi.derivative_function()
    d = dphi.eval
    R = max(cfg.hake.base_T, math.pi / abs(s))

    def near(t):
        t = np.asarray(t, dtype=float)
        return -2.0 * np.sin(0.5 * s * t) ** 2 * np.asarray(d(t), dtype=float)

    def far(t):
        t = np.asarray(t, dtype=float)
        return np.cos(s * t) * np.asarray(d(t), dtype=float)

    head = _integrate(replace(dphi, support=_clip_support(dphi.support, 0.0, R)), near, abs(s), cfg)
    tail_osc = _integrate(dphi, far, abs(s), cfg, lower=R)
    tail_abs = _tail_integral(dphi, R, cfg)
    total = head.value + tail_osc.value - tail_abs.value
    err_sum = head.error + tail_osc.error + tail_abs.error_estimate
    value = complex(0.0, -SQRT_2_OVER_PI * total / s)
    err = SQRT_2_OVER_PI * err_sum / abs(s)
    # a jump at 0 is covered because the declared variation includes it
    bound = _bound(phi, s, cfg)
    _check_bound(value, bound, err, cfg, phi.label)
    return TransformResult(s, value, "odd_formula", err,
                           head.converged and tail_osc.converged and tail_abs.converged,
                           head.diagnostics + tail_osc.diagnostics + (tail_abs,), bound)


def _clip_support(support, lo: float, hi: float) -> tuple[tuple[float, float], ...]:
    out = tuple((max(a, lo), min(b, hi)) for a, b in support if min(b, hi) > max(a, lo))
    return out or ((lo, hi),)


def _tail_integral(f: RealFunction, R: float, cfg: TransformConfig) -> QuadratureResult:
    """``int_R^inf f`` for absolutely integrable, non-oscillating ``f``."""
    qcfg = _qcfg(f, cfg)
    total = err = 0.0
    evals = 0
    ok = True
    for a, b in f.support:
        a = max(a, R)
        if b <= a:
            continue
        if math.isfinite(b):
            r = integrate_finite(f.eval, a, b, qcfg)
        else:
            pts = [p for p in qcfg.singular_points if p > a]
            split = max([a] + pts)
            r0 = integrate_finite(f.eval, a, split, qcfg) if split > a else None
            r = integrate_to_infinity(f.eval, split, replace(qcfg, singular_points=()))
            if r0 is not None:
                r = QuadratureResult(r.value + r0.value, r.error_estimate + r0.error_estimate,
                                     r.evaluations + r0.evaluations, r.converged and r0.converged)
        total += r.value
        err += r.error_estimate
        evals += r.evaluations
        ok = ok and r.converged
    return QuadratureResult(total, err, evals, ok)


_PATHS = {
    "direct": hkft_direct,
    "by_parts": hkft_by_parts,
    "even_formula": hkft_even,
    "odd_formula": hkft_odd,
}


def applicable_methods(f: RealFunction) -> list[str]:
    """Paths whose preconditions the declared metadata satisfies."""
    out = []
    if f.has(L1) or f.has(BV0):
        out.append("direct")
    has_d = f.derivative is not None and f.has(BV0)
    if has_d and f.has(AC_LOC):
        out.append("by_parts")
    if has_d and (f.has(AC_LOC) or f.has(AC_POS)):
        if f.parity == "even":
            out.append("even_formula")
        elif f.parity == "odd":
            out.append("odd_formula")
    return out


def select_method(f: RealFunction) -> str:
    """by_parts, else a parity formula, else direct."""
    methods = applicable_methods(f)
    for m in ("by_parts", "even_formula", "odd_formula", "direct"):
        if m in methods:
            return m
    raise PreconditionError(f"no transform path applies to {f.label or 'function'}; "
                            "flag it L1 or BV0 or declare a decomposition")


def _normalize_method(method: str) -> str:
    m = _ALIASES.get(method, method)
    if m != "auto" and m not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from auto, {', '.join(METHODS)}")
    return m


def _pieces(f: Function) -> tuple[RealFunction, ...]:
    if isinstance(f, RealFunction):
        return (f,)
    pieces = tuple(f)
    if not pieces or not all(isinstance(p, RealFunction) for p in pieces):
        raise TypeError("expected a RealFunction or a non-empty sequence of them")
    return pieces


def _combine(s: float, results: Sequence[TransformResult], method: str | None = None) -> TransformResult:
    if len(results) == 1 and method is None:
        return results[0]
    methods = []
    for r in results:
        if r.method not in methods:
            methods.append(r.method)
    bounds = [r.bound for r in results]
    return TransformResult(
        s, complex(sum(r.value for r in results)), method or "+".join(methods),
        sum(r.error_estimate for r in results), all(r.converged for r in results),
        sum((r.diagnostics for r in results), ()),
        sum(bounds) if all(b is not None for b in bounds) else None)


def transform(f: Function, s: float, method: str = "auto",
              cfg: TransformConfig | None = None) -> TransformResult:
    """``F(f)(s)``. ``f`` may be a declared decomposition ``[f1, f2, ...]``.

    With ``method="auto"`` each piece takes its best applicable path.
    """
    cfg = cfg or TransformConfig()
    s = _check_s(s, cfg)
    m = _normalize_method(method)
    results = []
    for piece in _pieces(f):
        pm = select_method(piece) if m == "auto" else m
        results.append(_PATHS[pm](piece, s, cfg))
    return _combine(s, results)


def transform_grid(f: Function, s_values: Iterable[float], method: str = "auto",
                   cfg: TransformConfig | None = None, workers: int | None = None,
                   on_error: str = "raise") -> list[TransformResult | Exception]:
    """``transform`` on every ``s``, concurrently; results come back in input order.

    With ``on_error="return"`` the exception raised at a grid point is placed
    in the output list instead of being re-raised.
    """
    cfg = cfg or TransformConfig()
    s_list = [float(s) for s in s_values]
    for s in s_list:
        _check_s(s, cfg)

    def one(s):
        try:
            return transform(f, s, method, cfg)
        except (DivergenceError, InternalConsistencyError, ArithmeticError, PreconditionError) as exc:
            if on_error == "return":
                return exc
            raise

    if workers == 1 or len(s_list) == 1:
        return [one(s) for s in s_list]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, s_list))


def _check_t_multiple(f: RealFunction, pieces: Sequence[RealFunction], cfg: TransformConfig):
    rng = np.random.default_rng(12345)
    t = np.concatenate([rng.uniform(-10, 10, cfg.consistency_samples // 2),
                        np.exp(rng.uniform(-3, 4, cfg.consistency_samples // 2))])
    t = t[np.all(np.abs(t[:, None] - np.asarray(f.singular_points + (0.0,))[None, :]) > 1e-6, axis=1)]
    lhs = sum(np.asarray(p(t), dtype=float) for p in pieces)
    rhs = t * f(t)
    if not np.allclose(lhs, rhs, rtol=1e-9, atol=1e-12):
        i = int(np.argmax(np.abs(lhs - rhs)))
        raise PreconditionError(
            f"declared pieces do not sum to t*f(t): at t={t[i]!r} got {lhs[i]!r}, want {rhs[i]!r}")


def transform_derivative(f: RealFunction, g: Function, s: float,
                         cfg: TransformConfig | None = None) -> TransformResult:
    """``d/ds F(f)(s) = -i F(g)(s)`` where ``g = t f`` or a declared split of it.

    The split is checked pointwise against ``t f(t)`` before anything is
    integrated.
    """
    cfg = cfg or TransformConfig()
    s = _check_s(s, cfg)
    pieces = _pieces(g)
    _check_t_multiple(f, pieces, cfg)
    inner = transform(pieces, s, "auto", cfg)
    return replace(inner, value=-1j * inner.value, method="derivative_formula")


def decay_profile(f: Function, s_grid: Sequence[float], cfg: TransformConfig | None = None,
                  method: str = "auto") -> list[tuple[float, float]]:
    """``[(s, |s F(f)(s)|)]`` on an increasing positive grid.

    Paths that know the variation bound check it on the way.
    """
    cfg = cfg or TransformConfig()
    grid = [float(s) for s in s_grid]
    if not grid or any(s <= 0 for s in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("s_grid must be positive and strictly increasing")
    results = transform_grid(f, grid, method, cfg)
    return [(s, abs(s * r.value)) for s, r in zip(grid, results)]
