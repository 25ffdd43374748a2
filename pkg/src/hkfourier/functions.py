"""Function model and the example corpus.

A :class:`RealFunction` is a vectorized evaluator plus the analytic facts
the transform paths need: parity, support, class membership, an optional
derivative and known non-smooth points. Membership is declared, never
inferred.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.special import expi

__all__ = [
    "L1", "L2", "BV0", "AC_LOC", "AC_POS", "FLAGS",
    "RealFunction",
    "CorpusEntry",
    "cantor_eval",
    "cantor_knots",
    "multiply_by_t",
    "linear_combination",
    "corpus",
    "corpus_entry",
    "sine_integral_rational",
]

INF = math.inf

L1 = "L1"
L2 = "L2"
BV0 = "BV0"
AC_LOC = "AC_loc"
# absolutely continuous on compacts of (0, inf); enough for the half-line formulas
AC_POS = "AC_pos"
FLAGS = (L1, L2, BV0, AC_LOC, AC_POS)

PARITIES = ("even", "odd", "none")
CANTOR_DIGITS = 64


Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class RealFunction:
    """Evaluable real function with the metadata used to pick transform paths.

    ``support`` is a tuple of (left, right) intervals, possibly infinite,
    outside of which ``eval`` vanishes. ``oscillatory_points`` lists pairs
    ``(p, w)`` where the function oscillates like ``sin(w / |t - p|)`` near
    the support endpoint ``p``. ``knots(a, b)`` returns non-smooth points
    inside ``(a, b)`` when there are too many to list.
    """

    eval: Evaluator
    label: str = ""
    derivative: Evaluator | None = None
    parity: str = "none"
    support: tuple[tuple[float, float], ...] = ((-INF, INF),)
    membership: frozenset[str] = frozenset()
    singular_points: tuple[float, ...] = ()
    total_variation: float | None = None
    knots: Callable[[float, float], np.ndarray] | None = field(default=None, compare=False)
    oscillatory_points: tuple[tuple[float, float], ...] = ()
    description: str = ""

    def __post_init__(self):
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be one of {PARITIES}")
        unknown = set(self.membership) - set(FLAGS)
        if unknown:
            raise ValueError(f"unknown membership flags {sorted(unknown)}")
        if self.total_variation is not None and self.total_variation < 0:
            raise ValueError("total_variation must be >= 0")
        object.__setattr__(self, "membership", frozenset(self.membership))
        object.__setattr__(self, "support",
                           tuple((float(a), float(b)) for a, b in self.support))
        object.__setattr__(self, "singular_points", tuple(float(p) for p in self.singular_points))
        for a, b in self.support:
            if not a < b:
                raise ValueError(f"empty support interval ({a}, {b})")

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(np.asarray(self.eval(t), dtype=float), t.shape)

    def has(self, *flags: str) -> bool:
        return all(fl in self.membership for fl in flags)

    @property
    def support_kind(self) -> str:
        if self.support == ((-INF, INF),):
            return "full_line"
        if self.support == ((0.0, INF),):
            return "half_line_pos"
        if all(math.isfinite(a) and math.isfinite(b) for a, b in self.support):
            return "bounded"
        return "custom"

    def derivative_function(self) -> "RealFunction":
        """The derivative as a RealFunction on the same support (no flags)."""
        if self.derivative is None:
            raise ValueError(f"{self.label or 'function'} has no derivative")
        parity = {"even": "odd", "odd": "even"}.get(self.parity, "none")
        return RealFunction(self.derivative, f"d/dt {self.label}", parity=parity,
                            support=self.support, singular_points=self.singular_points,
                            knots=self.knots, oscillatory_points=self.oscillatory_points)


@dataclass(frozen=True)
class CorpusEntry:
    function: RealFunction
    reference_transform: Callable[[np.ndarray], np.ndarray] | None = None
    notes: str = ""
    tf_pieces: tuple[RealFunction, ...] | None = None  # declared split of t*f(t), if any

    @property
    def label(self) -> str:
        return self.function.label


# --------------------------------------------------------------------------- Cantor

def cantor_eval(x):
    """Cantor function by ternary digit expansion.

    Each ternary digit 0 or 2 emits a binary digit 0 or 1; the first digit
    1 emits a final binary 1 and stops. A fixed budget of 64 digits is used.
    Accepts scalars or arrays; values outside ``[0, 1]`` raise ``ValueError``.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > 1):
        raise ValueError("cantor_eval is defined on [0, 1]")
    r = arr.copy()
    out = np.zeros_like(r)
    active = r < 1.0
    out[~active] = 1.0
    scale = 0.5
    for _ in range(CANTOR_DIGITS):
        if not active.any():
            break
        r = 3.0 * r
        d = np.floor(r)
        r -= d
        hit = active & (d >= 1.0)
        out[hit] += scale
        active &= d != 1.0
        scale *= 0.5
    return float(out) if np.ndim(x) == 0 else out


def _cantor_pieces(lo: float, hi: float, width_limit: Callable[[float], float],
                   max_depth: int = 40) -> np.ndarray:
    """Endpoints of Cantor construction intervals meeting [lo, hi], refined until
    a piece is narrower than ``width_limit(centre)``."""
    out: list[float] = []
    stack = [(0.0, 1.0, 0)]
    while stack:
        a, w, depth = stack.pop()
        if a > hi or a + w < lo:
            continue
        if depth >= max_depth or w <= width_limit(a + 0.5 * w):
            out.extend((a, a + w))
            continue
        third = w / 3.0
        stack.append((a + 2 * third, third, depth + 1))
        stack.append((a, third, depth + 1))
    pts = np.asarray(out)
    return np.unique(pts[(pts >= lo) & (pts <= hi)])


@lru_cache(maxsize=4096)
def _arctan_cantor_knots(a: float, b: float, rel: float) -> np.ndarray:
    # t = cot(pi y / 2); a t-piece is (pi/2)(1 + t^2) times wider than its y-piece
    y_lo = (2 / math.pi) * math.atan(1 / b) if math.isfinite(b) else 0.0
    y_hi = (2 / math.pi) * math.atan(1 / a)

    def limit(y):
        t = 1 / math.tan(0.5 * math.pi * y) if y > 0 else INF
        return 2 * rel * t / (math.pi * (1 + t * t)) if math.isfinite(t) else 0.0

    y = _cantor_pieces(y_lo, y_hi, limit)
    y = y[y > 0]
    t = 1 / np.tan(0.5 * np.pi * y)
    t = t[(t > a) & (t < b)]
    t.sort()
    t.setflags(write=False)
    return t


def cantor_knots(a: float, b: float, rel: float = 1e-4) -> np.ndarray:
    """Non-smooth points in ``(a, b)``, ``a > 0``, of ``t -> C((2/pi) arctan(1/t))``.

    These are images of Cantor construction endpoints, refined until every
    leftover Cantor piece is shorter than ``rel * t``. Between knots the
    function is constant or confined to a tiny symmetric Cantor piece.
    """
    if a <= 0:
        raise ValueError("cantor_knots needs a > 0")
    return _arctan_cantor_knots(float(a), float(b), float(rel))


def _h1(t):
    # 1 - C((2/pi) arctan t) == C((2/pi) arctan(1/t)) for t > 0; the right side keeps digits
    t = np.asarray(t, dtype=float)
    y = (2 / np.pi) * np.arctan(1 / np.where(t > 0, t, 1.0))
    return np.where(t > 0, cantor_eval(np.clip(y, 0.0, 1.0)), 0.0)


def _h2(t):
    t = np.asarray(t, dtype=float)
    safe = np.where(t > 0, t, 1.0)
    return np.where(t > 0, np.cbrt(safe) * np.sin(1 / safe), 0.0)


# --------------------------------------------------------------------------- algebra

def multiply_by_t(f: RealFunction, membership: Iterable[str] = (), *, label: str | None = None,
                  total_variation: float | None = None) -> RealFunction:
    """``g(t) = t f(t)``. Parity flips; flags are whatever the caller declares."""
    base = f.eval
    df = f.derivative

    def g(t):
        t = np.asarray(t, dtype=float)
        return t * np.asarray(base(t), dtype=float)

    def product_rule(t):
        t = np.asarray(t, dtype=float)
        return np.asarray(base(t), dtype=float) + t * np.asarray(df(t), dtype=float)

    dg = product_rule if df is not None else None

    parity = {"even": "odd", "odd": "even"}.get(f.parity, "none")
    return RealFunction(g, label or f"t*{f.label}", derivative=dg, parity=parity,
                        support=f.support, membership=frozenset(membership),
                        singular_points=f.singular_points, total_variation=total_variation,
                        knots=f.knots, oscillatory_points=f.oscillatory_points)


def linear_combination(pairs: Sequence[tuple[float, RealFunction]], label: str = "",
                       membership: Iterable[str] = ()) -> RealFunction:
    """``sum(c * f)`` over ``pairs``; support is the whole line unless all agree."""
    coeffs = [float(c) for c, _ in pairs]
    funcs = [f for _, f in pairs]

    def ev(t):
        return sum(c * np.asarray(f.eval(t), dtype=float) for c, f in zip(coeffs, funcs))

    derivs = [f.derivative for f in funcs]
    def dsum(t):
        return sum(c * np.asarray(d(t), dtype=float) for c, d in zip(coeffs, derivs))

    dev = dsum if all(d is not None for d in derivs) else None

    parities = {f.parity for f in funcs}
    parity = parities.pop() if len(parities) == 1 else "none"
    supports = {f.support for f in funcs}
    support = supports.pop() if len(supports) == 1 else ((-INF, INF),)
    points = tuple(sorted({p for f in funcs for p in f.singular_points}))
    osc = tuple(sorted({p for f in funcs for p in f.oscillatory_points}))
    knot_fns = [f.knots for f in funcs if f.knots is not None]
    def all_knots(a, b):
        return np.unique(np.concatenate([np.asarray(k(a, b)) for k in knot_fns]))

    knots = all_knots if knot_fns else None
    return RealFunction(ev, label, derivative=dev, parity=parity, support=support,
                        membership=frozenset(membership), singular_points=points,
                        knots=knots, oscillatory_points=osc)


# --------------------------------------------------------------------------- references

SQRT_2_OVER_PI = math.sqrt(2 / math.pi)
SQRT_PI_OVER_2 = math.sqrt(math.pi / 2)
INV_SQRT_2PI = 1 / math.sqrt(2 * math.pi)


def sine_integral_rational(s):
    """``int_0^inf sin(s t) / (1 + t^2) dt`` for ``s > 0`` via exponential integrals."""
    s = np.asarray(s, dtype=float)
    return 0.5 * (np.exp(-s) * expi(s) - np.exp(s) * expi(-s))


def _ref_example1(s):
    s = np.asarray(s, dtype=float)
    a = np.abs(s)
    return INV_SQRT_2PI * (0.5 * np.pi * np.exp(-a) - 1j * np.sign(s) * sine_integral_rational(a))


def _ref_example2(s):
    a = np.abs(np.asarray(s, dtype=float))
    return (-SQRT_2_OVER_PI * sine_integral_rational(a) / a) + 0j


# --------------------------------------------------------------------------- corpus

def _build_corpus() -> list[CorpusEntry]:
    full = ((-INF, INF),)
    half = ((0.0, INF),)
    smooth_all = frozenset({L1, L2, BV0, AC_LOC, AC_POS})

    decay_exp = RealFunction(
        lambda t: np.exp(-np.abs(t)), "decay_exp",
        derivative=lambda t: -np.sign(t) * np.exp(-np.abs(t)),
        parity="even", support=full, membership=smooth_all, singular_points=(0.0,),
        total_variation=2.0, description="exp(-|t|)")
    gaussian = RealFunction(
        lambda t: np.exp(-0.5 * t * t), "gaussian",
        derivative=lambda t: -t * np.exp(-0.5 * t * t),
        parity="even", support=full, membership=smooth_all, total_variation=2.0,
        description="exp(-t^2/2)")
    cauchy = RealFunction(
        lambda t: 1 / (1 + t * t), "cauchy_full",
        derivative=lambda t: -2 * t / (1 + t * t) ** 2,
        parity="even", support=full, membership=smooth_all, total_variation=2.0,
        description="1/(1+t^2)")

    def ex1(t):
        return np.where(t >= 0, 1 / (1 + t * t), 0.0)

    example1 = RealFunction(
        ex1, "example1",
        derivative=lambda t: np.where(t > 0, -2 * t / (1 + t * t) ** 2, 0.0),
        support=half, membership=frozenset({L1, L2, BV0, AC_POS}), singular_points=(0.0,),
        total_variation=2.0,
        description="(1+t^2)^-1 on [0, inf), zero otherwise; unit jump at 0")
    example2 = RealFunction(
        lambda t: np.arctan(np.abs(t)) - 0.5 * np.pi, "example2",
        derivative=lambda t: np.sign(t) / (1 + t * t),
        parity="even", support=full, membership=frozenset({L2, BV0, AC_LOC, AC_POS}),
        singular_points=(0.0,), total_variation=math.pi,
        description="arctan|t| - pi/2; in BV0 and L2 but not L1")

    def ex3(t):
        t = np.asarray(t, dtype=float)
        safe = np.where(t > 2, t, 3.0)
        return np.where(t > 2, _h1(safe) / safe, np.where((t > 0) & (t < 1), _h2(t), 0.0))

    def ex3_knots(a, b):
        lo, hi = max(a, 2.0), b
        return cantor_knots(lo, hi) if hi > lo else np.empty(0)

    example3 = RealFunction(
        ex3, "example3", support=((0.0, 1.0), (2.0, INF)), membership=frozenset({L1, L2}),
        singular_points=(0.0, 1.0, 2.0), knots=ex3_knots, oscillatory_points=((0.0, 1.0),),
        description=("h1(t)/t for t > 2 and h2(t) for 0 < t < 1, zero otherwise, with the "
                     "Cantor composite h1(t) = 1 - C((2/pi) arctan t) and "
                     "h2(t) = t^(1/3) sin(1/t)"))

    odd_exp = RealFunction(
        lambda t: np.sign(t) * np.exp(-np.abs(t)), "odd_exp",
        derivative=lambda t: np.where(t != 0, -np.exp(-np.abs(t)), 0.0),
        parity="odd", support=full, membership=frozenset({L1, L2, BV0, AC_POS}),
        singular_points=(0.0,), total_variation=4.0,
        description="sign(t) exp(-|t|); jump of 2 at 0")
    odd_arctan = RealFunction(
        lambda t: np.sign(t) * (0.5 * np.pi - np.arctan(np.abs(t))), "odd_arctan",
        derivative=lambda t: np.where(t != 0, -1 / (1 + t * t), 0.0),
        parity="odd", support=full, membership=frozenset({L2, BV0, AC_POS}),
        singular_points=(0.0,), total_variation=2 * math.pi,
        description="sign(t) (pi/2 - arctan|t|); jump of pi at 0, not L1")
    odd_rational = RealFunction(
        lambda t: t / (1 + t * t), "odd_rational",
        derivative=lambda t: (1 - t * t) / (1 + t * t) ** 2,
        parity="odd", support=full, membership=frozenset({L2, BV0, AC_LOC, AC_POS}),
        total_variation=2.0, description="t/(1+t^2); in BV0 and L2 but not L1")
    odd_gauss = RealFunction(
        lambda t: t * np.exp(-0.5 * t * t), "odd_gauss",
        derivative=lambda t: (1 - t * t) * np.exp(-0.5 * t * t),
        parity="odd", support=full, membership=smooth_all,
        total_variation=4 * math.exp(-0.5), description="t exp(-t^2/2)")

    # declared splits of t*f(t)
    tf_decay = multiply_by_t(decay_exp, smooth_all, total_variation=4 / math.e)
    tf_gauss = multiply_by_t(gaussian, smooth_all, total_variation=4 * math.exp(-0.5))
    tf_cauchy = multiply_by_t(cauchy, {L2, BV0, AC_LOC, AC_POS}, total_variation=2.0)
    tf_ex1 = multiply_by_t(example1, {L2, BV0, AC_LOC, AC_POS}, total_variation=1.0)
    tf_odd_exp = multiply_by_t(odd_exp, smooth_all, total_variation=4 / math.e)
    tf_odd_gauss = multiply_by_t(odd_gauss, smooth_all, total_variation=8 / math.e)

    h1_at_2 = float(_h1(np.array([2.0]))[0])
    g1 = RealFunction(
        lambda t: np.where(t > 2, _h1(np.where(t > 2, t, 3.0)), 0.0), "example3_g1",
        support=((2.0, INF),), membership=frozenset({L2, BV0}), singular_points=(2.0,),
        total_variation=2 * h1_at_2, knots=ex3_knots,
        description="h1 on (2, inf): bounded variation, vanishing at infinity, not L1")
    g2 = RealFunction(
        lambda t: np.where((t > 0) & (t < 1), t * _h2(t), 0.0), "example3_g2",
        support=((0.0, 1.0),), membership=frozenset({L1, L2, BV0}), singular_points=(0.0, 1.0),
        oscillatory_points=((0.0, 1.0),), description="t h2(t) on (0, 1)")

    return [
        CorpusEntry(decay_exp, lambda s: SQRT_2_OVER_PI / (1 + np.asarray(s) ** 2) + 0j,
                    "absolutely integrable, kink at 0", (tf_decay,)),
        CorpusEntry(gaussian, lambda s: np.exp(-0.5 * np.asarray(s) ** 2) + 0j,
                    "self-dual under the unitary transform", (tf_gauss,)),
        CorpusEntry(cauchy, lambda s: SQRT_PI_OVER_2 * np.exp(-np.abs(s)) + 0j,
                    "t f(t) is in BV0 but not L1", (tf_cauchy,)),
        CorpusEntry(example1, _ref_example1,
                    "f in L1 and L2 with a unit jump at 0; t f is in BV0 but not L1", (tf_ex1,)),
        CorpusEntry(example2, _ref_example2,
                    "in BV0 and L2 but not L1; t f is not in L1 + BV0", None),
        CorpusEntry(example3, None,
                    "Cantor composite; t f = g1 + g2 with g1 in BV0 (not L1) and g2 in L1",
                    (g1, g2)),
        CorpusEntry(odd_exp, lambda s: -1j * SQRT_2_OVER_PI * np.asarray(s) / (1 + np.asarray(s) ** 2),
                    "odd, jump at 0: half-line formula only", (tf_odd_exp,)),
        CorpusEntry(odd_arctan,
                    lambda s: -1j * SQRT_PI_OVER_2 * (1 - np.exp(-np.abs(s))) / np.asarray(s),
                    "odd, jump at 0, not L1", None),
        CorpusEntry(odd_rational, lambda s: -1j * SQRT_PI_OVER_2 * np.sign(s) * np.exp(-np.abs(s)),
                    "odd, absolutely continuous, not L1", None),
        CorpusEntry(odd_gauss, lambda s: -1j * np.asarray(s) * np.exp(-0.5 * np.asarray(s) ** 2),
                    "odd, absolutely continuous", (tf_odd_gauss,)),
    ]


@lru_cache(maxsize=1)
def _corpus_cached() -> tuple[CorpusEntry, ...]:
    return tuple(_build_corpus())


def corpus() -> list[CorpusEntry]:
    return list(_corpus_cached())


def corpus_entry(label: str) -> CorpusEntry:
    for entry in _corpus_cached():
        if entry.label == label:
            return entry
    raise KeyError(f"no corpus entry labelled {label!r}")
