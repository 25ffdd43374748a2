"""Gauges, delta-fine tagged partitions and Riemann sums.

A gauge assigns a positive radius ``delta(t)`` to every tag. A finite cell
``[l, r]`` with tag ``t`` is fine when ``t - delta(t) <= l <= t <= r <=
t + delta(t)``. On an unbounded interval the outermost cells carry the
infinite tags: ``[x, +inf]`` with tag ``+inf`` is fine when ``x >= 1 /
edge_delta_pos``, and ``[-inf, x]`` with tag ``-inf`` when ``x <= -1 /
edge_delta_neg``. Functions are taken to vanish at the infinite tags.

This module is a faithful small-scale model of the gauge integral; actual
integration is done by :mod:`hkfourier.quadrature` and :mod:`hkfourier.hake`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "Gauge",
    "Cell",
    "TaggedPartition",
    "FinenessReport",
    "PartitionDepthError",
    "make_delta_fine_partition",
    "check_fineness",
    "riemann_sum",
]

MAX_DEPTH = 60
MAX_CELLS = 20_000_000
INF = math.inf


class PartitionDepthError(RuntimeError):
    """Bisection could not find a fine tag within the depth or cell budget."""


@dataclass(frozen=True)
class Gauge:
    """``delta`` maps an array of finite tags to positive radii."""

    delta: Callable[[np.ndarray], np.ndarray]
    edge_delta_neg: float = 1.0
    edge_delta_pos: float = 1.0

    def __post_init__(self):
        if not (self.edge_delta_neg > 0 and self.edge_delta_pos > 0):
            raise ValueError("edge deltas must be positive")

    @classmethod
    def constant(cls, value: float, edge_delta_neg: float | None = None,
                 edge_delta_pos: float | None = None) -> "Gauge":
        if not value > 0:
            raise ValueError("gauge value must be positive")
        return cls(lambda t: np.full(np.shape(t), float(value)),
                   value if edge_delta_neg is None else edge_delta_neg,
                   value if edge_delta_pos is None else edge_delta_pos)

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        d = np.broadcast_to(np.asarray(self.delta(t), dtype=float), t.shape)
        if np.any(~(d > 0)):
            bad = t[~(d > 0)].ravel()[0]
            raise ValueError(f"gauge is not positive at t={bad!r}")
        return d


class Cell(NamedTuple):
    left: float
    right: float
    tag: float


@dataclass(frozen=True)
class TaggedPartition:
    """Contiguous cells covering ``interval``; arrays are read-only."""

    lefts: np.ndarray
    rights: np.ndarray
    tags: np.ndarray
    interval: tuple[float, float]

    def __post_init__(self):
        arrs = [np.array(x, dtype=float) for x in (self.lefts, self.rights, self.tags)]
        for name, arr in zip(("lefts", "rights", "tags"), arrs):
            if arr.ndim != 1:
                raise ValueError(f"{name} must be one-dimensional")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        lefts, rights, tags = arrs
        a, b = float(self.interval[0]), float(self.interval[1])
        object.__setattr__(self, "interval", (a, b))
        if not (lefts.size == rights.size == tags.size) or lefts.size == 0:
            raise ValueError("need equally many lefts, rights and tags, at least one cell")
        if lefts[0] != a or rights[-1] != b:
            raise ValueError("cells must start at a and end at b")
        if np.any(rights[:-1] != lefts[1:]):
            raise ValueError("cells must be contiguous")
        if np.any(rights < lefts):
            raise ValueError("cells must have left <= right")
        if np.any((tags < lefts) | (tags > rights)):
            i = int(np.flatnonzero((tags < lefts) | (tags > rights))[0])
            raise ValueError(f"tag of cell {i} lies outside the cell")
        if a == -INF and tags[0] != -INF:
            raise ValueError("first tag must be -inf on an interval starting at -inf")
        if b == INF and tags[-1] != INF:
            raise ValueError("last tag must be +inf on an interval ending at +inf")

    @classmethod
    def from_cells(cls, cells: Sequence[tuple[float, float, float]],
                   interval: tuple[float, float] | None = None) -> "TaggedPartition":
        arr = np.asarray(cells, dtype=float).reshape(-1, 3)
        if interval is None:
            interval = (arr[0, 0], arr[-1, 1])
        return cls(arr[:, 0], arr[:, 1], arr[:, 2], interval)

    @property
    def cells(self) -> list[Cell]:
        return [Cell(float(l), float(r), float(t)) for l, r, t in zip(self.lefts, self.rights, self.tags)]

    def __len__(self) -> int:
        return int(self.lefts.size)


@dataclass(frozen=True)
class FinenessReport:
    is_fine: bool
    first_violation: int | None = None
    reason: str = ""


def _clip_point(edge: float) -> float:
    # smallest power of two not below 1/edge: exactly representable and far enough out
    need = 1.0 / edge
    return float(2.0 ** math.ceil(math.log2(need)))


def _fine_finite(gauge: Gauge, a: float, b: float, max_depth: int) -> tuple[np.ndarray, ...]:
    """Level-synchronous bisection of [a, b]; returns sorted lefts, rights, tags."""
    done_l, done_r, done_t = [], [], []
    lo = np.array([a])
    hi = np.array([b])
    depth = 0
    while lo.size:
        for choice in ("left", "right", "mid"):
            cand = lo if choice == "left" else hi if choice == "right" else 0.5 * (lo + hi)
            d = gauge(cand)
            ok = (cand - d <= lo) & (hi <= cand + d)
            if ok.any():
                done_l.append(lo[ok])
                done_r.append(hi[ok])
                done_t.append(cand[ok])
                lo, hi = lo[~ok], hi[~ok]
                if not lo.size:
                    break
        if not lo.size:
            break
        depth += 1
        if depth > max_depth:
            raise PartitionDepthError(
                f"no fine tag after {max_depth} bisections near t={lo[0]!r}; "
                "the gauge is too small to resolve there")
        mid = 0.5 * (lo + hi)
        if np.any((mid <= lo) | (mid >= hi)):
            raise PartitionDepthError(f"cells near t={lo[0]!r} reached floating-point resolution")
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        if sum(x.size for x in done_l) + lo.size > MAX_CELLS:
            raise PartitionDepthError(f"more than {MAX_CELLS} cells required")
    lefts = np.concatenate(done_l)
    order = np.argsort(lefts, kind="stable")
    return lefts[order], np.concatenate(done_r)[order], np.concatenate(done_t)[order]


def make_delta_fine_partition(gauge: Gauge, a: float, b: float,
                              max_depth: int = MAX_DEPTH) -> TaggedPartition:
    """Build a delta-fine tagged partition of ``[a, b]`` (ends may be infinite).

    Each candidate cell is tried with its left endpoint, right endpoint and
    midpoint as tag and bisected if none works. Infinite ends are clipped at
    the smallest power of two beyond ``1 / edge_delta``.
    """
    a, b = float(a), float(b)
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    if a == INF or b == -INF or math.isnan(a) or math.isnan(b):
        raise ValueError("invalid interval")
    head: list[tuple[float, float, float]] = []
    tail: list[tuple[float, float, float]] = []
    lo, hi = a, b
    if a == -INF:
        if b <= -1.0 / gauge.edge_delta_neg:
            return TaggedPartition.from_cells([(-INF, b, -INF)], (a, b))
        lo = -_clip_point(gauge.edge_delta_neg)
        head.append((-INF, lo, -INF))
    if b == INF:
        if lo >= 1.0 / gauge.edge_delta_pos:
            return TaggedPartition.from_cells(head + [(lo, INF, INF)], (a, b))
        hi = _clip_point(gauge.edge_delta_pos)
        tail.append((hi, INF, INF))
    lefts, rights, tags = _fine_finite(gauge, lo, hi, max_depth)
    if head:
        lefts, rights, tags = (np.concatenate([[head[0][i]], arr]) for i, arr in enumerate((lefts, rights, tags)))
    if tail:
        lefts, rights, tags = (np.concatenate([arr, [tail[0][i]]]) for i, arr in enumerate((lefts, rights, tags)))
    return TaggedPartition(lefts, rights, tags, (a, b))


def _violations(lefts, rights, tags, gauge: Gauge) -> tuple[np.ndarray, list[str]]:
    n = lefts.size
    bad = np.zeros(n, dtype=bool)
    reason = [""] * n
    pos_edge = rights == INF
    neg_edge = lefts == -INF
    finite = ~(pos_edge | neg_edge)
    for i in np.flatnonzero(pos_edge):
        if tags[i] != INF or lefts[i] < 1.0 / gauge.edge_delta_pos:
            bad[i] = True
            reason[i] = "right edge cell needs tag +inf and left end >= 1/edge_delta_pos"
    for i in np.flatnonzero(neg_edge):
        if tags[i] != -INF or rights[i] > -1.0 / gauge.edge_delta_neg:
            bad[i] = True
            reason[i] = "left edge cell needs tag -inf and right end <= -1/edge_delta_neg"
    idx = np.flatnonzero(finite)
    if idx.size:
        t = tags[idx]
        tag_ok = np.isfinite(t) & (lefts[idx] <= t) & (t <= rights[idx])
        d = np.zeros_like(t)
        d[tag_ok] = gauge(t[tag_ok])
        ok = tag_ok & (t - d <= lefts[idx]) & (rights[idx] <= t + d)
        for i in idx[~ok]:
            bad[i] = True
            reason[i] = "cell is not inside [tag - delta(tag), tag + delta(tag)]"
    return bad, reason


def check_fineness(partition: TaggedPartition, gauge: Gauge) -> FinenessReport:
    """Report the first cell that violates its fineness condition."""
    bad, reason = _violations(partition.lefts, partition.rights, partition.tags, gauge)
    if not bad.any():
        return FinenessReport(True, None)
    i = int(np.flatnonzero(bad)[0])
    return FinenessReport(False, i, reason[i])


def riemann_sum(f: Callable[[np.ndarray], np.ndarray],
                partition: TaggedPartition | Sequence[tuple[float, float, float]]) -> float:
    """``sum f(tag) * (right - left)``; cells tagged at +-inf contribute zero.

    A cell of infinite length with a finite tag is rejected.
    """
    if isinstance(partition, TaggedPartition):
        lefts, rights, tags = partition.lefts, partition.rights, partition.tags
    else:
        arr = np.asarray(partition, dtype=float).reshape(-1, 3)
        lefts, rights, tags = arr[:, 0], arr[:, 1], arr[:, 2]
    width = rights - lefts
    unbounded = ~np.isfinite(width)
    if np.any(unbounded & np.isfinite(tags)):
        i = int(np.flatnonzero(unbounded & np.isfinite(tags))[0])
        raise ValueError(f"cell {i} has infinite length but a finite tag")
    use = np.isfinite(tags)
    if np.any(unbounded[use]):
        raise ValueError("infinite cell with finite tag")
    values = np.asarray(f(tags[use]), dtype=float)
    return float(math.fsum(values * width[use]))
