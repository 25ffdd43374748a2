import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hkfourier.hk_core import (
    Gauge,
    PartitionDepthError,
    TaggedPartition,
    check_fineness,
    make_delta_fine_partition,
    riemann_sum,
)
from hkfourier.validation import random_gauge

INF = math.inf


def test_constant_gauge_on_unit_interval():
    g = Gauge.constant(0.3)
    p = make_delta_fine_partition(g, 0.0, 1.0)
    widths = p.rights - p.lefts
    assert np.all(widths <= 0.6)
    assert np.all((p.lefts <= p.tags) & (p.tags <= p.rights))
    assert check_fineness(p, g).is_fine


def test_half_line_clipping():
    g = Gauge.constant(1.0, edge_delta_pos=0.01)
    p = make_delta_fine_partition(g, 0.0, INF)
    last = p.cells[-1]
    assert last.right == INF and last.tag == INF and last.left >= 100
    assert last.left == 128.0  # next power of two
    assert check_fineness(p, g).is_fine


def test_full_line_clipping():
    g = Gauge.constant(1.0, 0.1, 0.1)
    p = make_delta_fine_partition(g, -INF, INF)
    first, last = p.cells[0], p.cells[-1]
    assert first.left == -INF and first.tag == -INF and first.right <= -10
    assert last.right == INF and last.tag == INF and last.left >= 10
    assert check_fineness(p, g).is_fine


def test_negative_half_line_entirely_beyond_clip_is_one_cell():
    p = make_delta_fine_partition(Gauge.constant(1.0, 0.1, 0.1), -INF, -20.0)
    assert len(p) == 1 and p.cells[0] == (-INF, -20.0, -INF)


def test_single_coarse_cell_is_not_fine():
    p = TaggedPartition.from_cells([(0.0, 1.0, 0.0)])
    rep = check_fineness(p, Gauge.constant(0.1))
    assert not rep.is_fine and rep.first_violation == 0


def test_left_edge_cell_fineness():
    p = TaggedPartition.from_cells([(-INF, -5.0, -INF), (-5.0, 0.0, -2.5)])
    # the edge cell needs its right end at or below -1/edge_delta_neg
    assert check_fineness(p, Gauge(lambda t: np.full(np.shape(t), 3.0), 0.2, 1.0)).is_fine
    rep = check_fineness(p, Gauge(lambda t: np.full(np.shape(t), 3.0), 0.1, 1.0))
    assert not rep.is_fine and rep.first_violation == 0


def test_structural_validation():
    with pytest.raises(ValueError, match="contiguous"):
        TaggedPartition.from_cells([(0, 1, 0.5), (1.5, 2, 2)])
    with pytest.raises(ValueError, match="outside"):
        TaggedPartition.from_cells([(0, 1, 2)])
    with pytest.raises(ValueError, match="-inf"):
        TaggedPartition.from_cells([(-INF, 0, -1)])
    with pytest.raises(ValueError, match="\\+inf"):
        TaggedPartition.from_cells([(0, INF, 1)])
    with pytest.raises(ValueError):
        make_delta_fine_partition(Gauge.constant(0.1), 1.0, 1.0)


def test_gauge_validation():
    with pytest.raises(ValueError):
        Gauge.constant(0.0)
    with pytest.raises(ValueError):
        Gauge.constant(1.0, edge_delta_pos=0.0)
    g = Gauge(lambda t: np.where(np.asarray(t) > 0.5, 0.0, 1.0))
    with pytest.raises(ValueError, match="not positive"):
        g(np.array([0.7]))


def test_riemann_sum_of_constant_is_exact():
    for d in (0.3, 0.07, 0.01):
        p = make_delta_fine_partition(Gauge.constant(d), 0.0, 1.0)
        assert riemann_sum(lambda t: np.ones_like(t), p) == 1.0


def test_riemann_sums_of_square_converge():
    errors = []
    for k in range(1, 5):
        d = 10.0 ** -k
        p = make_delta_fine_partition(Gauge.constant(d), 0.0, 1.0)
        err = abs(riemann_sum(lambda t: t * t, p) - 1 / 3)
        assert err <= 2 * d
        errors.append(err)
    assert errors[-1] <= 1e-3
    assert all(a >= b for a, b in zip(errors, errors[1:]))


def test_riemann_sum_of_exponential_on_half_line():
    g = Gauge.constant(1e-3, edge_delta_pos=1e-3)
    p = make_delta_fine_partition(g, 0.0, INF)
    assert abs(riemann_sum(lambda t: np.exp(-t), p) - 1.0) < 1e-2


def test_riemann_sum_rejects_unbounded_cell_with_finite_tag():
    with pytest.raises(ValueError, match="infinite length"):
        riemann_sum(lambda t: t, [(0.0, 1.0, 0.5), (1.0, INF, 2.0)])
    assert riemann_sum(lambda t: t, [(0.0, 1.0, 0.5), (1.0, INF, INF)]) == 0.5


def test_depth_error_for_gauge_vanishing_numerically():
    # the cell holding 1/3 would need width 1e-25, far below one ulp there
    def delta(t):
        r = np.abs(np.asarray(t) - 1 / 3)
        return np.where(r < 1e-12, 1e-25, 0.5 * r)

    g = Gauge(delta)
    with pytest.raises(PartitionDepthError, match="bisections|resolution"):
        make_delta_fine_partition(g, 0.0, 1.0)


def test_random_gauges_give_fine_partitions():
    rng = np.random.default_rng(11)
    intervals = [(-3.0, 4.0), (0.0, INF), (-INF, 1.0), (-INF, INF)]
    for i in range(100):
        g = random_gauge(rng)
        p = make_delta_fine_partition(g, *intervals[i % 4])
        assert check_fineness(p, g).is_fine


@settings(max_examples=40, deadline=None)
@given(a=st.floats(-50, 50), width=st.floats(1e-3, 30), base=st.floats(1e-3, 2.0),
       dip=st.floats(-50, 80), slope=st.floats(1e-3, 1.0))
def test_soundness_and_cover(a, width, base, dip, slope):
    b = a + width
    g = Gauge(lambda t: np.minimum(base, 1e-4 + slope * np.abs(np.asarray(t) - dip)))
    p = make_delta_fine_partition(g, a, b)
    assert check_fineness(p, g).is_fine
    assert p.lefts[0] == a and p.rights[-1] == b
    assert math.isclose(math.fsum(p.rights - p.lefts), b - a, rel_tol=1e-12, abs_tol=1e-12)


@settings(max_examples=20, deadline=None)
@given(e_neg=st.floats(1e-3, 5.0), e_pos=st.floats(1e-3, 5.0))
def test_edge_clipping_property(e_neg, e_pos):
    g = Gauge.constant(1.0, e_neg, e_pos)
    p = make_delta_fine_partition(g, -INF, INF)
    assert p.rights[0] <= -1 / e_neg and p.lefts[-1] >= 1 / e_pos
    assert check_fineness(p, g).is_fine


def test_riemann_convergence_for_smooth_function():
    a, b = 0.0, 2.0
    exact = 1 - math.cos(2.0)
    max_fp = 1.0
    errs = [abs(riemann_sum(np.sin, make_delta_fine_partition(Gauge.constant(d), a, b)) - exact)
            for d in (1e-1, 1e-2, 1e-3)]
    for coarse, fine in zip(errs, errs[1:]):
        assert coarse <= 10 * max(fine, 2 * 10 * 1e-3)
    assert errs[-1] <= 1e-2 * max_fp * (b - a)
