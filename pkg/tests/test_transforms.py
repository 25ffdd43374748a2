import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hkfourier.functions import (
    AC_LOC,
    BV0,
    L1,
    L2,
    RealFunction,
    corpus,
    corpus_entry,
    linear_combination,
    multiply_by_t,
)
from hkfourier.hake import DivergenceError, HakeConfig
from hkfourier.transforms import (
    FrequencyDomainError,
    PreconditionError,
    TransformConfig,
    applicable_methods,
    decay_profile,
    derivative_l1_norm,
    hkft_by_parts,
    hkft_cos,
    hkft_direct,
    hkft_even,
    hkft_odd,
    hkft_sin,
    select_method,
    transform,
    transform_derivative,
    transform_grid,
)
from _oracles import (
    CANTOR_G1_TRANSFORM,
    CANTOR_ORACLE_TOL,
    EXAMPLE3_TRANSFORM,
    g2_transform,
    sine_rational,
)

SQRT_2PI = math.sqrt(2 * math.pi)
SQRT_2_PI = math.sqrt(2 / math.pi)


def f_(label):
    return corpus_entry(label).function


def test_cosine_and_sine_parts():
    v, err = hkft_cos(f_("gaussian"), 1.0)
    assert abs(v - math.exp(-0.5)) < 1e-8 and err >= 0
    assert abs(hkft_cos(f_("decay_exp"), 2.0)[0] - SQRT_2_PI / 5) < 1e-8
    assert abs(hkft_cos(f_("odd_exp"), 1.3)[0]) < 1e-10
    assert abs(hkft_sin(f_("cauchy_full"), 1.3)[0]) < 1e-10
    assert abs(hkft_sin(f_("odd_exp"), 1.0)[0] - SQRT_2_PI / 2) < 1e-8


def test_sine_part_of_one_sided_rational():
    v, _ = hkft_sin(f_("example1"), 1.0)
    assert abs(v - sine_rational(1.0) / SQRT_2PI) < 1e-6


def test_direct_path():
    r = hkft_direct(f_("cauchy_full"), 1.0)
    assert r.method == "direct" and r.converged
    assert abs(r.value - math.sqrt(math.pi / 2) * math.exp(-1)) < 1e-8
    ex2 = hkft_direct(f_("example2"), 1.0)
    assert abs(ex2.value.imag) < 1e-9
    assert abs(ex2.value - hkft_by_parts(f_("example2"), 1.0).value) < 1e-6
    assert ex2.levels > 0


@pytest.mark.parametrize("method", ["direct", "by_parts", "even_formula"])
def test_conjugate_symmetry(method):
    for label in ("example2", "decay_exp"):
        a = transform(f_(label), 1.7, method).value
        b = transform(f_(label), -1.7, method).value
        assert abs(b - a.conjugate()) <= 1e-9 * max(1.0, abs(a))
    a = transform(f_("example1"), 1.7, "direct").value
    b = transform(f_("example1"), -1.7, "direct").value
    assert abs(b - a.conjugate()) <= 1e-9 * max(1.0, abs(a))


def test_by_parts_path():
    r = hkft_by_parts(f_("decay_exp"), 1.0)
    assert abs(r.value - SQRT_2_PI / 2) < 1e-8
    assert abs(r.value - hkft_direct(f_("decay_exp"), 1.0).value) < 1e-8
    ex2 = hkft_by_parts(f_("example2"), 2.0)
    assert abs(ex2.value - (-SQRT_2_PI * 0.5 * sine_rational(2.0))) < 1e-7
    assert ex2.bound == pytest.approx(math.pi / (2 * SQRT_2PI))


def test_by_parts_bound():
    for e in corpus():
        f = e.function
        if "by_parts" not in applicable_methods(f):
            continue
        norm = derivative_l1_norm(f).value
        for s in (0.5, 1.0, 2.0, 5.0, 10.0):
            r = hkft_by_parts(f, s)
            assert abs(r.value) * s * SQRT_2PI <= norm * (1 + 1e-9)


def test_even_and_odd_paths():
    assert abs(hkft_even(f_("decay_exp"), 1.0).value - SQRT_2_PI / 2) < 1e-8
    assert abs(hkft_even(f_("gaussian"), 2.0).value - math.exp(-2.0)) < 1e-8
    ex2 = hkft_even(f_("example2"), 1.0)
    assert ex2.value.imag == 0.0
    assert abs(ex2.value - hkft_direct(f_("example2"), 1.0).value) < 1e-6
    r = hkft_odd(f_("odd_exp"), 1.0)
    assert r.value.real == 0.0
    assert abs(r.value - (-1j * SQRT_2_PI * 0.5)) < 1e-8
    arc = hkft_odd(f_("odd_arctan"), 1.0)
    assert arc.value.real == 0.0
    assert abs(arc.value - hkft_direct(f_("odd_arctan"), 1.0).value) < 1e-6


def test_odd_formula_small_frequency_is_cancellation_safe():
    s = 2e-3
    r = hkft_odd(f_("odd_gauss"), s)
    assert abs(r.value - (-1j * s * math.exp(-0.5 * s * s))) < 1e-10


def test_parity_in_direct_path():
    for label, s in (("example2", 3.0), ("gaussian", 0.7), ("cauchy_full", 2.2)):
        assert abs(transform(f_(label), s, "direct").value.imag) < 1e-9
    for label, s in (("odd_exp", 1.1), ("odd_rational", 2.0)):
        assert abs(transform(f_(label), s, "direct").value.real) < 1e-9


def test_preconditions():
    with pytest.raises(PreconditionError):
        hkft_by_parts(f_("example1"), 1.0)  # jump at 0
    with pytest.raises(PreconditionError):
        hkft_even(f_("odd_exp"), 1.0)
    with pytest.raises(PreconditionError):
        hkft_odd(f_("gaussian"), 1.0)
    with pytest.raises(PreconditionError):
        hkft_by_parts(f_("example3"), 1.0)
    bare = RealFunction(np.cos, "unflagged")
    with pytest.raises(PreconditionError):
        hkft_direct(bare, 1.0)
    with pytest.raises(PreconditionError):
        select_method(bare)
    with pytest.raises(ValueError):
        transform(f_("gaussian"), 1.0, "spectral")


def test_frequency_domain():
    for s in (0.0, 1e-4, -5e-4, math.nan, math.inf):
        with pytest.raises(FrequencyDomainError, match="s_min"):
            transform(f_("gaussian"), s)
    with pytest.raises(FrequencyDomainError):
        transform_grid(f_("gaussian"), [1.0, 0.0])
    assert transform(f_("gaussian"), 1e-3).converged


def test_method_selection():
    assert select_method(f_("decay_exp")) == "by_parts"
    assert select_method(f_("example1")) == "direct"
    assert select_method(f_("odd_exp")) == "odd_formula"
    assert select_method(f_("example3")) == "direct"
    assert transform(f_("example2"), 1.0, "by-parts").method == "by_parts"
    assert transform(f_("decay_exp"), 1.0, "even").method == "even_formula"


def test_divergence_is_reported():
    const_like = RealFunction(lambda t: np.cos(0.0 * t) + 0.0, "one", membership={BV0})
    with pytest.raises(DivergenceError):
        transform(const_like, 1e-3, "direct",
                  TransformConfig(hake=HakeConfig(k_max=40)))


def test_linearity():
    a, b = f_("gaussian"), f_("cauchy_full")
    combo = linear_combination([(2.0, a), (-3.0, b)], "combo", {L1, L2, BV0})
    for s in (0.5, 2.0):
        lhs = transform(combo, s, "direct")
        ra, rb = transform(a, s, "direct"), transform(b, s, "direct")
        tol = lhs.error_estimate + 2 * ra.error_estimate + 3 * rb.error_estimate + 1e-12
        assert abs(lhs.value - (2 * ra.value - 3 * rb.value)) <= tol


@settings(max_examples=10, deadline=None)
@given(s=st.floats(0.3, 8.0), c=st.floats(-3, 3))
def test_decomposition_lists_add_up(s, c):
    a, b = f_("decay_exp"), f_("example2")
    shifted = linear_combination([(1.0, b), (c, a)], "shifted", {L2, BV0})
    two = transform([shifted, linear_combination([(-c, a)], "neg", {L1})], s, "direct").value
    assert abs(two - transform(b, s, "by_parts").value) < 1e-7


def test_transform_grid_order_and_errors():
    grid = [0.5, 1.0, 2.0, 5.0]
    res = transform_grid(f_("gaussian"), grid, workers=4)
    assert [r.s for r in res] == grid
    assert all(abs(r.value - math.exp(-0.5 * r.s ** 2)) < 1e-8 for r in res)
    bad = RealFunction(lambda t: np.ones_like(t), "one", membership={BV0})
    out = transform_grid(bad, [1e-3, 2e-3], "direct", TransformConfig(hake=HakeConfig(k_max=30)),
                         on_error="return")
    assert all(isinstance(x, Exception) for x in out)


def test_derivative_formula():
    g = corpus_entry("gaussian")
    r = transform_derivative(g.function, g.tf_pieces, 1.0)
    assert r.method == "derivative_formula"
    assert abs(r.value - (-math.exp(-0.5))) < 1e-7
    c = corpus_entry("cauchy_full")
    assert abs(transform_derivative(c.function, c.tf_pieces, 1.0).value
               - (-math.sqrt(math.pi / 2) * math.exp(-1))) < 1e-7
    ex1 = corpus_entry("example1")
    h = 1e-3
    fd = (transform(ex1.function, 1 + h, "direct").value - transform(ex1.function, 1 - h, "direct").value) / (2 * h)
    assert abs(transform_derivative(ex1.function, ex1.tf_pieces, 1.0).value - fd) <= 1e-4 * abs(fd)


def test_derivative_accepts_undeclared_product():
    f = f_("odd_gauss")
    g = multiply_by_t(f, {L1, L2, BV0, AC_LOC})
    d = transform_derivative(f, g, 1.5).value
    # d/ds of -i s exp(-s^2/2)
    assert abs(d - (-1j * (1 - 1.5 ** 2) * math.exp(-0.5 * 1.5 ** 2))) < 1e-7


def test_derivative_rejects_wrong_split():
    with pytest.raises(PreconditionError, match="t\\*f"):
        transform_derivative(f_("gaussian"), [f_("gaussian")], 1.0)


def test_decay_profile():
    prof = decay_profile(f_("decay_exp"), [10.0, 20.0, 40.0])
    expected = [SQRT_2_PI * s / (1 + s * s) for s in (10, 20, 40)]
    assert [round(v, 4) for _, v in prof] == [0.0790, 0.0398, 0.0199]
    assert all(abs(v - e) < 1e-8 for (_, v), e in zip(prof, expected))
    ex2 = decay_profile(f_("example2"), [1.0, 2.0, 4.0, 8.0, 16.0])
    assert all(v <= 2 * math.pi / SQRT_2PI for _, v in ex2)
    assert ex2[-1][1] < ex2[0][1]
    (_, g1), (_, g2), (_, g4) = decay_profile(f_("gaussian"), [1.0, 2.0, 4.0])
    # faster than s^-3 between 2 and 4, and accelerating
    assert g4 / g2 < 2.0 ** -3 and g4 / g2 < (g2 / g1) ** 4
    assert abs(g4 - 4 * math.exp(-8)) < 1e-9
    with pytest.raises(ValueError):
        decay_profile(f_("gaussian"), [2.0, 1.0])


def test_derivative_l1_norm_uses_declared_variation_check():
    assert abs(derivative_l1_norm(f_("example2")).value - math.pi) < 1e-8
    assert abs(derivative_l1_norm(f_("odd_gauss")).value - 4 * math.exp(-0.5)) < 1e-8


def test_oscillatory_piece_matches_independent_value():
    g2 = corpus_entry("example3").tf_pieces[1]
    assert abs(transform(g2, 1.0).value - g2_transform(1.0)) < 1e-10


EXAMPLE3_CFG = TransformConfig(hake=HakeConfig(k_max=20000, min_radius=4000))


@pytest.mark.slow
@pytest.mark.parametrize("s", [1.0, 2.0])
def test_cantor_composite_transform(s):
    r = transform(f_("example3"), s, "direct", EXAMPLE3_CFG)
    assert r.converged
    assert abs(r.value - EXAMPLE3_TRANSFORM[s]) < 1e-6


@pytest.mark.parametrize("s", [1e-3, 2e-3, 0.05])
def test_small_frequencies_against_closed_forms(s):
    # long first shells must still resolve the unit-scale features near 0
    for e in corpus():
        if e.reference_transform is None:
            continue
        for m in applicable_methods(e.function):
            r = transform(e.function, s, m)
            assert abs(r.value - complex(e.reference_transform(s))) < 1e-7, (e.label, m)


@pytest.mark.slow
def test_cantor_composite_derivative_against_oracle():
    e = corpus_entry("example3")
    for s in (1.0, 2.0):
        want = -1j * (CANTOR_G1_TRANSFORM[s] + g2_transform(s))
        got = transform_derivative(e.function, e.tf_pieces, s, EXAMPLE3_CFG).value
        # dominated by the slowly decaying staircase piece at radius 4000
        assert abs(got - want) < 5e-5


@pytest.mark.slow
def test_staircase_piece_converges_with_radius():
    g1 = corpus_entry("example3").tf_pieces[0]
    errs = []
    for radius in (1000, 16000):
        cfg = TransformConfig(hake=HakeConfig(k_max=80000, min_radius=radius))
        errs.append(abs(transform(g1, 1.0, "direct", cfg).value - CANTOR_G1_TRANSFORM[1.0]))
    assert errs[1] < 5 * CANTOR_ORACLE_TOL
    assert errs[1] < errs[0] / 20
