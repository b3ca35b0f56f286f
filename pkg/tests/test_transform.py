import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arithradon import arith
from arithradon.kernel import partial_sum_T
from arithradon.signals import SignalSpec, random_compact_unit
from arithradon.transform import (evaluate, exact_compact_evaluate, figure_grid, figure_pair,
                                  figure_series, reference_budget, tail_budget)

import oracles

CAUCHY = SignalSpec.cauchy()


@pytest.fixture(scope="module")
def fig_phi():
    return figure_pair("phi", 8000)


def test_zero_signal(fig_phi):
    P, Q = fig_phi
    zero = SignalSpec.compact({})
    assert evaluate(zero, CAUCHY, P, Q, 0.3, 1000) == 0


@pytest.mark.parametrize("name", ["phi", "pi", "mu", "omega", "d"])
def test_equal_even_functions_cancel(name):
    P = arith.make_fn(name, "even", 2000)
    x = np.linspace(-15, 15, 301)
    assert np.all(evaluate(CAUCHY, CAUCHY, P, P, x, 2000) == 0)
    assert all(v == 0 for _, v in figure_series(CAUCHY, CAUCHY, P, P, T0=2000))


def test_figure_value_at_origin_refines(fig_phi):
    P, Q = fig_phi
    a = evaluate(CAUCHY, CAUCHY, P, Q, 0.0, 1000)
    b = evaluate(CAUCHY, CAUCHY, P, Q, 0.0, 8000)
    assert abs(a - b) <= 1e-4


def test_evaluate_matches_direct_sum(rng):
    P, Q = figure_pair("phi", 300)
    c = SignalSpec.cauchy(0.5, 2.0, 1.5)
    for x in (-7.25, 0.0, 3.5, 11.0):
        got = evaluate(c, CAUCHY, P, Q, x, 300)
        direct = oracles.direct_sum(c, CAUCHY, lambda s: int(P(s)), lambda s: int(Q(s)), x, 300)
        assert abs(got - direct) <= 1e-12
    f, g = random_compact_unit(rng, 12, -4), random_compact_unit(rng, 12, 3)
    for n in range(-10, 30, 3):
        got = evaluate(f, g, P, Q, float(n), 300)
        direct = oracles.direct_sum(f, g, lambda s: int(P(s)), lambda s: int(Q(s)), n, 300)
        assert abs(got - direct) <= 1e-12


def test_evaluate_scalar_and_array_agree(fig_phi):
    P, Q = fig_phi
    xs = np.array([-2.0, 0.5, 9.9])
    arr = evaluate(CAUCHY, CAUCHY, P, Q, xs, 1000)
    assert isinstance(evaluate(CAUCHY, CAUCHY, P, Q, 0.5, 1000), complex)
    assert [evaluate(CAUCHY, CAUCHY, P, Q, x, 1000) for x in xs] == arr.tolist()


def test_T0_beyond_tables():
    P, Q = figure_pair("phi", 100)
    with pytest.raises(ValueError):
        evaluate(CAUCHY, CAUCHY, P, Q, 0.0, 101)
    with pytest.raises(ValueError):
        evaluate(CAUCHY, CAUCHY, P, Q, 0.0, 0)


def test_figure_grid():
    xs = figure_grid(-15, 15, 0.1)
    assert xs.size == 301 and xs[0] == -15 and xs[-1] == 15 and xs[150] == 0
    assert figure_grid(0, 1, 0).size == 0
    assert figure_grid(0, 1, -0.5).size == 0


def test_figure_series_rows(fig_phi):
    P, Q = fig_phi
    rows = figure_series(CAUCHY, CAUCHY, P, Q, -15, 15, 0.1, 1000)
    assert len(rows) == 301
    assert rows[0][0] == -15.0 and rows[-1][0] == 15.0
    assert figure_series(CAUCHY, CAUCHY, P, Q, -1, 1, 0.0, 1000) == []


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.complex_numbers(max_magnitude=10, allow_nan=False,
                                                       allow_infinity=False))
def test_bilinearity(seed, alpha):
    P, Q = figure_pair("phi", 500)
    rng = np.random.default_rng(seed)
    f1, f2 = random_compact_unit(rng, 10, -5), random_compact_unit(rng, 7, 2)
    g = random_compact_unit(rng, 9, -1)
    x = np.arange(-20, 40, dtype=float)
    lhs = evaluate(f1.scaled(alpha) + f2, g, P, Q, x, 500)
    rhs = alpha * evaluate(f1, g, P, Q, x, 500) + evaluate(f2, g, P, Q, x, 500)
    scale = np.abs(alpha) * np.abs(evaluate(f1, g, P, Q, x, 500)) + np.abs(evaluate(f2, g, P, Q, x, 500))
    assert np.all(np.abs(lhs - rhs) <= 1e-12 * np.maximum(scale, 1e-300) + 1e-15)
    lhs = evaluate(g, f1.scaled(alpha) + f2, P, Q, x, 500)
    rhs = alpha * evaluate(g, f1, P, Q, x, 500) + evaluate(g, f2, P, Q, x, 500)
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-15)


def test_tail_budget_compact_is_zero():
    P, Q = figure_pair("phi", 4000)
    f = SignalSpec.from_arrays(np.arange(-3, 4), np.ones(7) / math.sqrt(7))
    # sqrt(1001/2) > 22 > max|x| + width
    b = tail_budget(f, f, P, Q, (-10, 10), 1000)
    assert b.tail_bound == 0.0 and b.side == "P"


def test_tail_budget_positive_and_certified(fig_phi):
    P, Q = fig_phi
    b = tail_budget(CAUCHY, CAUCHY, P, Q, (-15, 15), 1000)
    assert 0 < b.tail_bound < math.inf
    xs = figure_grid(-15, 15, 0.1)
    gap = np.abs(evaluate(CAUCHY, CAUCHY, P, Q, xs, 1000) - evaluate(CAUCHY, CAUCHY, P, Q, xs, 8000))
    assert gap.max() <= b.tail_bound
    # the classical budget is much smaller than ours; both are reported in the acceptance run
    assert reference_budget(1000) == pytest.approx(1 / 985 ** 2)


@pytest.mark.parametrize("T0", [250, 1000, 4000])
def test_tail_budget_shrinks_with_T0(T0):
    P, Q = figure_pair("phi", 16)
    small = tail_budget(CAUCHY, CAUCHY, P, Q, (-15, 15), T0).tail_bound
    big = tail_budget(CAUCHY, CAUCHY, P, Q, (-15, 15), 4 * T0).tail_bound
    assert big <= small / 2


def test_tail_budget_uses_Q_minorant():
    P = arith.make_fn("mu", "even", 100)
    Q = arith.make_fn("pi", "even", 100)
    b = tail_budget(CAUCHY, CAUCHY, P, Q, (-15, 15), 100)
    assert b.side == "Q" and b.tail_bound > 0


def test_tail_budget_requires_minorant():
    P = arith.make_fn("mu", "even", 100)
    Q = arith.make_fn("d", "signodd", 100)
    with pytest.raises(ValueError):
        tail_budget(CAUCHY, CAUCHY, P, Q, (-15, 15), 100)


def _random_config(rng, k):
    names = [("phi", "even"), ("pi", "even"), ("phi", "signodd"), ("pi", "signodd")]
    others = [("d", "signodd"), ("mu", "even"), ("omega", "even"), ("d", "even")]
    P = arith.make_fn(*names[k % 4], 1 << 14)
    Q = arith.make_fn(*others[(k // 4) % 4], 1 << 14)
    if k % 3 == 0:
        f = random_compact_unit(rng, int(rng.integers(2, 20)), int(rng.integers(-10, 10)))
        g = random_compact_unit(rng, int(rng.integers(2, 20)), int(rng.integers(-10, 10)))
    else:
        f = SignalSpec.cauchy(float(rng.uniform(-3, 3)), float(rng.uniform(0.5, 3)))
        g = SignalSpec.cauchy(float(rng.uniform(-3, 3)), float(rng.uniform(0.5, 3)))
    T0 = int(rng.integers(100, 4000))
    lo = float(rng.uniform(-20, 0))
    return f, g, P, Q, T0, (lo, lo + float(rng.uniform(1, 30)))


def test_refinement_certification_random(rng):
    for k in range(20):
        f, g, P, Q, T0, (lo, hi) = _random_config(rng, k)
        b = tail_budget(f, g, P, Q, (lo, hi), T0)
        x = np.arange(math.ceil(lo), math.floor(hi) + 1, dtype=float) if f.is_compact \
            else np.linspace(lo, hi, 97)
        gap = np.abs(evaluate(f, g, P, Q, x, T0) - evaluate(f, g, P, Q, x, 2 * T0))
        assert gap.max() <= b.tail_bound, (k, gap.max(), b.tail_bound)


@pytest.mark.parametrize("T0", [100, 1000, 3000])
def test_kernel_consistency(T0):
    J = math.ceil(math.log2(T0)) + 1
    limit = 1 << (J + 1)
    P, Q = figure_pair("phi", limit)
    x = np.linspace(-15, 15, 61)
    a = evaluate(CAUCHY, CAUCHY, P, Q, x, T0)
    b = partial_sum_T(CAUCHY, CAUCHY, P, Q, x, J)
    m = np.arange(T0 + 1, limit + 1)
    remainder = np.array([np.sum((np.abs(CAUCHY(xx - P(m)) * CAUCHY(xx - Q(m)))
                                  + np.abs(CAUCHY(xx - P(-m)) * CAUCHY(xx - Q(-m)))) / m)
                          for xx in x])
    assert np.all(np.abs(a - b) <= remainder + 1e-12)


def test_exact_compact_examples():
    P, Q = figure_pair("phi", 1000)
    e = SignalSpec.indicator(0)
    assert exact_compact_evaluate(e, e, P, Q, 1) == 1
    assert exact_compact_evaluate(e, e, P, Q, -1) == 0
    assert evaluate(e, e, P, Q, 1.0, 1000) == 1


def test_exact_compact_agrees_with_evaluate(rng):
    P, Q = figure_pair("phi", 4096)
    for _ in range(5):
        f = random_compact_unit(rng, 12, int(rng.integers(-8, 8)))
        g = random_compact_unit(rng, 12, int(rng.integers(-8, 8)))
        for x in range(-10, 25, 7):
            exact = exact_compact_evaluate(f, g, P, Q, x)
            assert abs(exact - evaluate(f, g, P, Q, float(x), 4096)) <= 1e-12
            direct = oracles.direct_sum(f, g, lambda s: int(P(s)), lambda s: int(Q(s)), x, 2000)
            assert abs(exact - direct) <= 1e-12


def test_exact_compact_needs_certificate():
    P = arith.make_fn("mu", "even", 200)
    Q = arith.make_fn("d", "signodd", 200)
    e = SignalSpec.indicator(0)
    with pytest.raises(RuntimeError):
        exact_compact_evaluate(e, e, P, Q, 0)
    with pytest.raises(ValueError):
        exact_compact_evaluate(CAUCHY, e, P, Q, 0)
    P, Q = figure_pair("phi", 200)
    with pytest.raises(RuntimeError):
        exact_compact_evaluate(e, e, P, Q, 10, search_bound=8)
