import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scsphase.special import hermite, hermite_scaled_seq, mehler_closed, mehler_series


def exact_hermite(n, x):
    """Integer-coefficient recurrence in exact rationals."""
    h0, h1 = Fraction(1), 2 * x
    if n == 0:
        return h0
    for k in range(1, n):
        h0, h1 = h1, 2 * x * h1 - 2 * k * h0
    return h1


def exact_mehler_partial(x, y, s, n_terms):
    x, y, s = Fraction(x), Fraction(y), Fraction(s)
    total = Fraction(0)
    for n in range(n_terms):
        total += exact_hermite(n, x) * exact_hermite(n, y) * s**n / (2**n * math.factorial(n))
    return total


@pytest.mark.parametrize("n,x,expected", [(0, 3.7, 1.0), (2, 1.0, 2.0), (3, 0.5, -5.0), (1, -2.0, -4.0)])
def test_hermite_examples(n, x, expected):
    assert hermite(n, x) == expected


def test_hermite_matches_exact_rational_recurrence():
    for n in (5, 17, 40):
        for x in (0.3, -1.25, 2.5):
            exact = float(exact_hermite(n, Fraction(x)))
            assert hermite(n, x) == pytest.approx(exact, rel=1e-13)


def test_hermite_overflow_is_signalled():
    with pytest.raises(OverflowError):
        hermite(400, 30.0)


def test_hermite_rejects_bad_input():
    with pytest.raises(ValueError):
        hermite(-1, 0.5)
    with pytest.raises(ValueError):
        hermite(3, math.inf)


@given(st.integers(0, 60), st.floats(-6, 6, allow_nan=False))
def test_hermite_parity(n, x):
    assert hermite(n, -x) == pytest.approx((-1) ** n * hermite(n, x), rel=1e-12, abs=1e-300)


def test_scaled_seq_examples():
    seq = hermite_scaled_seq(2, 1.0, 0.25)
    assert seq[0] == 1.0
    assert seq[1] == pytest.approx(1.0, rel=1e-15)
    # t * H_2(1) / sqrt(2) = 0.25 * 2 / sqrt(2)
    assert seq[2] == pytest.approx(0.5 / math.sqrt(2.0), rel=1e-15)
    np.testing.assert_array_equal(hermite_scaled_seq(5, 2.3, 0.0), [1, 0, 0, 0, 0, 0])


@settings(max_examples=200)
@given(st.floats(-5, 5, allow_nan=False), st.floats(0, 0.99, allow_nan=False))
def test_scaled_seq_matches_direct(x, t):
    seq = hermite_scaled_seq(30, x, t)
    direct = np.array([t ** (n / 2) * hermite(n, x) / math.sqrt(math.factorial(n)) for n in range(31)])
    scale = np.abs(direct).max()
    np.testing.assert_allclose(seq, direct, rtol=1e-12, atol=1e-12 * scale)


def test_scaled_seq_stays_finite_past_factorial_overflow():
    seq = hermite_scaled_seq(600, 2.0, 0.4)
    assert np.all(np.isfinite(seq))


def test_scaled_seq_domain():
    with pytest.raises(ValueError):
        hermite_scaled_seq(3, 0.1, 1.0)
    with pytest.raises(ValueError):
        hermite_scaled_seq(3, 0.1, -0.1)


def test_mehler_closed_examples():
    assert mehler_closed(0.7, -2.0, 0.0) == 1.0
    # partial-sum oracle in exact arithmetic: sum_k C(2k,k) (s^2/4)^k
    oracle = float(exact_mehler_partial(0, 0, Fraction(1, 2), 120))
    assert mehler_closed(0.0, 0.0, 0.5) == pytest.approx(oracle, rel=1e-14)
    assert mehler_closed(0.0, 0.0, 0.5) == pytest.approx(1.1547005383792515, rel=1e-15)
    assert mehler_closed(1.1, -0.4, 0.3) == mehler_closed(-0.4, 1.1, 0.3)


def test_mehler_domain():
    for fn in (lambda: mehler_closed(0, 0, 1.0), lambda: mehler_series(0, 0, -1.2, 5)):
        with pytest.raises(ValueError):
            fn()
    with pytest.raises(ValueError):
        mehler_series(0, 0, 0.2, 0)


def test_mehler_series_examples():
    assert mehler_series(1.0, 1.0, 0.3, 1) == 1.0
    assert mehler_series(0.0, 0.0, 0.5, 200) == pytest.approx(mehler_closed(0.0, 0.0, 0.5), rel=1e-10)
    assert mehler_series(1.2, -0.7, 0.6, 400) == pytest.approx(mehler_closed(1.2, -0.7, 0.6), rel=1e-10)


@pytest.mark.parametrize("x,y,s,n", [
    (Fraction(3, 4), Fraction(-5, 4), Fraction(-3, 5), 30),
    (Fraction(2), Fraction(1, 2), Fraction(9, 10), 60),
    (Fraction(-1, 8), Fraction(7, 4), Fraction(1, 3), 25),
])
def test_mehler_series_partial_sums_match_exact(x, y, s, n):
    exact = exact_mehler_partial(x, y, s, n)
    approx = mehler_series(float(x), float(y), float(s), n)
    envelope = sum(abs(float(exact_hermite(k, x) * exact_hermite(k, y) * s**k / (2**k * math.factorial(k))))
                   for k in range(n))
    assert abs(approx - float(exact)) <= 1e-14 * envelope


@settings(max_examples=300)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-0.9, 0.9))
def test_mehler_series_accurate_relative_to_term_envelope(x, y, s):
    """Double-precision summation error is bounded by the magnitude of the
    summands, whatever cancellation the sum itself suffers."""
    t = abs(s) / 2
    envelope = float(np.abs(hermite_scaled_seq(399, x, t) * hermite_scaled_seq(399, y, t)).sum())
    assert abs(mehler_series(x, y, s) - mehler_closed(x, y, s)) <= 1e-13 * envelope


@settings(max_examples=300)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-0.9, 0.9))
def test_mehler_series_relative_when_sum_is_not_cancelled(x, y, s):
    t = abs(s) / 2
    envelope = float(np.abs(hermite_scaled_seq(399, x, t) * hermite_scaled_seq(399, y, t)).sum())
    closed = mehler_closed(x, y, s)
    if closed < 1e-3 * envelope:
        return
    assert mehler_series(x, y, s) == pytest.approx(closed, rel=1e-10)
