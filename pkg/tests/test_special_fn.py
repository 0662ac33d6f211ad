import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import iv, ive

from cumparisian.special_fn import (QuadratureError, adaptive_integrate, bessel_i, bessel_i_integral,
                                    bessel_i_series, bessel_ie, chebyshev1_rule, chebyshev2_converged,
                                    chebyshev2_rule, integrate, legendre_rule, make_rule,
                                    normal_tail)


def test_semicircle_area():
    assert integrate(lambda u: np.ones_like(u), chebyshev2_rule(8)) == pytest.approx(math.pi / 2, rel=1e-15)


def test_chebyshev1_weight():
    # int (1-u^2)^{-1/2} u^2 du = pi/2
    assert integrate(lambda u: u * u, chebyshev1_rule(4)) == pytest.approx(math.pi / 2, rel=1e-14)


def test_legendre_polynomial_exactness():
    rule = legendre_rule(10)
    assert integrate(lambda x: x**19 + x**18, rule, 0.0, 2.0) == pytest.approx(
        2**20 / 20 + 2**19 / 19, rel=1e-13)


def test_rules_are_read_only():
    rule = make_rule("legendre", 5)
    with pytest.raises(ValueError):
        rule.nodes[0] = 0.0
    with pytest.raises(ValueError):
        make_rule("simpson", 5)


def test_adaptive_basic():
    assert adaptive_integrate(lambda u: u * u, -1.0, 1.0, 1e-10) == pytest.approx(2 / 3, rel=1e-14)
    val, err = adaptive_integrate(np.sqrt, 0.0, 1.0, 1e-10, full_output=True)
    assert abs(val - 2 / 3) <= 1e-10
    assert err <= 1e-10 * val + 1e-14


def test_adaptive_endpoint_singularity():
    assert adaptive_integrate(lambda s: 1 / np.sqrt(s), 0.0, 1.0, 1e-10) == pytest.approx(2.0, rel=1e-9)


def test_adaptive_failure_carries_estimate():
    with pytest.raises(QuadratureError) as info:
        adaptive_integrate(lambda s: np.sin(1 / s) / s, 1e-6, 1.0, 1e-14, max_panels=50, name="wild")
    assert info.value.name == "wild"
    assert math.isfinite(info.value.estimate)


def test_chebyshev_doubling_vector_output():
    out = chebyshev2_converged(lambda u: np.stack([np.ones_like(u), u * u], axis=1))
    assert out == pytest.approx([math.pi / 2, math.pi / 8], rel=1e-14)


S_GRID = np.concatenate([np.geomspace(1e-3, 700.0, 80), [0.0]])


@pytest.mark.parametrize("order", [0, 1, 2])
def test_bessel_against_scipy(order):
    np.testing.assert_allclose(bessel_i(order, S_GRID[S_GRID < 600]), iv(order, S_GRID[S_GRID < 600]),
                               rtol=1e-12, atol=1e-300)
    np.testing.assert_allclose(bessel_ie(order, S_GRID), ive(order, S_GRID), rtol=1e-12, atol=1e-300)


@pytest.mark.parametrize("order", [0, 1, 2])
def test_series_and_integral_agree(order):
    s = np.geomspace(1e-3, 50.0, 60)
    np.testing.assert_allclose(bessel_i_integral(order, s), bessel_i_series(order, s), rtol=1e-12)


def test_bessel_values_at_zero():
    assert bessel_i(0, 0.0) == 1.0
    assert bessel_i(1, 0.0) == 0.0
    assert bessel_i(2, 0.0) == 0.0


def test_bessel_rejects_bad_input():
    with pytest.raises(ValueError):
        bessel_i(3, 1.0)
    with pytest.raises(ValueError):
        bessel_i(0, -1.0)


@given(st.floats(1e-6, 400.0))
def test_recurrence(s):
    i0, i1, i2 = (bessel_ie(n, s) for n in (0, 1, 2))
    assert i1 == pytest.approx(0.5 * s * (i0 - i2), rel=1e-11)


@given(st.floats(1e-4, 300.0))
def test_bessel_ordering(s):
    # I_0 > I_1 > I_2 > 0 for s > 0
    i0, i1, i2 = (bessel_ie(n, s) for n in (0, 1, 2))
    assert i0 > i1 > i2 > 0


def test_normal_tail():
    assert normal_tail(0.0) == 0.5
    assert normal_tail(10.0) == pytest.approx(7.61985302416047e-24, rel=1e-12)
