import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cumparisian.levy_models import (BrownianParams, CramerLundbergParams, lundberg_roots, phi,
                                     phi_bm, psi)

pos = st.floats(0.05, 20.0)


def test_rejects_nonpositive():
    with pytest.raises(ValueError):
        CramerLundbergParams(c=0.0, lam=1.0, alpha=1.0)
    with pytest.raises(ValueError):
        CramerLundbergParams(c=1.0, lam=float("nan"), alpha=1.0)
    with pytest.raises(ValueError):
        BrownianParams(c=1.0, sigma=-1.0)


def test_net_profit_flag():
    assert CramerLundbergParams(2.0, 1.0, 1.0).net_profit
    assert not CramerLundbergParams(1.0, 2.0, 1.0).net_profit
    assert not CramerLundbergParams(1.0, 1.0, 1.0).net_profit


def test_psi_known_values():
    m = CramerLundbergParams(2.0, 1.0, 1.0)
    # c theta - lam theta / (alpha + theta) at theta = 1
    assert psi(m, 1.0) == pytest.approx(1.5, rel=1e-15)
    assert psi(BrownianParams(1.0, 2.0), 1.0) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        psi(m, -1.0)


def test_reference_roots():
    r = lundberg_roots(CramerLundbergParams(2.0, 1.0, 1.0), 1.0)
    assert r.phi == pytest.approx(math.sqrt(0.5), rel=1e-14)
    assert r.theta == pytest.approx(-math.sqrt(0.5), rel=1e-14)


@given(c=pos, lam=pos, alpha=pos, p=st.floats(1e-6, 50.0))
def test_roots_solve_lundberg(c, lam, alpha, p):
    m = CramerLundbergParams(c, lam, alpha)
    r = lundberg_roots(m, p)
    assert r.phi > 0 > r.theta > -alpha
    for root in (r.phi, r.theta):
        scale = c * abs(root) + lam + p
        assert abs(psi(m, root) - p) <= 1e-10 * scale
    assert c * r.phi * r.theta == pytest.approx(-alpha * p, rel=1e-10)


@given(c=pos, sigma=pos, q=st.floats(1e-8, 100.0))
def test_brownian_phi_solves_quadratic(c, sigma, q):
    b = BrownianParams(c, sigma)
    root = phi_bm(b, q)
    assert root > 0
    assert psi(b, root) == pytest.approx(q, rel=1e-10)
    assert phi(b, q) == root


@given(c=pos, lam=pos, alpha=pos, p=st.floats(0.01, 10.0))
def test_phi_increasing(c, lam, alpha, p):
    m = CramerLundbergParams(c, lam, alpha)
    assert phi(m, p) < phi(m, 1.5 * p)
