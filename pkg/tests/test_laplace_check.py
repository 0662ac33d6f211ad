import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cumparisian.cl_ruin import survival_x, survival_zero
from cumparisian.laplace_check import (NetProfitError, bm_family, cl_family, closed_dlt_x,
                                       closed_dlt_zero, closed_laplace_survival, numeric_dlt,
                                       numeric_laplace, transform_grid)
from cumparisian.levy_models import BrownianParams, CramerLundbergParams, phi

# Frozen closed forms at lam=1, alpha=1, c=2 (p, q) = (0.7, 1.3); the forward
# numerical transforms agree to ~1e-13.
CLOSED_X0 = 1.22834329043145
CLOSED_X1 = 1.32625048437958


def test_frozen_closed_forms(cl_ref):
    assert closed_dlt_zero(cl_ref, 0.7, 1.3) == pytest.approx(CLOSED_X0, abs=1e-12)
    assert closed_dlt_x(cl_ref, 1.0, 0.7, 1.3) == pytest.approx(CLOSED_X1, abs=1e-12)


def test_closed_form_continuous_at_zero_capital(cl_ref):
    assert closed_dlt_x(cl_ref, 0.0, 0.7, 1.3) == pytest.approx(closed_dlt_zero(cl_ref, 0.7, 1.3), rel=1e-12)


@given(st.floats(0.05, 5.0), st.floats(0.05, 5.0))
def test_q_to_zero_gives_one_over_p(p, q):
    m = CramerLundbergParams(2.0, 1.0, 1.0)
    # no occupation penalty: int e^{-pt} dt = 1/p
    assert closed_dlt_zero(m, p, 1e-12) == pytest.approx(1 / p, rel=1e-6)
    # transform is decreasing in q and bounded by 1/p
    assert closed_dlt_x(m, 0.5, p, q) <= 1 / p


def test_net_profit_required():
    with pytest.raises(NetProfitError):
        closed_dlt_zero(CramerLundbergParams(1.0, 2.0, 1.0), 1.0, 1.0)
    with pytest.raises(TypeError):
        closed_dlt_x(BrownianParams(1.0, 1.0), 1.0, 1.0, 1.0)


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0])
def test_laplace_of_survival(cl_ref, p):
    num = numeric_laplace(lambda t: survival_zero(cl_ref, t), p)
    assert num == pytest.approx(1 / (cl_ref.c * phi(cl_ref, p)), abs=1e-9)


def test_laplace_of_survival_from_x(cl_ref):
    p, x = 0.8, 1.5
    num = numeric_laplace(lambda t: survival_x(cl_ref, x, t), p)
    assert num == pytest.approx(closed_laplace_survival(cl_ref, p, x), abs=1e-9)


def test_truncation_guard(cl_ref):
    with pytest.raises(ValueError):
        numeric_laplace(lambda t: t, 1.0, t_max=5.0)


@pytest.mark.parametrize("x", [0.0, 1.0])
def test_numeric_matches_closed_cl(cl_ref, x):
    fam = cl_family(cl_ref, x, 30 / 0.7)
    closed = closed_dlt_zero(cl_ref, 0.7, 1.3) if x == 0 else closed_dlt_x(cl_ref, x, 0.7, 1.3)
    assert numeric_dlt(fam, 0.7, 1.3, 30 / 0.7) == pytest.approx(closed, abs=1e-9)


def test_numeric_matches_closed_bm(bm_ref):
    assert numeric_dlt(bm_family(bm_ref), 1.0, 1.0) == pytest.approx(closed_dlt_zero(bm_ref, 1.0, 1.0), abs=1e-9)


def test_transform_grid_shape(bm_ref):
    pts = transform_grid(bm_ref, 0.0, [1.0], [0.5, 2.0])
    assert len(pts) == 2
    for closed, numeric in pts:
        assert abs(closed.value - numeric.value) < 1e-8
    with pytest.raises(ValueError):
        transform_grid(bm_ref, 1.0, [1.0], [1.0])
