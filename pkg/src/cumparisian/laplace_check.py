"""Double Laplace transforms of the occupation time, closed form and numerical.

The closed forms give, for ``p, q > 0``,

    int_0^inf e^{-pt} E_x[exp(-q int_0^t 1{X_s<0} ds)] dt.

``numeric_dlt`` computes the same quantity by forward quadrature of a family
of finite-horizon occupation laws, so the two routes share nothing beyond the
model parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .brownian_ruin import occ_distribution_bm
from .cl_ruin import cl_curves, distribution_from_curves
from .levy_models import BrownianParams, CramerLundbergParams, ModelParams, lundberg_roots, phi
from .occupation import OccupationDistribution
from .special_fn import adaptive_integrate

TRUNCATION_DECAY = 30.0


class NetProfitError(ValueError):
    """The closed form needs ``E[X_1] > 0``."""


@dataclass(frozen=True)
class TransformPoint:
    p: float
    q: float
    value: float


def _require_net_profit(model: ModelParams) -> None:
    if not model.net_profit:
        raise NetProfitError("closed-form transform requires the net profit condition")


def _check_pq(p: float, q: float) -> None:
    if not (p > 0 and q > 0):
        raise ValueError("p and q must be positive")


def closed_dlt_zero(model: ModelParams, p: float, q: float) -> float:
    """``Phi(p+q) / ((p+q) Phi(p))`` for zero initial capital, either model."""
    _require_net_profit(model)
    _check_pq(p, q)
    return phi(model, p + q) / ((p + q) * phi(model, p))


def closed_dlt_x(model: CramerLundbergParams, x: float, p: float, q: float) -> float:
    """Closed double transform from initial capital ``x >= 0`` (Cramer-Lundberg)."""
    if not isinstance(model, CramerLundbergParams):
        raise TypeError("closed_dlt_x is only available for the Cramer-Lundberg model")
    _require_net_profit(model)
    _check_pq(p, q)
    if x < 0:
        raise ValueError("initial capital must be nonnegative")
    c, alpha = model.c, model.alpha
    rp = lundberg_roots(model, p)
    rpq = lundberg_roots(model, p + q)
    front = (alpha + rp.theta) * rpq.phi / (c * (rpq.phi - rp.theta))
    bracket = 1.0 / (rp.phi * rp.theta) - 1.0 / (rpq.phi * rpq.theta)
    return front * bracket * math.exp(rp.theta * x) - alpha / (c * rp.phi * rp.theta)


def closed_laplace_survival(model: CramerLundbergParams, p: float, x: float = 0.0) -> float:
    """``int_0^inf e^{-pt} P_x(tau_0^- > t) dt``; equals ``1/(c Phi(p))`` at ``x = 0``."""
    if not p > 0:
        raise ValueError("p must be positive")
    r = lundberg_roots(model, p)
    if x == 0:
        return 1.0 / (model.c * r.phi)
    return 1.0 / p - (model.alpha + r.theta) / (model.alpha * p) * math.exp(r.theta * x)


def default_t_max(p: float) -> float:
    return TRUNCATION_DECAY / p


def _outer_breaks(t_max: float) -> list:
    # geometric panels: the transform integrand decays like e^{-pt}
    return [t_max * 0.5**k for k in range(1, 12)]


def numeric_laplace(f: Callable, p: float, t_max: float | None = None,
                    rel_tol: float = 1e-10) -> float:
    """``int_0^{t_max} e^{-pt} f(t) dt`` for a vectorised ``f``, truncated at ``30/p`` by default."""
    t_max = default_t_max(p) if t_max is None else t_max
    if p * t_max < TRUNCATION_DECAY:
        raise ValueError(f"truncation horizon too short: p * t_max = {p * t_max:.3g} < 30")
    return adaptive_integrate(lambda t: np.exp(-p * t) * f(t), 0.0, t_max,
                              rel_tol=rel_tol, points=_outer_breaks(t_max),
                              name="forward Laplace transform")


def numeric_dlt(dist_family: Callable[[float], OccupationDistribution], p: float, q: float,
                t_max: float | None = None, rel_tol: float = 1e-9) -> float:
    """Forward double Laplace transform of a family ``t -> occupation law at horizon t``.

    Outer integral over the horizon ``t`` (geometric panels, adaptive within
    each) of ``e^{-pt} E[exp(-q occupation_t)]``, the inner expectation taken
    by adaptive quadrature of each law's density.
    """
    if not p > 0 or q < 0:
        raise ValueError("need p > 0 and q >= 0")

    def inner(ts):
        return np.array([dist_family(float(t)).laplace(q) if t > 0 else 1.0 for t in ts])

    return numeric_laplace(inner, p, t_max, rel_tol=rel_tol)


def cl_family(model: CramerLundbergParams, x: float, t_max: float):
    """``t -> occupation law from x``, sharing one set of curves on ``[0, t_max]``."""
    curves = cl_curves(model, x, t_max)
    return lambda t: distribution_from_curves(curves, t, tabulate=False)


def bm_family(params: BrownianParams):
    return lambda t: occ_distribution_bm(params, t)


def transform_grid(model: ModelParams, x: float, ps, qs, t_max_factor: float = TRUNCATION_DECAY):
    """Closed and numerical transforms on a ``(p, q)`` grid: list of (closed, numeric) points."""
    out = []
    for p in ps:
        t_max = t_max_factor / p
        if isinstance(model, BrownianParams):
            if x != 0:
                raise ValueError("Brownian closed form is only available from x = 0")
            fam = bm_family(model)
        else:
            fam = cl_family(model, x, t_max)
        for q in qs:
            closed = closed_dlt_zero(model, p, q) if x == 0 else closed_dlt_x(model, x, p, q)
            numeric = numeric_dlt(fam, p, q, t_max)
            out.append((TransformPoint(p, q, closed), TransformPoint(p, q, numeric)))
    return out
