"""Occupation time and cumulative Parisian ruin for ``X_t = x + c t + sigma B_t``."""

from __future__ import annotations

import math

import numpy as np

from .levy_models import BrownianParams
from .occupation import OccupationDistribution
from .special_fn import adaptive_integrate, legendre_rule, normal_tail

GRID_POINTS = 2048
_TAIL_NODES = 64
# below this x/sigma the first passage is instantaneous to double precision:
# results move by O(x) and the time scale x^2/sigma^2 is not representable
_TINY_CAPITAL = 1e-100


def _check(params) -> None:
    if not isinstance(params, BrownianParams):
        raise TypeError("expected BrownianParams")


def _density(c: float, sigma: float, t, s):
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    k = c * c / (2.0 * sigma * sigma)
    u = t - s
    first = sigma * np.exp(-k * s) / np.sqrt(2.0 * np.pi * s) - c * normal_tail(c * np.sqrt(s) / sigma)
    second = c + sigma * np.exp(-k * u) / np.sqrt(2.0 * np.pi * u) - c * normal_tail(c * np.sqrt(u) / sigma)
    return 2.0 / sigma**2 * first * second


def occ_density_bm(params: BrownianParams, t: float, s):
    """Density at ``s`` of the time spent below zero on ``[0, t]``, started from zero.

    Drifted generalisation of the arcsine law; vectorised in ``s``.
    """
    _check(params)
    s_arr = np.asarray(s, dtype=float)
    if not t > 0 or np.any(s_arr <= 0) or np.any(s_arr >= t):
        raise ValueError("occupation density needs 0 < s < t")
    out = _density(params.c, params.sigma, t, s_arr)
    return float(out) if out.ndim == 0 else out


def occ_distribution_bm(params: BrownianParams, t: float) -> OccupationDistribution:
    """Occupation law for ``X_0 = 0``: no atom, ``1/sqrt`` singularities at both ends."""
    _check(params)
    if not t > 0:
        raise ValueError("horizon must be positive")
    phi = (np.arange(GRID_POINTS) + 0.5) * np.pi / GRID_POINTS
    grid = 0.5 * t * (1.0 - np.cos(phi))
    c, sigma = params.c, params.sigma
    return OccupationDistribution(
        horizon=t, atom_at_zero=0.0, grid=grid, density=_density(c, sigma, t, grid),
        pdf=lambda s: _density(c, sigma, t, s), sqrt_endpoints=True)


def occupation_tail_bm(params: BrownianParams, r: float, horizons) -> np.ndarray:
    """``P(int_0^tau 1{X<0} > r)`` from zero, for an array of horizons ``tau``.

    Fixed 64-point Gauss-Legendre in the angle variable, where the integrand
    is analytic; used inside the first-passage convolution.
    """
    tau = np.atleast_1d(np.asarray(horizons, dtype=float))
    out = np.zeros_like(tau)
    live = tau > r
    if not live.any():
        return out
    tl = tau[live]
    a = np.arccos(np.clip(1.0 - 2.0 * max(r, 0.0) / tl, -1.0, 1.0))
    rule = legendre_rule(_TAIL_NODES)
    half = 0.5 * (np.pi - a)
    phi = a[:, None] + half[:, None] * (rule.nodes[None, :] + 1.0)
    s = 0.5 * tl[:, None] * (1.0 - np.cos(phi))
    vals = _density(params.c, params.sigma, tl[:, None], s) * 0.5 * tl[:, None] * np.sin(phi)
    out[live] = half * (vals @ rule.weights)
    return out


def ruin_time_density_bm(params: BrownianParams, x: float, u):
    """First-passage density of level zero from ``x > 0`` (inverse Gaussian)."""
    _check(params)
    if not x > 0:
        raise ValueError("initial capital must be positive")
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr <= 0):
        raise ValueError("time must be positive")
    out = _fpt_density(params.c, params.sigma**2, x, u_arr)
    return float(out) if out.ndim == 0 else out


def _fpt_density(c: float, s2: float, x: float, u) -> np.ndarray:
    # log form: finite (zero) as u -> 0+
    u = np.asarray(u, dtype=float)
    pos = u > 0
    uu = np.where(pos, u, 1.0)
    logf = (math.log(x) - 0.5 * math.log(2.0 * np.pi * s2) - 1.5 * np.log(uu)
            - (x + c * uu) ** 2 / (2.0 * s2 * uu))
    return np.where(pos, np.exp(logf), 0.0)


def _fpt_breaks(x: float, s2: float, upper: float) -> list:
    # the first-passage law sits near u ~ x^2 / sigma^2 with a u^{-3/2} tail:
    # half-decade panels from there up keep the adaptive rule honest
    log_scale = 2.0 * math.log10(x) - math.log10(s2)
    n = 2 * max(1, int(4.0 - log_scale)) + 1
    return [p for p in np.logspace(log_scale - 2.0, 2.0, n) if 0.0 < p < upper]


def ruin_prob_bm(params: BrownianParams, x: float, t: float, rel_tol: float = 1e-12) -> float:
    """``P_x(tau_0^- <= t)`` by integrating the first-passage density; ``t`` may be ``inf``."""
    _check(params)
    if x < 0:
        raise ValueError("initial capital must be nonnegative")
    if x < _TINY_CAPITAL * params.sigma:
        return 1.0 if t > 0 else 0.0
    if t <= 0:
        return 0.0
    if math.isinf(t):
        # u = v / (1 - v) maps [0, 1) onto [0, inf)
        def g(v):
            v = np.minimum(v, 1 - 1e-16)
            return _fpt_density(params.c, params.sigma**2, x, v / (1.0 - v)) / (1.0 - v) ** 2
        return adaptive_integrate(g, 0.0, 1.0, rel_tol=rel_tol, name="first-passage mass")
    pts = _fpt_breaks(x, params.sigma**2, t)
    return adaptive_integrate(lambda u: _fpt_density(params.c, params.sigma**2, x, u),
                              0.0, t, rel_tol=rel_tol, points=pts, name="first-passage CDF")


def cum_parisian_prob_bm(params: BrownianParams, x: float, r: float, t: float,
                         rel_tol: float = 1e-10) -> float:
    """``P_x(sigma_r <= t)``: total time below zero on ``[0, t]`` exceeds ``r``.

    From ``x = 0`` this is the tail of the occupation law; from ``x > 0`` the
    first passage to zero is convolved with that tail over the remaining time.
    """
    _check(params)
    if x < 0 or not r > 0 or not t > 0:
        raise ValueError("need x >= 0, r > 0, t > 0")
    if r >= t:
        return 0.0
    if x < _TINY_CAPITAL * params.sigma:
        return float(occupation_tail_bm(params, r, [t])[0])
    span = t - r
    c, s2 = params.c, params.sigma**2

    def near(u):
        return occupation_tail_bm(params, r, t - u) * _fpt_density(c, s2, x, u)

    # u = span (1 - v^2) on the upper half: the tail vanishes like sqrt(span - u)
    def far(v):
        u = span * (1.0 - v * v)
        return near(u) * 2.0 * span * v

    pts = _fpt_breaks(x, s2, 0.5 * span)
    head = adaptive_integrate(near, 0.0, 0.5 * span, rel_tol=rel_tol, points=pts,
                              name="Brownian cumulative Parisian (head)")
    tail = adaptive_integrate(far, 0.0, math.sqrt(0.5), rel_tol=rel_tol,
                              name="Brownian cumulative Parisian (tail)")
    return head + tail
