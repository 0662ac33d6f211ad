"""Occupation time below zero and ruin probabilities for the Cramer-Lundberg
model with exponential claims.

Notation used throughout: ``b = lam + c alpha`` and ``k = 2 sqrt(c alpha lam)``.
The survival probability from zero, ``a_t = P(tau_0^- > t)``, is evaluated as

    a_t = 1 - (2 lam / pi) int_{-1}^{1} sqrt(1-u^2) (1 - exp(-t y)) / y du,  y = b + k u,

which is the usual Chebyshev representation with its ``t = 0`` value folded in.
The integrand is entire in ``u`` even when ``lam = c alpha`` puts a pole of
``1/y`` on the endpoint ``u = -1``.

From ``x > 0`` the survival curve, the correction ``k^x_t`` and the ruin-time
density are integrals in time of

    e^{-bs} [I_0(z) - s/(s + x/c) I_2(z)]   and   e^{-bs} [I_0(z) - I_2(z)],
    z = k sqrt(s (s + x/c)),

both analytic in ``s``, so they are tabulated once on a uniform grid and
completed exactly between grid points.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .levy_models import CramerLundbergParams
from .occupation import OccupationDistribution
from .special_fn import bessel_ie, chebyshev2_converged, legendre_rule

GRID_POINTS = 2048
_PANEL_NODES = 8
_cache_lock = threading.Lock()


def _check(model) -> None:
    if not isinstance(model, CramerLundbergParams):
        raise TypeError("expected CramerLundbergParams")


def _bk(model: CramerLundbergParams) -> tuple[float, float]:
    return model.lam + model.c * model.alpha, 2.0 * math.sqrt(model.c * model.alpha * model.lam)


# ------------------------------------------------------------------ x = 0

def survival_zero(model: CramerLundbergParams, t):
    """``a_t = P(tau_0^- > t)`` from zero initial capital; scalar or array ``t``."""
    _check(model)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("time must be nonnegative")
    tt = np.atleast_1d(t_arr).ravel()
    b, k = _bk(model)

    def g(u):
        y = b + k * u
        return -np.expm1(-np.outer(y, tt)) / y[:, None]

    integral = chebyshev2_converged(g, rel_tol=1e-14, name="survival from zero")
    out = np.clip(1.0 - 2.0 * model.lam / np.pi * integral, 0.0, 1.0).reshape(t_arr.shape)
    return float(out) if out.ndim == 0 else out


def occ_density_zero(model: CramerLundbergParams, t: float, s):
    """Density ``a_{t-s} (lam - c alpha (1 - a_s))`` of the occupation time from zero."""
    _check(model)
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr <= 0) or np.any(s_arr >= t):
        raise ValueError("occupation density needs 0 < s < t")
    ca = model.c * model.alpha
    out = survival_zero(model, t - s_arr) * (model.lam - ca * (1.0 - survival_zero(model, s_arr)))
    return float(out) if np.ndim(out) == 0 else out


def occ_distribution_zero(model: CramerLundbergParams, t: float) -> OccupationDistribution:
    """Occupation law from zero, built on ``survival_zero`` alone."""
    _check(model)
    if not t > 0:
        raise ValueError("horizon must be positive")
    grid = np.linspace(0.0, t, GRID_POINTS + 1)[1:-1]
    pdf = lambda s: occ_density_zero(model, t, np.clip(s, 1e-300, t * (1 - 1e-16)))
    return OccupationDistribution(horizon=t, atom_at_zero=survival_zero(model, t),
                                  grid=grid, density=pdf(grid), pdf=pdf)


# ------------------------------------------------------------------ x >= 0

def _bessel_terms(model: CramerLundbergParams, x: float, s: np.ndarray):
    """``e^{-bs} I_0(z)`` and ``e^{-bs} I_2(z)``, overflow-free."""
    b, k = _bk(model)
    z = k * np.sqrt(s * (s + x / model.c))
    scale = np.exp(z - b * s)
    return scale * bessel_ie(0, z), scale * bessel_ie(2, z)


def ruin_time_density_cl(model: CramerLundbergParams, x: float, s):
    """Density of the classical ruin time ``tau_0^-`` from ``x >= 0``.

    Defective when the net profit condition holds: it integrates to the
    ultimate ruin probability ``lam/(c alpha) exp(-(alpha - lam/c) x)``.
    """
    _check(model)
    s = np.asarray(s, dtype=float)
    if x < 0 or np.any(s < 0):
        raise ValueError("need x >= 0 and s >= 0")
    i0, i2 = _bessel_terms(model, x, s)
    ratio = s / (s + x / model.c) if x > 0 else np.ones_like(s)
    out = model.lam * math.exp(-model.alpha * x) * (i0 - ratio * i2)
    return float(out) if out.ndim == 0 else out


def _k_density(model: CramerLundbergParams, x: float, s):
    """Time derivative of ``k^x_t``: ``x alpha lam e^{-alpha x} e^{-bs}[I_0 - I_2]``."""
    s = np.asarray(s, dtype=float)
    if x == 0:
        return np.zeros_like(s)
    i0, i2 = _bessel_terms(model, x, s)
    return x * model.alpha * model.lam * math.exp(-model.alpha * x) * (i0 - i2)


@dataclass(frozen=True)
class _Curve:
    """``f(t) = f(0) + int_0^t f'(s) ds`` tabulated on a uniform grid.

    Values between grid points are completed with an 8-point Gauss-Legendre
    rule from the nearest knot below, so evaluation is exact to rounding.
    """

    model: CramerLundbergParams
    x: float
    grid: np.ndarray
    values: np.ndarray
    _rate: object = field(repr=False, compare=False, default=None)

    @property
    def horizon(self) -> float:
        return float(self.grid[-1])

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        tt = np.atleast_1d(t_arr).ravel()
        if np.any(tt < 0) or np.any(tt > self.horizon * (1 + 1e-12)):
            raise ValueError(f"curve covers [0, {self.horizon}] only")
        h = self.grid[1] - self.grid[0]
        idx = np.clip(np.floor(tt / h).astype(int), 0, self.grid.size - 1)
        lo = self.grid[idx]
        rule = legendre_rule(_PANEL_NODES)
        half = 0.5 * (tt - lo)
        nodes = lo[:, None] + half[:, None] * (rule.nodes[None, :] + 1.0)
        rate = self._rate(nodes.ravel()).reshape(nodes.shape)
        out = (self.values[idx] + half * (rate @ rule.weights)).reshape(t_arr.shape)
        return float(out) if out.ndim == 0 else out


class SurvivalCurve(_Curve):
    """``t -> a^x_t = P_x(tau_0^- > t)`` on ``[0, horizon]``."""


class KCorrection(_Curve):
    """``t -> k^x_t``; identically zero from ``x = 0``."""


def _tabulate(cls, model, x, horizon, value0, rate, n=GRID_POINTS):
    grid = np.linspace(0.0, horizon, n + 1)
    rule = legendre_rule(_PANEL_NODES)
    h = grid[1] - grid[0]
    nodes = grid[:-1, None] + 0.5 * h * (rule.nodes[None, :] + 1.0)
    panel = 0.5 * h * (rate(nodes.ravel()).reshape(nodes.shape) @ rule.weights)
    values = value0 + np.concatenate([[0.0], np.cumsum(panel)])
    values.setflags(write=False)
    grid.setflags(write=False)
    return cls(model, x, grid, values, rate)


@lru_cache(maxsize=256)
def _cached_curves(model, x, horizon):
    a0 = _tabulate(SurvivalCurve, model, 0.0, horizon, 1.0,
                   lambda s: -ruin_time_density_cl(model, 0.0, s))
    if x == 0:
        return a0, a0, _tabulate(KCorrection, model, 0.0, horizon, 0.0, lambda s: np.zeros_like(s))
    ax = _tabulate(SurvivalCurve, model, x, horizon, 1.0,
                   lambda s: -ruin_time_density_cl(model, x, s))
    kx = _tabulate(KCorrection, model, x, horizon, math.expm1(-model.alpha * x),
                   lambda s: _k_density(model, x, s))
    return a0, ax, kx


def cl_curves(model: CramerLundbergParams, x: float, horizon: float):
    """Survival curves from zero and from ``x`` and the correction ``k^x``, memoised."""
    _check(model)
    if x < 0 or not horizon > 0:
        raise ValueError("need x >= 0 and a positive horizon")
    key = (model, float(x), float(horizon))
    with _cache_lock:
        return _cached_curves(*key)


def survival_x(model: CramerLundbergParams, x: float, t):
    """``a^x_t = P_x(tau_0^- > t)``; scalar or array ``t``."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("time must be nonnegative")
    tmax = float(np.max(t_arr)) if t_arr.size else 0.0
    if tmax == 0:
        return 1.0 if t_arr.ndim == 0 else np.ones_like(t_arr)
    return cl_curves(model, x, tmax)[1](t_arr)


def k_correction(model: CramerLundbergParams, x: float, t):
    """``k^x_t = e^{-alpha x} - 1 + x alpha lam e^{-alpha x} int_0^t e^{-bs}[I_0(z) - I_2(z)] ds``."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("time must be nonnegative")
    _check(model)
    if x < 0:
        raise ValueError("initial capital must be nonnegative")
    tmax = float(np.max(t_arr)) if t_arr.size else 0.0
    if tmax == 0:
        v = math.expm1(-model.alpha * x)
        return v if t_arr.ndim == 0 else np.full_like(t_arr, v)
    return cl_curves(model, x, tmax)[2](t_arr)


def distribution_from_curves(curves, t: float, tabulate: bool = True) -> OccupationDistribution:
    """Occupation law at horizon ``t`` from precomputed curves covering ``[0, t]``."""
    a0, ax, kx = curves
    model = ax.model
    ca = model.c * model.alpha

    def pdf(s):
        s = np.asarray(s, dtype=float)
        rest = np.clip(t - s, 0.0, t)
        return (ax(rest) + kx(rest)) * (model.lam - ca + ca * a0(np.clip(s, 0.0, t)))

    grid = np.linspace(0.0, t, 513)[1:-1] if tabulate else np.empty(0)
    return OccupationDistribution(horizon=t, atom_at_zero=float(ax(t)), grid=grid,
                                  density=pdf(grid), pdf=pdf)


def occ_distribution_x(model: CramerLundbergParams, x: float, t: float,
                       check: bool = True) -> OccupationDistribution:
    """Occupation law on ``[0, t]`` from ``x``: atom ``a^x_t`` plus density
    ``(a^x_{t-s} + k^x_{t-s}) (lam - c alpha (1 - a^0_s))``.

    Raises
    ------
    NormalizationError
        If atom plus density mass misses one by more than ``1e-4``.
    """
    if not t > 0:
        raise ValueError("horizon must be positive")
    dist = distribution_from_curves(cl_curves(model, x, t), t)
    if check:
        dist.check_normalization()
    return dist


def classical_ruin_prob_cl(model: CramerLundbergParams, x: float, t: float) -> float:
    """``P_x(tau_0^- <= t) = 1 - a^x_t``."""
    return 1.0 - survival_x(model, x, t)


def cum_parisian_prob_cl(model: CramerLundbergParams, x: float, r: float, t: float) -> float:
    """``P_x(sigma_r <= t)``: the time spent below zero on ``[0, t]`` exceeds ``r``.

    Computed as the density mass on ``(r, t)``, so it is exactly zero for ``r >= t``.
    """
    if x < 0 or not r > 0 or not t > 0:
        raise ValueError("need x >= 0, r > 0, t > 0")
    if r >= t:
        return 0.0
    return occ_distribution_x(model, x, t, check=False).tail(r)


def exp_parisian_prob_cl(model: CramerLundbergParams, x: float, q: float, t: float) -> float:
    """``P_x(kappa_q <= t) = 1 - E_x[exp(-q * occupation)]`` (exponential delays of rate ``q``)."""
    if x < 0 or not q > 0 or not t > 0:
        raise ValueError("need x >= 0, q > 0, t > 0")
    dist = occ_distribution_x(model, x, t, check=False)
    return dist.expect(lambda s: -np.expm1(-q * s))
