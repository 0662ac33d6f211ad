"""Surplus models, their Laplace exponents and the roots of Lundberg's equation.

Two spectrally negative models are supported:

* ``CramerLundbergParams``: ``X_t = x + c t - sum_{i <= N_t} C_i`` with ``N`` a
  Poisson process of rate ``lam`` and ``C_i ~ Exp(alpha)``.
* ``BrownianParams``: ``X_t = x + c t + sigma B_t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np


@dataclass(frozen=True)
class CramerLundbergParams:
    """Compound Poisson surplus with drift and exponential claims.

    Attributes
    ----------
    c : float
        Premium rate.
    lam : float
        Poisson claim intensity.
    alpha : float
        Rate of the exponential claim sizes (mean claim ``1/alpha``).
    """

    c: float
    lam: float
    alpha: float
    net_profit: bool = field(init=False)

    def __post_init__(self):
        for name in ("c", "lam", "alpha"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        object.__setattr__(self, "net_profit", self.c * self.alpha > self.lam)

    @property
    def mean_drift(self) -> float:
        """E[X_1] - x, i.e. ``c - lam/alpha``."""
        return self.c - self.lam / self.alpha

    @property
    def loading(self) -> float:
        """Ratio ``lam / (c alpha)``; below one iff the net profit condition holds."""
        return self.lam / (self.c * self.alpha)


@dataclass(frozen=True)
class BrownianParams:
    """Brownian surplus with drift ``c`` and volatility ``sigma``."""

    c: float
    sigma: float
    net_profit: bool = field(init=False, default=True)

    def __post_init__(self):
        for name in ("c", "sigma"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")

    @property
    def mean_drift(self) -> float:
        return self.c


ModelParams = Union[CramerLundbergParams, BrownianParams]


@dataclass(frozen=True)
class LundbergRoots:
    """Roots of ``psi(theta) = p`` for the Cramer-Lundberg model.

    ``phi`` is the largest root, ``theta`` the smallest (lies in ``(-alpha, 0]``)
    and ``delta`` the discriminant ``(p + lam - c alpha)^2 + 4 c alpha p``.
    """

    p: float
    phi: float
    theta: float
    delta: float


def psi(model: ModelParams, theta_arg):
    """Laplace exponent ``log E[exp(theta X_1)]`` (with ``X_0 = 0``).

    Accepts scalars or arrays. For the Cramer-Lundberg model the exponent has a
    pole at ``-alpha`` and ``theta_arg`` must lie strictly to its right.
    """
    th = np.asarray(theta_arg, dtype=float)
    if isinstance(model, BrownianParams):
        out = model.c * th + 0.5 * model.sigma**2 * th**2
    elif isinstance(model, CramerLundbergParams):
        if np.any(th <= -model.alpha):
            raise ValueError(
                f"psi is only defined for theta > -alpha = {-model.alpha}, got {theta_arg!r}"
            )
        out = model.c * th - model.lam * th / (model.alpha + th)
    else:
        raise TypeError(f"unsupported model type {type(model).__name__}")
    return float(out) if out.ndim == 0 else out


def lundberg_roots(model: CramerLundbergParams, p: float) -> LundbergRoots:
    """Both real roots of ``psi(theta) = p`` for ``p >= 0``.

    The discriminant is evaluated in its sum-of-squares form and the root that
    would suffer cancellation is recovered from ``c phi theta = -alpha p``.
    """
    if not isinstance(model, CramerLundbergParams):
        raise TypeError("lundberg_roots needs CramerLundbergParams")
    if not p >= 0:
        raise ValueError(f"p must be nonnegative, got {p!r}")
    c, lam, alpha = model.c, model.lam, model.alpha
    b = p + lam - c * alpha
    delta = b * b + 4.0 * c * alpha * p
    sq = math.sqrt(delta)
    if b >= 0:
        phi = (b + sq) / (2.0 * c)
        theta = -alpha * p / (c * phi) if phi > 0 else 0.0
    else:
        theta = (b - sq) / (2.0 * c)
        phi = -alpha * p / (c * theta)
    return LundbergRoots(p=p, phi=phi, theta=theta, delta=delta)


def phi_bm(model: BrownianParams, q: float) -> float:
    """Right inverse of the Brownian exponent: ``(sqrt(c^2 + 2 sigma^2 q) - c) / sigma^2``."""
    if not q >= 0:
        raise ValueError(f"q must be nonnegative, got {q!r}")
    c, s2 = model.c, model.sigma**2
    # conjugate form: no cancellation for small q
    return 2.0 * q / (math.sqrt(c * c + 2.0 * s2 * q) + c)


def phi(model: ModelParams, q: float) -> float:
    """Largest root ``Phi(q)`` of Lundberg's equation for either model."""
    if isinstance(model, BrownianParams):
        return phi_bm(model, q)
    return lundberg_roots(model, q).phi
