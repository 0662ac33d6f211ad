"""Law of the occupation time ``int_0^t 1{X_s < 0} ds`` over a finite horizon."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .special_fn import adaptive_integrate

NORMALIZATION_ERROR = 1e-4


class NormalizationError(RuntimeError):
    """Atom plus density mass is too far from one."""


@dataclass(frozen=True)
class OccupationDistribution:
    """Atom at zero plus an absolutely continuous part on ``(0, t)``.

    ``grid``/``density`` hold a tabulation of the density for inspection and
    export; probabilities are computed from ``pdf`` by adaptive quadrature.
    When ``sqrt_endpoints`` is set the density blows up like ``1/sqrt`` at both
    ends of ``(0, t)`` (Brownian case) and integrals are taken in the angle
    variable ``s = t (1 - cos phi) / 2``, which cancels both singularities.
    """

    horizon: float
    atom_at_zero: float
    grid: np.ndarray
    density: np.ndarray
    pdf: Callable = field(repr=False, compare=False)
    sqrt_endpoints: bool = False
    rel_tol: float = 1e-11

    def _integral(self, g: Callable, lo: float, hi: float, name: str) -> float:
        t = self.horizon
        lo, hi = max(lo, 0.0), min(hi, t)
        if hi <= lo:
            return 0.0
        if self.sqrt_endpoints:
            def h(phi):
                s = 0.5 * t * (1.0 - np.cos(phi))
                return g(s) * self.pdf(s) * 0.5 * t * np.sin(phi)
            a = math.acos(1.0 - 2.0 * lo / t)
            b = math.acos(max(-1.0, 1.0 - 2.0 * hi / t))
            return adaptive_integrate(h, a, b, rel_tol=self.rel_tol, name=name)
        return adaptive_integrate(lambda s: g(s) * self.pdf(s), lo, hi,
                                  rel_tol=self.rel_tol, name=name)

    def mass(self) -> float:
        """Atom plus total density mass; one up to quadrature error."""
        return self.atom_at_zero + self._integral(np.ones_like, 0.0, self.horizon, "mass")

    def cdf(self, r: float) -> float:
        """``P(occupation <= r)``."""
        if r < 0:
            return 0.0
        if r >= self.horizon:
            return 1.0
        return self.atom_at_zero + self._integral(np.ones_like, 0.0, r, "cdf")

    def tail(self, r: float) -> float:
        """``P(occupation > r)``, integrated directly over ``(r, t)``."""
        if r >= self.horizon:
            return 0.0
        if r < 0:
            return 1.0
        return self._integral(np.ones_like, r, self.horizon, "tail")

    def expect(self, g: Callable) -> float:
        """``E[g(occupation)]`` for a vectorised ``g``."""
        return self.atom_at_zero * float(g(np.zeros(1))[0]) + self._integral(
            g, 0.0, self.horizon, "expectation")

    def laplace(self, q: float) -> float:
        """``E[exp(-q occupation)]``."""
        return self.expect(lambda s: np.exp(-q * s))

    def mean(self) -> float:
        return self._integral(lambda s: s, 0.0, self.horizon, "mean")

    def check_normalization(self, tol: float = NORMALIZATION_ERROR) -> float:
        m = self.mass()
        if abs(m - 1.0) > tol:
            raise NormalizationError(
                f"occupation law at t={self.horizon} has total mass {m!r} (tolerance {tol})")
        return m
