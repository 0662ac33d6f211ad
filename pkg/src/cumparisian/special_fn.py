"""Quadrature rules, modified Bessel functions I_0, I_1, I_2 and the normal tail.

Bessel values come from their power series at small argument and from the
weighted integral representations

    I_0(s) = 1/pi      int_{-1}^{1} exp(-s u) (1-u^2)^{-1/2} du
    I_1(s) = s/pi      int_{-1}^{1} exp(-s u) (1-u^2)^{1/2}  du
    I_2(s) = s^2/(3pi) int_{-1}^{1} exp(-s u) (1-u^2)^{3/2}  du

at larger argument, each evaluated with the Gauss-Chebyshev rule whose weight
matches the integrand.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import erfc

SERIES_CUTOFF = 15.0
ABS_FLOOR = 1e-14


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance.

    The best available estimate and its error bound are kept on the exception.
    """

    def __init__(self, message: str, estimate: float, error: float, name: str = "integral"):
        super().__init__(f"{name}: {message} (estimate={estimate!r}, error={error:.3g})")
        self.estimate = estimate
        self.error = error
        self.name = name


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights on the canonical interval ``[-1, 1]``.

    ``chebyshev1`` and ``chebyshev2`` absorb the weights ``(1-u^2)^{-1/2}`` and
    ``(1-u^2)^{1/2}`` respectively; ``legendre`` has unit weight.
    """

    kind: str
    n_nodes: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f: Callable, a: float = -1.0, b: float = 1.0) -> float:
        return integrate(f, self, a, b)


@lru_cache(maxsize=64)
def chebyshev1_rule(n: int) -> QuadratureRule:
    j = np.arange(1, n + 1)
    nodes = np.cos((2 * j - 1) * np.pi / (2 * n))
    weights = np.full(n, np.pi / n)
    return _freeze(QuadratureRule("chebyshev1", n, nodes, weights))


@lru_cache(maxsize=64)
def chebyshev2_rule(n: int) -> QuadratureRule:
    j = np.arange(1, n + 1)
    ang = j * np.pi / (n + 1)
    nodes = np.cos(ang)
    weights = np.pi / (n + 1) * np.sin(ang) ** 2
    return _freeze(QuadratureRule("chebyshev2", n, nodes, weights))


@lru_cache(maxsize=64)
def legendre_rule(n: int) -> QuadratureRule:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return _freeze(QuadratureRule("legendre", n, nodes, weights))


def _freeze(rule: QuadratureRule) -> QuadratureRule:
    rule.nodes.setflags(write=False)
    rule.weights.setflags(write=False)
    return rule


def make_rule(kind: str, n: int) -> QuadratureRule:
    if n < 1:
        raise ValueError("a quadrature rule needs at least one node")
    try:
        factory = {"chebyshev1": chebyshev1_rule, "chebyshev2": chebyshev2_rule,
                   "legendre": legendre_rule}[kind]
    except KeyError:
        raise ValueError(f"unknown rule kind {kind!r}") from None
    return factory(int(n))


def integrate(f: Callable, rule: QuadratureRule, a: float = -1.0, b: float = 1.0) -> float:
    """Apply ``rule`` to a vectorised ``f``.

    Chebyshev rules integrate ``f`` against their weight on ``[-1, 1]``; the
    Legendre rule is mapped affinely onto ``[a, b]``.
    """
    if rule.kind == "legendre":
        half = 0.5 * (b - a)
        x = a + half * (rule.nodes + 1.0)
        return float(half * np.dot(rule.weights, f(x)))
    if (a, b) != (-1.0, 1.0):
        raise ValueError("Chebyshev rules are only defined on [-1, 1]")
    return float(np.dot(rule.weights, f(rule.nodes)))


def chebyshev2_converged(g: Callable, rel_tol: float = 1e-13, n0: int = 64,
                         n_max: int = 1 << 15, name: str = "chebyshev2 integral"):
    """``int_{-1}^{1} sqrt(1-u^2) g(u) du`` with node doubling until two rules agree.

    ``g`` may return an array of shape ``(n_nodes, m)`` to integrate ``m``
    integrands at once; convergence is then required for every column.
    """
    n = n0
    prev = None
    while True:
        rule = chebyshev2_rule(n)
        vals = g(rule.nodes)
        cur = np.tensordot(rule.weights, vals, axes=(0, 0))
        if prev is not None:
            err = np.max(np.abs(cur - prev))
            if err <= rel_tol * max(np.max(np.abs(cur)), 1.0) or err <= ABS_FLOOR:
                return cur
        if 2 * n > n_max:
            best = cur if np.ndim(cur) == 0 else float(np.max(np.abs(cur)))
            raise QuadratureError("node doubling did not converge", float(best),
                                  float(np.max(np.abs(cur - prev))), name)
        prev = cur
        n *= 2


# ---------------------------------------------------------------- Bessel I_nu

def _check_order(order: int) -> None:
    if order not in (0, 1, 2):
        raise ValueError(f"only orders 0, 1, 2 are supported, got {order!r}")


def _as_nonneg(s) -> np.ndarray:
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ValueError("Bessel argument must be nonnegative")
    return arr


def bessel_i_series(order: int, s, scaled: bool = False):
    """Power series ``sum_k (s/2)^{2k+nu} / (k! (k+nu)!)``, summed to machine precision.

    With ``scaled=True`` returns ``exp(-s) I_nu(s)``. Meant for moderate
    arguments (it is exact but slow for very large ``s``).
    """
    _check_order(order)
    arr = _as_nonneg(s)
    x = np.atleast_1d(arr).astype(float)
    h2 = (0.5 * x) ** 2
    if scaled:
        # start from exp(-s) (s/2)^nu / nu! to avoid overflow at large s
        term = np.exp(-x + order * np.log(np.where(x > 0, 0.5 * x, 1.0))) / math.factorial(order)
        if order > 0:
            term = np.where(x > 0, term, 0.0)
    else:
        term = (0.5 * x) ** order / math.factorial(order)
    total = term.copy()
    k = 0
    while True:
        k += 1
        term = term * h2 / (k * (k + order))
        total += term
        if np.all(term <= 1e-17 * total) or k > 2000:
            break
    return float(total[0]) if arr.ndim == 0 else total.reshape(arr.shape)


def _n_nodes_for(smax: float) -> int:
    n = 32 + 6.0 * math.sqrt(smax)
    return 1 << max(5, math.ceil(math.log2(n)))


def bessel_i_integral(order: int, s, scaled: bool = False, chunk: int = 4096):
    """Evaluate ``I_nu(s)`` from its weighted integral representation.

    The exponent is shifted by ``-s`` before exponentiating, so ``scaled=True``
    (``exp(-s) I_nu(s)``) never overflows.
    """
    _check_order(order)
    arr = _as_nonneg(s)
    x = np.atleast_1d(arr).astype(float).ravel()
    out = np.empty_like(x)
    for lo in range(0, x.size, chunk):
        xs = x[lo:lo + chunk]
        n = _n_nodes_for(float(xs.max()) if xs.size else 0.0)
        rule = chebyshev1_rule(n) if order == 0 else chebyshev2_rule(n)
        u = rule.nodes
        # exp(-s u - s) with 1+u evaluated without cancellation near u = -1
        one_plus_u = 2.0 * np.cos(0.5 * np.arccos(u)) ** 2
        kern = np.exp(-np.outer(xs, one_plus_u))
        if order == 2:
            kern = kern * (1.0 - u * u)
        val = kern @ rule.weights
        if order == 0:
            val = val / np.pi
        elif order == 1:
            val = xs * val / np.pi
        else:
            val = xs * xs * val / (3.0 * np.pi)
        out[lo:lo + chunk] = val
    if not scaled:
        out = out * np.exp(x)
    out = out.reshape(np.shape(arr))
    return float(out) if arr.ndim == 0 else out


def bessel_i(order: int, s, scaled: bool = False):
    """Modified Bessel function of the first kind, orders 0, 1 and 2.

    Power series for ``s <= 15``, integral representation above. ``scaled``
    returns ``exp(-s) I_nu(s)``, which is what the ruin formulas consume.
    """
    _check_order(order)
    arr = _as_nonneg(s)
    x = np.atleast_1d(arr).astype(float)
    out = np.empty_like(x)
    small = x <= SERIES_CUTOFF
    if small.any():
        out[small] = bessel_i_series(order, x[small], scaled=scaled)
    if (~small).any():
        out[~small] = bessel_i_integral(order, x[~small], scaled=scaled)
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def bessel_ie(order: int, s):
    """Shorthand for ``bessel_i(order, s, scaled=True)``."""
    return bessel_i(order, s, scaled=True)


def normal_tail(x):
    """Standard normal survival function ``P(N > x)``."""
    out = 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(out) if np.ndim(out) == 0 else out


# ------------------------------------------------------- adaptive integration

_GL_ORDER = 15


def _gl_panel(f, a, b):
    rule = legendre_rule(_GL_ORDER)
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    # whole panel and its two halves in one vectorised call
    x = np.concatenate([mid + half * rule.nodes,
                        a + 0.5 * half * (rule.nodes + 1.0),
                        mid + 0.5 * half * (rule.nodes + 1.0)])
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    if not np.all(np.isfinite(y)):
        raise QuadratureError("integrand is not finite", math.nan, math.inf)
    m = _GL_ORDER
    whole = half * np.dot(rule.weights, y[:m])
    left = 0.5 * half * np.dot(rule.weights, y[m:2 * m])
    right = 0.5 * half * np.dot(rule.weights, y[2 * m:])
    return left + right, abs(left + right - whole)


def adaptive_integrate(f: Callable, a: float, b: float, rel_tol: float = 1e-10,
                       abs_floor: float = ABS_FLOOR, points: Sequence[float] = (),
                       max_panels: int = 4000, name: str = "integral",
                       full_output: bool = False):
    """Globally adaptive Gauss-Legendre quadrature of a vectorised ``f`` on ``[a, b]``.

    Each panel is integrated with a 15-point rule and with the same rule on its
    two halves; the difference is the panel's error estimate and the panel with
    the largest error is bisected next. Stops once the summed error is at most
    ``rel_tol * |result| + abs_floor``.

    Raises
    ------
    QuadratureError
        If ``max_panels`` is reached first; the exception carries the best estimate.
    """
    if not a < b:
        if a == b:
            return (0.0, 0.0) if full_output else 0.0
        raise ValueError(f"need a < b, got a={a!r}, b={b!r}")
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    edges = sorted({a, b, *[p for p in points if a < p < b]})
    heap = []
    total = 0.0
    err_total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err = _gl_panel(f, lo, hi)
        heapq.heappush(heap, (-err, lo, hi, val))
        total += val
        err_total += err
    while err_total > rel_tol * abs(total) + abs_floor:
        if len(heap) >= max_panels:
            raise QuadratureError(f"no convergence after {max_panels} panels",
                                  total, err_total, name)
        neg_err, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise QuadratureError("panel width underflow", total, err_total, name)
        v1, e1 = _gl_panel(f, lo, mid)
        v2, e2 = _gl_panel(f, mid, hi)
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        total += v1 + v2 - val
        err_total += e1 + e2 + neg_err
        if len(heap) % 64 == 0:
            # resum to shed accumulated rounding in the running totals
            total = sum(item[3] for item in heap)
            err_total = sum(-item[0] for item in heap)
    return (total, err_total) if full_output else total
