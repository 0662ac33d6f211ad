"""Monte Carlo oracle for the ruin and occupation-time formulas.

Cramer-Lundberg paths are simulated exactly: between claims the surplus moves
linearly with slope ``c``, so the time spent below zero, the excursion
lengths and the exponential Parisian clocks are all computed from segment
algebra with no time discretisation. Brownian paths are simulated on an Euler
grid; the occupation time is ``dt`` times the number of grid points below zero
and carries an ``O(sqrt(dt))`` bias that is not corrected.

Every path draws from its own counter-based stream keyed by ``(seed, path
index)``: the ``j``-th uniform of path ``i`` is ``mix(key_i + j * GOLDEN)`` with
``mix`` the SplitMix64 finaliser. Results therefore do not depend on how the
paths are split across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numba
import numpy as np
from numba import njit, prange

from .levy_models import BrownianParams, CramerLundbergParams, ModelParams

# prefer OpenMP: thread-safe for callers driving disjoint path ranges concurrently
numba.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_CLOCK_SALT = np.uint64(0xD1B54A32D192ED03)
_S30, _S27, _S31, _S11 = np.uint64(30), np.uint64(27), np.uint64(31), np.uint64(11)
_TWO_M53 = 1.0 / 9007199254740992.0


@njit(inline="always")
def _mix(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(inline="always")
def _uniform(key, j):
    # strictly inside (0, 1)
    return ((_mix(key + np.uint64(j) * _GOLDEN) >> _S11) + 0.5) * _TWO_M53


@njit
def _path_key(seed_key, index):
    return _mix(seed_key + np.uint64(index + 1) * _GOLDEN)


def _seed_key(seed: int) -> np.uint64:
    return np.uint64(_mix(np.uint64(seed & 0xFFFFFFFFFFFFFFFF)))


# ------------------------------------------------------------ Cramer-Lundberg

@njit
def _cl_one_path(x, t, c, lam, alpha, q, key, times, sizes):
    """Simulate one path; returns (occupation, ruined, longest excursion, kappa hit, n_jumps).

    ``times``/``sizes`` receive the claim epochs and amounts when large enough.
    Draw order per path: inter-arrival, claim size, and one clock uniform at
    the start of every excursion below zero.
    """
    j = 0
    now = 0.0
    level = x
    occ = 0.0
    ruined = False
    longest = 0.0
    kappa = False
    age = 0.0
    clock = np.inf
    n_jumps = 0
    while True:
        w = -math.log(_uniform(key, j)) / lam
        j += 1
        d = min(w, t - now)
        if level < 0.0:
            back = -level / c
            if back < d:
                occ += back
                age += back
                if age > longest:
                    longest = age
                if age > clock:
                    kappa = True
                age = 0.0
            else:
                occ += d
                age += d
        level += c * d
        now += d
        if w >= t - (now - d):
            break
        size = -math.log(_uniform(key, j)) / alpha
        j += 1
        if n_jumps < times.size:
            times[n_jumps] = now
            sizes[n_jumps] = size
        n_jumps += 1
        was_below = level < 0.0
        level -= size
        if level < 0.0:
            ruined = True
            if not was_below:
                u = _uniform(key, j)
                j += 1
                clock = -math.log(u) / q if q > 0.0 else np.inf
    if level < 0.0:
        # excursion still running at the horizon: it races its clock over its observed age
        if age > longest:
            longest = age
        if age > clock:
            kappa = True
    return occ, ruined, longest, kappa, n_jumps


@njit(parallel=True, cache=True)
def _cl_kernel(x, t, c, lam, alpha, q, seed_key, start, n, occ, ruined, longest, kappa):
    for i in prange(n):
        key = _path_key(seed_key, start + i)
        dummy = np.empty(0)
        o, rn, lg, kp, _ = _cl_one_path(x, t, c, lam, alpha, q, key, dummy, dummy)
        occ[i] = o
        ruined[i] = rn
        longest[i] = lg
        kappa[i] = kp


@njit(cache=True)
def _cl_events(x, t, c, lam, alpha, q, seed_key, index, cap):
    key = _path_key(seed_key, index)
    times = np.empty(cap)
    sizes = np.empty(cap)
    o, rn, lg, kp, m = _cl_one_path(x, t, c, lam, alpha, q, key, times, sizes)
    return times, sizes, m, o, rn, lg, kp


# ------------------------------------------------------------------ Brownian

@njit(parallel=True, cache=True)
def _bm_kernel(xs, t, c, sigma, dt, n_steps, q, seed_key, start, n,
               occ, ruined, longest, kappa):
    nx = xs.size
    drift = c * dt
    vol = sigma * math.sqrt(dt)
    for i in prange(n):
        key = _path_key(seed_key, start + i)
        ckey = _mix(key ^ _CLOCK_SALT)
        cj = 0
        w = 0.0
        run = np.zeros(nx, dtype=np.int64)
        count = np.zeros(nx, dtype=np.int64)
        best = np.zeros(nx, dtype=np.int64)
        clock = np.full(nx, np.inf)
        hit = np.zeros(nx, dtype=np.bool_)
        spare = 0.0
        have_spare = False
        j = 0
        for k in range(n_steps):
            # Marsaglia polar method
            if have_spare:
                z = spare
                have_spare = False
            else:
                while True:
                    v1 = 2.0 * _uniform(key, j) - 1.0
                    v2 = 2.0 * _uniform(key, j + 1) - 1.0
                    j += 2
                    rr = v1 * v1 + v2 * v2
                    if 0.0 < rr < 1.0:
                        break
                f = math.sqrt(-2.0 * math.log(rr) / rr)
                z = v1 * f
                spare = v2 * f
                have_spare = True
            w += drift + vol * z
            for m in range(nx):
                if xs[m] + w < 0.0:
                    if run[m] == 0:
                        u = _uniform(ckey, cj)
                        cj += 1
                        clock[m] = -math.log(u) / q if q > 0.0 else np.inf
                    run[m] += 1
                    count[m] += 1
                    if run[m] > best[m]:
                        best[m] = run[m]
                    if run[m] * dt > clock[m]:
                        hit[m] = True
                else:
                    run[m] = 0
        for m in range(nx):
            occ[i, m] = count[m] * dt
            ruined[i, m] = count[m] > 0
            longest[i, m] = best[m] * dt
            kappa[i, m] = hit[m]


# ------------------------------------------------------------------ results

@dataclass(frozen=True)
class Estimate:
    """Monte Carlo probability with its binomial standard error."""

    estimate: float
    std_error: float
    n_paths: int
    seed: int
    estimator: str

    @classmethod
    def from_indicator(cls, hits: np.ndarray, seed: int, estimator: str) -> "Estimate":
        n = int(hits.size)
        p = float(np.count_nonzero(hits)) / n
        return cls(p, math.sqrt(p * (1.0 - p) / n), n, seed, estimator)

    def within(self, value: float, n_se: float = 3.0, allowance: float = 0.0) -> bool:
        return abs(self.estimate - value) <= n_se * self.std_error + allowance


@dataclass(frozen=True)
class SimulationResult:
    """Per-path functionals of one batch of coupled paths.

    ``occupation`` is the time spent below zero on ``[0, t]``, ``longest`` the
    longest excursion below zero (clipped at ``t``), ``ruined`` flags classical
    ruin and ``kappa`` exponential Parisian ruin at rate ``q``.
    """

    model: ModelParams
    x: float
    t: float
    q: float
    seed: int
    occupation: np.ndarray
    ruined: np.ndarray
    longest: np.ndarray
    kappa: np.ndarray
    dt: float | None = None

    @property
    def n_paths(self) -> int:
        return int(self.occupation.size)

    def tau0(self) -> Estimate:
        return Estimate.from_indicator(self.ruined, self.seed, "tau0")

    def sigma_r(self, r: float) -> Estimate:
        return Estimate.from_indicator(self.sigma_r_hits(r), self.seed, f"sigma_r(r={r})")

    def tau_r(self, r: float) -> Estimate:
        return Estimate.from_indicator(self.tau_r_hits(r), self.seed, f"tau_r(r={r})")

    def kappa_q(self) -> Estimate:
        return Estimate.from_indicator(self.kappa, self.seed, f"kappa_q(q={self.q})")

    def sigma_r_hits(self, r: float) -> np.ndarray:
        return self.occupation > r

    def tau_r_hits(self, r: float) -> np.ndarray:
        return self.longest > r

    def occupation_cdf(self, s: float) -> Estimate:
        return Estimate.from_indicator(self.occupation <= s, self.seed, f"P(occ<={s})")

    def histogram(self, bins: int = 50):
        """Counts of occupation times in ``(0, t]`` plus the number of zeros."""
        occ = self.occupation
        zeros = int(np.count_nonzero(occ == 0))
        counts, edges = np.histogram(occ[occ > 0], bins=bins, range=(0.0, self.t))
        return zeros, counts, edges


def _resolve_seed(seed) -> int:
    if seed is None:
        raise ValueError("a seed is required for reproducible estimates")
    return int(seed)


def simulate(model: ModelParams, x: float, t: float, n_paths: int, seed: int,
             q: float = 0.0, dt: float = 1e-4, chunk: int = 1 << 16) -> SimulationResult:
    """Simulate ``n_paths`` coupled paths from ``x`` up to the horizon ``t``.

    Cramer-Lundberg paths are exact; Brownian paths use the Euler step ``dt``.
    """
    if n_paths < 1:
        raise ValueError("n_paths must be at least 1")
    if x < 0 or not t > 0 or q < 0:
        raise ValueError("need x >= 0, t > 0, q >= 0")
    seed = _resolve_seed(seed)
    if isinstance(model, BrownianParams):
        res = simulate_bm(model, [x], t, dt, n_paths, seed, q=q, chunk=chunk)
        return res[0]
    if not isinstance(model, CramerLundbergParams):
        raise TypeError(f"unsupported model {type(model).__name__}")
    occ = np.empty(n_paths)
    ruined = np.empty(n_paths, dtype=np.bool_)
    longest = np.empty(n_paths)
    kappa = np.empty(n_paths, dtype=np.bool_)
    sk = _seed_key(seed)
    for lo in range(0, n_paths, chunk):
        n = min(chunk, n_paths - lo)
        _cl_kernel(float(x), float(t), model.c, model.lam, model.alpha, float(q), sk, lo, n,
                   occ[lo:lo + n], ruined[lo:lo + n], longest[lo:lo + n], kappa[lo:lo + n])
    return SimulationResult(model, float(x), float(t), float(q), seed, occ, ruined, longest, kappa)


def simulate_bm(params: BrownianParams, xs, t: float, dt: float, n_paths: int, seed: int,
                q: float = 0.0, chunk: int = 1 << 14) -> list[SimulationResult]:
    """Euler-grid Brownian paths, one shared noise path per index for every start in ``xs``."""
    xs = np.asarray(xs, dtype=float)
    if np.any(xs < 0):
        raise ValueError("initial capital must be nonnegative")
    n_steps = int(round(t / dt))
    if n_steps < 1 or abs(n_steps * dt - t) > 1e-9 * t:
        raise ValueError("dt must divide the horizon")
    seed = _resolve_seed(seed)
    nx = xs.size
    occ = np.empty((n_paths, nx))
    ruined = np.empty((n_paths, nx), dtype=np.bool_)
    longest = np.empty((n_paths, nx))
    kappa = np.empty((n_paths, nx), dtype=np.bool_)
    sk = _seed_key(seed)
    for lo in range(0, n_paths, chunk):
        n = min(chunk, n_paths - lo)
        _bm_kernel(xs, float(t), params.c, params.sigma, float(dt), n_steps, float(q), sk, lo, n,
                   occ[lo:lo + n], ruined[lo:lo + n], longest[lo:lo + n], kappa[lo:lo + n])
    return [SimulationResult(params, float(x), float(t), float(q), seed,
                             occ[:, m].copy(), ruined[:, m].copy(), longest[:, m].copy(),
                             kappa[:, m].copy(), dt=float(dt))
            for m, x in enumerate(xs)]


@dataclass(frozen=True)
class BMOccupation:
    result: SimulationResult
    zeros: int
    counts: np.ndarray
    edges: np.ndarray

    def cdf(self, s: float) -> Estimate:
        return self.result.occupation_cdf(s)

    def positive(self) -> Estimate:
        return Estimate.from_indicator(self.result.occupation > 0, self.result.seed, "P(occ>0)")


def simulate_bm_occupation(params: BrownianParams, x: float, t: float, dt: float,
                           n_paths: int, seed: int, bins: int = 50) -> BMOccupation:
    """Occupation-time histogram of Euler-grid Brownian paths."""
    res = simulate_bm(params, [x], t, dt, n_paths, seed)[0]
    zeros, counts, edges = res.histogram(bins)
    return BMOccupation(res, zeros, counts, edges)


def estimate_tau0(model, x, t, n_paths, seed, dt=1e-4) -> Estimate:
    return simulate(model, x, t, n_paths, seed, dt=dt).tau0()


def estimate_sigma_r(model, x, r, t, n_paths, seed, dt=1e-4) -> Estimate:
    if r >= t:
        return Estimate(0.0, 0.0, int(n_paths), int(seed), f"sigma_r(r={r})")
    return simulate(model, x, t, n_paths, seed, dt=dt).sigma_r(r)


def estimate_tau_r(model, x, r, t, n_paths, seed, dt=1e-4) -> Estimate:
    return simulate(model, x, t, n_paths, seed, dt=dt).tau_r(r)


def estimate_kappa_q(model, x, q, t, n_paths, seed, dt=1e-4) -> Estimate:
    if not q > 0:
        raise ValueError("q must be positive")
    return simulate(model, x, t, n_paths, seed, q=q, dt=dt).kappa_q()


# ------------------------------------------------------------------ single paths

@dataclass(frozen=True)
class PathSample:
    """One Cramer-Lundberg trajectory on ``[0, horizon]``.

    Linear with slope ``c`` between claims; claims at ``jump_times`` of sizes
    ``jump_sizes``.
    """

    x: float
    horizon: float
    c: float
    jump_times: np.ndarray
    jump_sizes: np.ndarray

    def level_after(self, i: int) -> float:
        """Surplus right after the ``i``-th claim."""
        return self.x + self.c * self.jump_times[i] - float(np.sum(self.jump_sizes[:i + 1]))

    def level_at(self, s) -> np.ndarray:
        """Surplus at times ``s`` (right-continuous)."""
        s = np.asarray(s, dtype=float)
        claimed = np.concatenate([[0.0], np.cumsum(self.jump_sizes)])
        n_before = np.searchsorted(self.jump_times, s, side="right")
        return self.x + self.c * s - claimed[n_before]

    @cached_property
    def excursions(self) -> list[tuple[float, float, bool]]:
        """``(start, end, truncated)`` for each maximal interval below zero."""
        out = []
        start = None
        for i, tj in enumerate(self.jump_times):
            y = self.level_after(i)
            nxt = self.jump_times[i + 1] if i + 1 < self.jump_times.size else self.horizon
            if y < 0:
                if start is None:
                    start = tj
                back = tj + (-y) / self.c
                if back < nxt:
                    out.append((start, back, False))
                    start = None
        if start is not None:
            out.append((start, self.horizon, True))
        return out

    @property
    def occupation_time(self) -> float:
        return float(sum(e - s for s, e, _ in self.excursions))

    @property
    def ruined(self) -> bool:
        return bool(self.excursions)

    @property
    def longest_excursion(self) -> float:
        return max((e - s for s, e, _ in self.excursions), default=0.0)


def simulate_cl_path(model: CramerLundbergParams, x: float, t: float,
                     rng: np.random.Generator) -> PathSample:
    """Exact trajectory from a numpy ``Generator``: Poisson count, uniform epochs, exponential sizes."""
    if not t > 0 or x < 0:
        raise ValueError("need t > 0 and x >= 0")
    n = rng.poisson(model.lam * t)
    times = np.sort(rng.uniform(0.0, t, n))
    sizes = rng.exponential(1.0 / model.alpha, n)
    return PathSample(float(x), float(t), model.c, times, sizes)


def engine_path(model: CramerLundbergParams, x: float, t: float, seed: int, index: int,
                q: float = 0.0):
    """Path ``index`` of an engine run with ``seed``, plus what the kernel computed for it.

    Returns ``(PathSample, dict)``; the dict holds the kernel's occupation time,
    ruin flag, longest excursion and kappa flag for cross-checking.
    """
    cap = 64
    while True:
        times, sizes, m, o, rn, lg, kp = _cl_events(float(x), float(t), model.c, model.lam,
                                                    model.alpha, float(q), _seed_key(int(seed)),
                                                    int(index), cap)
        if m <= cap:
            break
        cap = 2 * m
    path = PathSample(float(x), float(t), model.c, times[:m].copy(), sizes[:m].copy())
    return path, {"occupation": o, "ruined": rn, "longest": lg, "kappa": kp}


def set_workers(n: int) -> None:
    """Number of threads used by the simulation kernels."""
    numba.set_num_threads(int(n))
