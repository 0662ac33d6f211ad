"""Validation suites: analytic identities, transform-domain checks and Monte Carlo oracles.

Each ``criterion_*`` function returns a list of :class:`Check` rows; suites
group them and :func:`run_suite` collects a :class:`Report`. The acceptance
tests and the ``validate`` subcommand both drive these functions, so the
tolerances live in one place.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from . import mc_engine
from .brownian_ruin import cum_parisian_prob_bm, occ_distribution_bm
from .cl_ruin import (cum_parisian_prob_cl, exp_parisian_prob_cl, occ_distribution_x,
                      survival_x, survival_zero)
from .laplace_check import (bm_family, cl_family, closed_dlt_x, closed_dlt_zero,
                            closed_laplace_survival, numeric_dlt, numeric_laplace)
from .levy_models import BrownianParams, CramerLundbergParams
from .special_fn import bessel_i, bessel_i_integral, bessel_i_series

DEFAULT_SEED = 20240611
REFERENCE_CL = CramerLundbergParams(c=2.0, lam=1.0, alpha=1.0)
REFERENCE_BM = BrownianParams(c=1.0, sigma=1.0)


@dataclass(frozen=True)
class Check:
    """One comparison: ``passed`` iff ``deviation <= tolerance``."""

    criterion: int
    name: str
    observed: float
    expected: float
    deviation: float
    tolerance: float
    passed: bool

    def __post_init__(self):
        # plain Python scalars so reports serialise to JSON
        for name in ("observed", "expected", "deviation", "tolerance"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "passed", bool(self.passed))

    @classmethod
    def compare(cls, criterion: int, name: str, observed: float, expected: float,
                tolerance: float, deviation: float | None = None) -> "Check":
        dev = abs(observed - expected) if deviation is None else deviation
        return cls(criterion, name, float(observed), float(expected), float(dev),
                   float(tolerance), bool(dev <= tolerance))

    @classmethod
    def runtime(cls, criterion: int, elapsed: float, limit: float) -> "Check":
        return cls(criterion, f"runtime < {limit:g} s", elapsed, limit, elapsed, limit,
                   elapsed < limit)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] criterion {self.criterion}: {self.name}: observed {self.observed:.10g}, "
                f"expected {self.expected:.10g}, deviation {self.deviation:.3g} "
                f"(tolerance {self.tolerance:.3g})")


@dataclass
class Report:
    suite: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed,
                "n_checks": len(self.checks), "n_failed": len(self.failures),
                "checks": [asdict(c) for c in self.checks]}

    def text(self) -> str:
        lines = [c.line() for c in self.checks]
        lines.append(f"{self.suite}: {len(self.checks) - len(self.failures)}/{len(self.checks)} checks passed")
        return "\n".join(lines)


def _timed(criterion: int, limit: float | None, body) -> list:
    start = time.perf_counter()
    checks = list(body())
    if limit is not None:
        checks.append(Check.runtime(criterion, time.perf_counter() - start, limit))
    return checks


# ------------------------------------------------------------------ identities

def random_cl_params(n: int, seed: int = DEFAULT_SEED) -> list:
    """Log-uniform parameter sets on ``[0.1, 10]^3``; about half violate net profit."""
    rng = np.random.default_rng(seed)
    vals = np.exp(rng.uniform(math.log(0.1), math.log(10.0), size=(n, 3)))
    return [CramerLundbergParams(c=float(c), lam=float(lam), alpha=float(a)) for c, lam, a in vals]


def criterion_1(seed: int = DEFAULT_SEED) -> list:
    def body():
        for m in random_cl_params(20, seed):
            yield Check.compare(1, f"survival_zero(t=0) c={m.c:.3g} lam={m.lam:.3g} alpha={m.alpha:.3g}",
                                survival_zero(m, 0.0), 1.0, 1e-10)
    return _timed(1, 1.0, body)


ULTIMATE_RATIOS = (0.25, 0.5, 0.9, 1.0, 1.5)


def criterion_2() -> list:
    def body():
        for ratio in ULTIMATE_RATIOS:
            m = CramerLundbergParams(c=2.0, lam=2.0 * ratio, alpha=1.0)
            yield Check.compare(2, f"survival_zero(t=200) lam/(c alpha)={ratio}",
                                survival_zero(m, 200.0), max(1.0 - ratio, 0.0), 1e-6)
    return _timed(2, 10.0, body)


NORMALIZATION_CL = ((1.0, 1.0, 2.0), (2.0, 1.0, 1.0), (1.0, 2.0, 1.0))
NORMALIZATION_BM = ((1.0, 1.0), (0.5, 2.0))


def criterion_3() -> list:
    def body():
        for lam, alpha, c in NORMALIZATION_CL:
            m = CramerLundbergParams(c=c, lam=lam, alpha=alpha)
            for x in (0.0, 0.5, 2.0):
                for t in (0.5, 1.0, 5.0):
                    mass = occ_distribution_x(m, x, t, check=False).mass()
                    yield Check.compare(3, f"mass lam={lam} alpha={alpha} c={c} x={x} t={t}",
                                        mass, 1.0, 1e-6)
        for c, sigma in NORMALIZATION_BM:
            for t in (0.5, 1.0, 5.0):
                mass = occ_distribution_bm(BrownianParams(c=c, sigma=sigma), t).mass()
                yield Check.compare(3, f"Brownian mass c={c} sigma={sigma} t={t}", mass, 1.0, 1e-6)
    return _timed(3, 120.0, body)


PARISIAN_LIMIT_R = (0.2, 0.1, 0.05, 0.025, 0.0125)


def parisian_gaps(model: CramerLundbergParams = REFERENCE_CL, x: float = 1.0, t: float = 1.0,
                  rs=PARISIAN_LIMIT_R) -> list:
    """``P(sigma_r <= t)`` minus ``P(tau_0 <= t)`` in absolute value, for each ``r``."""
    ruin = 1.0 - survival_x(model, x, t)
    return [abs(cum_parisian_prob_cl(model, x, r, t) - ruin) for r in rs]


def criterion_7() -> list:
    def body():
        gaps = parisian_gaps()
        for r, g in zip(PARISIAN_LIMIT_R, gaps):
            yield Check(7, f"gap positive at r={r}", g, 0.0, g, 0.0, g > 0)
        for (r0, g0), (r1, g1) in zip(zip(PARISIAN_LIMIT_R, gaps), zip(PARISIAN_LIMIT_R[1:], gaps[1:])):
            yield Check(7, f"gap decreasing r={r0} -> r={r1}", g1, g0, g1 - g0, 0.0, g1 < g0)
        yield Check.compare(7, "gap at r=0.0125 below 0.02", gaps[-1], 0.0, 0.02)
    return _timed(7, 30.0, body)


BESSEL_POINTS = tuple(float(s) for s in np.geomspace(1e-3, 50.0, 41))


def criterion_10() -> list:
    def body():
        s = np.array(BESSEL_POINTS)
        for order in (0, 1, 2):
            integ = bessel_i_integral(order, s)
            series = bessel_i_series(order, s)
            rel = np.abs(integ - series) / np.abs(series)
            k = int(np.argmax(rel))
            yield Check(10, f"I{order} integral vs series (worst s={s[k]:.4g})", integ[k], series[k],
                        float(rel[k]), 1e-10, bool(rel.max() <= 1e-10))
        i0, i1, i2 = (bessel_i(n, s) for n in (0, 1, 2))
        rel = np.abs(i1 - 0.5 * s * (i0 - i2)) / np.abs(i1)
        k = int(np.argmax(rel))
        yield Check(10, f"recurrence I1 = z/2 (I0 - I2) (worst s={s[k]:.4g})", i1[k],
                    0.5 * s[k] * (i0[k] - i2[k]), float(rel[k]), 1e-10, bool(rel.max() <= 1e-10))
    return _timed(10, None, body)


# ------------------------------------------------------------------ transforms

TRANSFORM_GRID = (0.5, 2.0, 4.0)


def criterion_4(ps=TRANSFORM_GRID, qs=TRANSFORM_GRID) -> list:
    def body():
        m, b = REFERENCE_CL, REFERENCE_BM
        for p in ps:
            t_max = 30.0 / p
            families = [("CL x=0", cl_family(m, 0.0, t_max), lambda q: closed_dlt_zero(m, p, q)),
                        ("BM x=0", bm_family(b), lambda q: closed_dlt_zero(b, p, q))]
            for x in (0.5, 1.0):
                families.append((f"CL x={x}", cl_family(m, x, t_max),
                                 lambda q, x=x: closed_dlt_x(m, x, p, q)))
            for label, fam, closed in families:
                for q in qs:
                    yield Check.compare(4, f"{label} double transform p={p} q={q}",
                                        numeric_dlt(fam, p, q, t_max), closed(q), 1e-4)
        for p in (0.5, 1.0, 2.0):
            numeric = numeric_laplace(lambda t: survival_zero(m, t), p)
            yield Check.compare(4, f"Laplace transform of a_t at p={p}", numeric,
                                closed_laplace_survival(m, p), 1e-5)
    return _timed(4, 300.0, body)


# ------------------------------------------------------------------ Monte Carlo oracles

@lru_cache(maxsize=8)
def _cl_batch(x: float, n_paths: int, seed: int):
    return mc_engine.simulate(REFERENCE_CL, x, 1.0, n_paths, seed, q=2.0)


def criterion_5(n_paths: int = 10**6, seed: int = DEFAULT_SEED) -> list:
    def body():
        m = REFERENCE_CL
        for x in (0.0, 1.0):
            res = _cl_batch(x, n_paths, seed)
            rows = [("cumulative Parisian r=0.2", res.sigma_r(0.2), cum_parisian_prob_cl(m, x, 0.2, 1.0)),
                    ("classical ruin", res.tau0(), 1.0 - float(survival_x(m, x, 1.0))),
                    ("exponential Parisian q=2 via occupation",
                     _sigma_eq(res, x, seed), exp_parisian_prob_cl(m, x, 2.0, 1.0))]
            for label, est, formula in rows:
                yield Check.compare(5, f"x={x} {label} (SE {est.std_error:.2g})", est.estimate,
                                    formula, 3.0 * est.std_error)
    return _timed(5, 120.0, body)


def _sigma_eq(res, x: float, seed: int) -> "mc_engine.Estimate":
    # sigma_{e_q} <= t: occupation time exceeds an independent Exp(q) allowance
    rng = np.random.default_rng([seed, int(1000 * x)])
    allowance = rng.exponential(1.0 / res.q, res.n_paths)
    return mc_engine.Estimate.from_indicator(res.occupation > allowance, seed, "sigma_eq")


def criterion_6(n_paths: int = 10**6, seed: int = DEFAULT_SEED) -> list:
    def body():
        m = REFERENCE_CL
        for x in (0.0, 1.0):
            est = _cl_batch(x, n_paths, seed).kappa_q()
            yield Check.compare(6, f"x={x} excursion-marked kappa_q=2 (SE {est.std_error:.2g})",
                                est.estimate, exp_parisian_prob_cl(m, x, 2.0, 1.0),
                                3.0 * est.std_error)
    return _timed(6, None, body)


OCCUPATION_CDF_POINTS = (0.1, 0.25, 0.5, 0.75)


def criterion_8(n_paths: int = 10**6, seed: int = DEFAULT_SEED, dt: float = 1e-4) -> list:
    def body():
        b = REFERENCE_BM
        allowance = 2.0 * math.sqrt(dt)
        res0, res5 = mc_engine.simulate_bm(b, [0.0, 0.5], 1.0, dt, n_paths, seed)
        dist = occ_distribution_bm(b, 1.0)
        for s in OCCUPATION_CDF_POINTS:
            est = res0.occupation_cdf(s)
            yield Check.compare(8, f"occupation CDF x=0 s={s} (SE {est.std_error:.2g})",
                                est.estimate, dist.cdf(s), 3.0 * est.std_error + allowance)
        for x, res in ((0.0, res0), (0.5, res5)):
            est = res.sigma_r(0.1)
            yield Check.compare(8, f"cumulative Parisian x={x} r=0.1 (SE {est.std_error:.2g})",
                                est.estimate, cum_parisian_prob_bm(b, x, 0.1, 1.0),
                                3.0 * est.std_error + allowance)
    return _timed(8, 600.0, body)


def criterion_9(n_paths: int = 10**5, seed: int = DEFAULT_SEED, r: float = 0.2) -> list:
    def body():
        for x in (0.0, 1.0):
            res = mc_engine.simulate(REFERENCE_CL, x, 1.0, n_paths, seed + 1, q=2.0)
            sig, tau_r, tau0 = res.sigma_r_hits(r), res.tau_r_hits(r), res.ruined
            v1 = int(np.count_nonzero(tau_r & ~sig))
            v2 = int(np.count_nonzero((sig | tau_r) & ~tau0))
            yield Check(9, f"x={x} paths with tau_r<=t but sigma_r>t", v1, 0, v1, 0, v1 == 0)
            yield Check(9, f"x={x} Parisian ruin without classical ruin", v2, 0, v2, 0, v2 == 0)
    return _timed(9, None, body)


SUITES = {
    "identities": (criterion_1, criterion_2, criterion_3, criterion_7, criterion_10),
    "transform": (criterion_4,),
    "oracle": (criterion_5, criterion_6, criterion_8, criterion_9),
}


def run_suite(suite: str, n_paths: int = 10**6, seed: int = DEFAULT_SEED) -> Report:
    """Run ``identities``, ``transform``, ``oracle`` or ``all``; ``n_paths`` budgets the oracles."""
    names = list(SUITES) if suite == "all" else [suite]
    if any(n not in SUITES for n in names):
        raise ValueError(f"unknown suite {suite!r}")
    report = Report(suite)
    for name in names:
        for fn in SUITES[name]:
            if name == "oracle":
                budget = n_paths if fn is not criterion_9 else min(n_paths, 10**5)
                report.checks.extend(fn(n_paths=budget, seed=seed))
            else:
                report.checks.extend(fn())
    return report
