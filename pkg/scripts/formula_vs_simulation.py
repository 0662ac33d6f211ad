"""Side-by-side table of formula values and Monte Carlo estimates.

Cramer-Lundberg estimates use exact event-driven paths; Brownian estimates use
an Euler grid with step --dt (occupation-time bias of order sqrt(dt)).
"""

import argparse

from cumparisian import (BrownianParams, CramerLundbergParams, classical_ruin_prob_cl,
                         cum_parisian_prob_bm, cum_parisian_prob_cl, exp_parisian_prob_cl,
                         ruin_prob_bm)
from cumparisian.mc_engine import simulate, simulate_bm


def row(label, formula, est):
    z = (est.estimate - formula) / est.std_error if est.std_error > 0 else float("nan")
    print(f"{label:<42} {formula:12.8f} {est.estimate:12.8f} {est.std_error:10.2e} {z:7.2f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--paths", type=int, default=10**6)
    ap.add_argument("--bm-paths", type=int, default=10**5)
    ap.add_argument("--dt", type=float, default=1e-3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    print(f"{'quantity':<42} {'formula':>12} {'estimate':>12} {'SE':>10} {'z':>7}")
    m = CramerLundbergParams(c=2.0, lam=1.0, alpha=1.0)
    for x in (0.0, 1.0):
        res = simulate(m, x, 1.0, args.paths, args.seed, q=2.0)
        row(f"CL x={x} classical", classical_ruin_prob_cl(m, x, 1.0), res.tau0())
        row(f"CL x={x} cumulative r=0.2", cum_parisian_prob_cl(m, x, 0.2, 1.0), res.sigma_r(0.2))
        row(f"CL x={x} exponential q=2", exp_parisian_prob_cl(m, x, 2.0, 1.0), res.kappa_q())

    b = BrownianParams(c=1.0, sigma=1.0)
    for x, res in zip((0.0, 0.5), simulate_bm(b, [0.0, 0.5], 1.0, args.dt, args.bm_paths, args.seed)):
        if x > 0:
            row(f"BM x={x} classical (grid)", ruin_prob_bm(b, x, 1.0), res.tau0())
        row(f"BM x={x} cumulative r=0.1 (grid)", cum_parisian_prob_bm(b, x, 0.1, 1.0), res.sigma_r(0.1))


if __name__ == "__main__":
    main()
