"""Cumulative Parisian ruin probability as the allowance r shrinks to zero.

Prints P_x(sigma_r <= t), the classical ruin probability and their gap for a
halving sequence of allowances.
"""

import argparse

from cumparisian import CramerLundbergParams, classical_ruin_prob_cl, cum_parisian_prob_cl


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c", type=float, default=2.0)
    ap.add_argument("--lam", type=float, default=1.0)
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--x", type=float, default=1.0)
    ap.add_argument("--t", type=float, default=1.0)
    ap.add_argument("--levels", type=int, default=10)
    args = ap.parse_args()

    m = CramerLundbergParams(args.c, args.lam, args.alpha)
    ruin = classical_ruin_prob_cl(m, args.x, args.t)
    print(f"classical ruin P(tau_0 <= {args.t}) = {ruin:.10f}")
    print(f"{'r':>12} {'P(sigma_r<=t)':>16} {'gap':>12} {'gap ratio':>10}")
    prev = None
    for k in range(args.levels):
        r = 0.2 * 0.5**k
        p = cum_parisian_prob_cl(m, args.x, r, args.t)
        gap = ruin - p
        ratio = "" if prev is None else f"{gap / prev:10.4f}"
        print(f"{r:12.6g} {p:16.10f} {gap:12.4e} {ratio}")
        prev = gap


if __name__ == "__main__":
    main()
