"""Closed-form versus forward-numerical double Laplace transforms of the occupation time."""

import argparse

from cumparisian import BrownianParams, CramerLundbergParams
from cumparisian.laplace_check import transform_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, nargs="+", default=[0.5, 2.0, 4.0])
    ap.add_argument("--q", type=float, nargs="+", default=[0.5, 2.0, 4.0])
    args = ap.parse_args()

    cases = [("CL x=0", CramerLundbergParams(2.0, 1.0, 1.0), 0.0),
             ("CL x=1", CramerLundbergParams(2.0, 1.0, 1.0), 1.0),
             ("BM x=0", BrownianParams(1.0, 1.0), 0.0)]
    print(f"{'case':<8} {'p':>5} {'q':>5} {'closed':>18} {'numeric':>18} {'|diff|':>10}")
    for label, model, x in cases:
        for closed, numeric in transform_grid(model, x, args.p, args.q):
            print(f"{label:<8} {closed.p:5.2f} {closed.q:5.2f} {closed.value:18.14f} "
                  f"{numeric.value:18.14f} {abs(closed.value - numeric.value):10.2e}")


if __name__ == "__main__":
    main()
