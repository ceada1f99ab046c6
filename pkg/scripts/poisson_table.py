#!/usr/bin/env python3
"""Print the lambda-interval table for small Poisson counts.

One row per outcome: the Sterne interval with its length, then the
Clopper-Pearson interval beneath in parentheses, four decimals throughout.
"""

import argparse

from exactci import clopper_pearson, make_poisson, sterne_interval


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=0.05)
    ap.add_argument("--xmax", type=int, default=15)
    args = ap.parse_args()

    model = make_poisson()
    print(f"{'x':>3} {'lower':>10} {'upper':>10} {'length':>10}")
    for x in range(args.xmax + 1):
        st = sterne_interval(model, x, args.alpha)
        cp = clopper_pearson(model, x, args.alpha)
        print(f"{x:>3} {st.natural_lo:>10.4f} {st.natural_hi:>10.4f} "
              f"{st.natural_hi - st.natural_lo:>10.4f}")
        print(f"    ({cp.natural_lo:>8.4f}) ({cp.natural_hi:>8.4f}) "
              f"({cp.natural_hi - cp.natural_lo:>8.4f})")


if __name__ == "__main__":
    main()
