#!/usr/bin/env python3
"""Write two-sided p-value curve CSVs for three worked examples.

Each file samples pi(x, .) on the natural scale and appends both one-sided
limits at every jump point, the same emission the CLI curve subcommand
produces. The level-alpha crossings of these curves are the Sterne interval
endpoints.
"""

import argparse
import os

from exactci.cli import run

CURVES = {
    "binomial_n20_x5.csv": [
        "binomial", "--n", "20", "--x", "5", "--curve",
        "--from", "0.01", "--to", "0.7", "--points", "500"],
    "oddsratio_49_317_x42.csv": [
        "curve", "--model", "oddsratio", "--y1", "42", "--n1", "49",
        "--y2", "203", "--n2", "317",
        "--from", "0.5", "--to", "12", "--points", "500"],
    "poisson_x3.csv": [
        "poisson", "--x", "3", "--curve",
        "--from", "0.2", "--to", "12", "--points", "500"],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="curves")
    args = ap.parse_args()

    os.makedirs(args.outdir, exist_ok=True)
    for name, argv in CURVES.items():
        path = os.path.join(args.outdir, name)
        with open(path, "w") as fh:
            code = run(argv, out=fh)
        if code != 0:
            raise SystemExit(code)
        print("wrote", path)


if __name__ == "__main__":
    main()
