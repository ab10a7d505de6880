"""Relative error of the truncated kernel sum against the closed form as the
cutoffs grow, for a few points at increasing |w|."""
import argparse
import csv
import sys
from fractions import Fraction

from jacobi_cs import JacobiCSPoint, kernel_closed, kernel_truncated


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--k", type=Fraction, default=Fraction(3, 2))
    p.add_argument("--cutoffs", type=int, nargs="+", default=[5, 10, 20, 40, 60, 80])
    p.add_argument("--csv", help="write the table here instead of stdout")
    args = p.parse_args(argv)

    cases = [
        (JacobiCSPoint(0.5, 0.2), JacobiCSPoint(0.3j, -0.1)),
        (JacobiCSPoint(1.0, 0.5j), JacobiCSPoint(-0.8, 0.4)),
        (JacobiCSPoint(1.0, 0.7), JacobiCSPoint(0.9j, 0.7)),
        (JacobiCSPoint(2.0, 0.85), JacobiCSPoint(2.0, 0.85)),
    ]
    rows = []
    for x, y in cases:
        ref = kernel_closed(x, y, args.k)
        for n in args.cutoffs:
            err = abs(kernel_truncated(x, y, args.k, n, n) - ref) / abs(ref)
            rows.append({"z": x.z, "w": x.w, "zp": y.z, "wp": y.w, "cutoff": n, "rel_err": err})

    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    wr = csv.DictWriter(out, fieldnames=list(rows[0]))
    wr.writeheader()
    wr.writerows(rows)
    if args.csv:
        out.close()


if __name__ == "__main__":
    main()
