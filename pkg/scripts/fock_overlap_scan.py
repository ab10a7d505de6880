"""Overlap of truncated coherent-state vectors against the closed kernel as a
function of the cutoff and of |w|, which shows where the matrix oracle is
trustworthy."""
import argparse
import warnings
from fractions import Fraction

from jacobi_cs import ConvergenceWarning, JacobiCSPoint, kernel_closed
from jacobi_cs.fock import build_rep, cs_vector, overlap


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--k", type=Fraction, default=Fraction(3, 2))
    p.add_argument("--cutoffs", type=int, nargs="+", default=[10, 20, 40, 60])
    p.add_argument("--radii", type=float, nargs="+", default=[0.2, 0.5, 0.7, 0.8])
    args = p.parse_args(argv)

    print("cutoff " + " ".join(f"|w|={r:<8}" for r in args.radii))
    warnings.simplefilter("ignore", ConvergenceWarning)
    for n in args.cutoffs:
        rep = build_rep(n, n, args.k)
        errs = []
        for r in args.radii:
            x, y = JacobiCSPoint(0.8, r), JacobiCSPoint(-0.5j, 1j * r)
            ref = kernel_closed(x, y, args.k)
            errs.append(abs(overlap(cs_vector(y, rep), cs_vector(x, rep)) - ref) / abs(ref))
        print(f"{n:>6} " + " ".join(f"{e:<12.2e}" for e in errs))


if __name__ == "__main__":
    main()
