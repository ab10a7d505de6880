"""Monte Carlo inner products of low basis functions against the invariant
measure, showing the standard error falling like n^(-1/2)."""
import argparse
import math

import numpy as np

from jacobi_cs import inner_product_quadrature

BASIS = {
    "f00": lambda z, w, k: np.ones_like(z),
    "f10": lambda z, w, k: z,
    "f01": lambda z, w, k: math.sqrt(2 * (k - 0.25)) * w,
    "f20": lambda z, w, k: (z * z + w) / math.sqrt(2),
}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--budgets", type=int, nargs="+", default=[10 ** 4, 10 ** 5, 10 ** 6])
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    k = args.k

    print(f"{'pair':<10} {'samples':>9} {'value':>22} {'stderr':>10} {'dev/sigma':>9}")
    names = list(BASIS)
    for i, a in enumerate(names):
        for b in names[i:]:
            fa = lambda z, w, f=BASIS[a]: f(z, w, k)
            fb = lambda z, w, f=BASIS[b]: f(z, w, k)
            target = 1.0 if a == b else 0.0
            for n in args.budgets:
                r = inner_product_quadrature(fa, fb, k, budget=n, seed=args.seed)
                sig = abs(r.value - target) / r.stderr if r.stderr else 0.0
                print(f"{a},{b:<6} {n:>9} {r.value.real:>+10.5f}{r.value.imag:>+10.5f}j {r.stderr:>10.2e} {sig:>9.2f}")


if __name__ == "__main__":
    main()
