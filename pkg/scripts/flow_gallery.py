"""Riccati flows of elliptic, parabolic and hyperbolic Hamiltonians.

Writes one CSV per flow and prints how close each comes to the unit circle.
For a hyperbolic flow 1 - |w|^2 should decay like exp(-2 lam t) with
lam = sqrt(|eps+|^2 - eps0^2 / 4); the fitted rate is printed next to it.
"""
import argparse
import math
from pathlib import Path

import numpy as np

from jacobi_cs.dynamics import HamiltonianCoeffs, integrate_flow

FLOWS = {
    "elliptic": HamiltonianCoeffs(eps_a=0.3, eps_0=1.0, eps_plus=0.2),
    "parabolic": HamiltonianCoeffs(eps_0=1.0, eps_plus=0.5),
    "hyperbolic": HamiltonianCoeffs(eps_a=0.2j, eps_0=0.4, eps_plus=0.6),
}


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", type=Path, default=Path("flows"))
    p.add_argument("--t1", type=float, default=10.0)
    p.add_argument("--dt", type=float, default=1e-3)
    args = p.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)

    for name, H in FLOWS.items():
        tr = integrate_flow((0.2, 0.3j), H, (0, args.t1), dt=args.dt, sample_every=20)
        (args.out / f"{name}.csv").write_text(tr.to_csv())
        gap = 1 - np.abs(tr.w) ** 2
        line = f"{name:<11} max|w| = {tr.max_abs_w:.12f}  event = {tr.event}"
        disc = abs(H.eps_plus) ** 2 - H.eps_0.real ** 2 / 4
        if disc > 0:
            tail = tr.t > tr.t[-1] / 2
            rate = -np.polyfit(tr.t[tail], np.log(gap[tail]), 1)[0] / 2
            line += f"  decay rate {rate:.6f} vs {math.sqrt(disc):.6f}"
        print(line)


if __name__ == "__main__":
    main()
