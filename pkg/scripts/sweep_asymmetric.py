"""Tabulate the 1 -> 2 trade-off against reflectivity and check it sits on the optimal frontier."""

import argparse

import numpy as np

from partel.hilbert import haar_random_qubit
from partel.protocols import partial_teleport


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=11)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    psi = haar_random_qubit(args.seed)
    print(f"{'R':>6} {'F_S':>8} {'F_Sp':>8} {'F_I':>8} {'P':>8} {'resid':>9}")
    for r in np.linspace(0, 0.5, args.steps):
        rep = partial_teleport(psi, r)
        print(f"{r:6.3f} {rep.fidelity_s:8.5f} {rep.fidelity_sprime:8.5f} {rep.fidelity_i:8.5f} "
              f"{rep.success_probability:8.5f} {rep.inequality_residual:9.1e}")


if __name__ == "__main__":
    main()
