"""N -> N+1 cloning chain against the optimal universal cloner."""

import argparse

from partel.bounds import optimal_fidelity_chain
from partel.hilbert import haar_random_qubit
from partel.protocols import clone_chain


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=8)
    args = ap.parse_args()

    psi = haar_random_qubit(3)
    print(f"{'N':>3} {'F_clone':>9} {'optimal':>9} {'F_anti':>9} {'P_success':>10}")
    for n in range(1, args.nmax + 1):
        rep = clone_chain(psi, n)
        f = rep.per_mode_fidelities[0][1]
        print(f"{n:3d} {f:9.6f} {optimal_fidelity_chain(n):9.6f} {rep.fidelity_i:9.6f} "
              f"{rep.success_probability:10.6f}")


if __name__ == "__main__":
    main()
