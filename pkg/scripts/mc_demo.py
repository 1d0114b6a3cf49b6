"""Monte Carlo estimates against exact values, with shot count scaling."""

import argparse

from partel.hilbert import bloch_state
from partel.montecarlo import ShotConfig, mc_partial_teleport
from partel.protocols import partial_teleport


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r", type=float, default=1 / 3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    psi = bloch_state(1.0, 0.5)
    exact = partial_teleport(psi, args.r)
    print(f"exact F_S={exact.fidelity_s:.6f} P={exact.success_probability:.6f}")
    for shots in (10**3, 10**4, 10**5, 10**6):
        est = mc_partial_teleport(psi, ShotConfig(shots, args.seed, args.r))
        z = (est.fidelity_s.mean - exact.fidelity_s) / est.fidelity_s.std_error
        print(f"{shots:>8d}  F_S={est.fidelity_s.mean:.6f} +- {est.fidelity_s.std_error:.6f} (z={z:+.2f})"
              f"  P={est.success.mean:.6f}")


if __name__ == "__main__":
    main()
