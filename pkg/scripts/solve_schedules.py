"""Equal-fidelity schedules for sequential distribution to M parties."""

import argparse

from partel.bounds import classical_baselines, solve_symmetric_schedule
from partel.hilbert import bloch_state
from partel.protocols import sequential_teleport


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mmax", type=int, default=6)
    args = ap.parse_args()

    psi = bloch_state(1.0, 0.5)
    print(f"{'M':>2} {'F':>9} {'swap':>9} {'optimal':>9}  schedule")
    for m in range(2, args.mmax + 1):
        sched = solve_symmetric_schedule(m)
        f = sequential_teleport(psi, sched).per_mode_fidelities[0][1]
        swap, opt = classical_baselines(m)
        print(f"{m:2d} {f:9.6f} {swap:9.6f} {opt:9.6f}  " + ", ".join(f"{r:.6f}" for r in sched))


if __name__ == "__main__":
    main()
