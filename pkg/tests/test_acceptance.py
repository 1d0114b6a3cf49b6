"""Exit criteria, one test per criterion; a PASS/FAIL line per criterion is
printed in the terminal summary.

Three checks are strict xfails. Each asserts a documented value that the
simulation cannot reproduce without contradicting another criterion:

* the chain success probability ``4/((N+1)(N+2))`` is the normalizer of the
  per-mode weights; the probability of all beam splitters succeeding is half
  of it (at N=1 it must equal the 1 -> 2 value 1/3, not 2/3);
* the documented ``chain --n 2`` output inherits that factor of two;
* a 101-point grid on [0, 1/2] has no row at R = 1/3.
"""

import csv
import io
import re
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from partel.bounds import classical_baselines, inequality_residual, solve_symmetric_schedule
from partel.cli import main
from partel.hilbert import bloch_state, fidelity, haar_random_qubit, orthogonal, overlap
from partel.montecarlo import ShotConfig, mc_partial_teleport
from partel.protocols import (
    ZeroProbabilityError,
    clone_chain,
    locc_reverse_alice,
    locc_reverse_bob,
    partial_teleport,
    sequential_teleport,
    teleport_joint,
    timebin_equivalence,
    unot_local,
)

import oracles

RESULTS: list[tuple[str, bool, str]] = []
R_GRID = np.linspace(0, 0.5, 101)
GOLDEN = Path(__file__).parent / "golden"


def record(name, ok, detail=""):
    RESULTS.append((name, bool(ok), detail))
    assert ok, f"{name}: {detail}"


def run_cli(capsys, *argv):
    assert main(list(argv)) == 0
    return capsys.readouterr().out


def strip_version(text):
    return re.sub(r'"version":"[^"]*"', '"version":""', text)


def test_c01_closed_forms():
    states = [haar_random_qubit(1000 + k) for k in range(20)]
    t0 = time.perf_counter()
    worst = 0.0
    for psi in states:
        for r in R_GRID:
            rep = partial_teleport(psi, r)
            got = np.array([rep.fidelity_s, rep.fidelity_sprime, rep.fidelity_i, rep.success_probability])
            want = np.array([oracles.f_s(r), oracles.f_sprime(r), oracles.f_i(r), oracles.p_success(r)])
            worst = max(worst, np.max(np.abs(got - want)))
    dt = time.perf_counter() - t0
    record("C1 closed-form fidelities and P(R)", worst < 1e-10 and dt < 1.0, f"max err {worst:.1e}, {dt:.2f}s")


def test_c02_inequality_saturated():
    worst = max(
        abs(partial_teleport(haar_random_qubit(1000 + k), r).inequality_residual)
        for k in range(20)
        for r in R_GRID
    )
    record("C2 cloning inequality saturated", worst < 1e-10, f"max |residual| {worst:.1e}")


def test_c03_symmetric_point():
    psi = haar_random_qubit(7)
    rep = partial_teleport(psi, 1 / 3)
    rho, _ = unot_local(psi, 1)
    errs = [
        abs(rep.fidelity_s - 5 / 6),
        abs(rep.fidelity_sprime - 5 / 6),
        abs(rep.fidelity_i - 2 / 3),
        abs(fidelity(orthogonal(psi), rho) - 2 / 3),
    ]
    record("C3 R=1/3: F_S=F_S'=5/6, F_UNOT=2/3", max(errs) < 1e-10, f"max err {max(errs):.1e}")


def test_c04_chain():
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(1, 9):
        rep = clone_chain(haar_random_qubit(n), n)
        f_opt = ((n + 1) ** 2 + n) / ((n + 1) * (n + 2))
        worst = max(worst, max(abs(f - f_opt) for _, f in rep.per_mode_fidelities))
        worst = max(worst, abs(rep.fidelity_i - (n + 1) / (n + 2)))
        weights, total = oracles.chain_weights(oracles.chain_default_schedule(n))
        assert total == Fraction(4, (n + 1) * (n + 2))
        probs = dict(rep.error_probabilities)
        worst = max(worst, max(abs(probs[k] - float(w / total)) for k, w in weights.items()))
        worst = max(worst, abs(sum(probs.values()) - 1))
    dt = time.perf_counter() - t0
    record(
        "C4 chain fidelities, anti-clone, per-mode probabilities",
        worst < 1e-10 and dt < 10,
        f"max err {worst:.1e}, {dt:.2f}s",
    )


@pytest.mark.xfail(strict=True, reason="post-selection probability is 2/((N+1)(N+2)); see module docstring")
def test_c04_chain_success_probability():
    errs = []
    for n in range(1, 9):
        p = clone_chain(haar_random_qubit(n), n).success_probability
        errs.append(abs(p - 4 / ((n + 1) * (n + 2))))
    record("C4 chain success probability 4/((N+1)(N+2))", max(errs) < 1e-10, f"max err {max(errs):.2e}")


def test_c05_sequential_three():
    rep = sequential_teleport(haar_random_qubit(5), (3 / 8, 1 / 3))
    f = [x for _, x in rep.per_mode_fidelities]
    err = max(abs(x - 29 / 38) for x in f)
    record("C5 sequential (3/8, 1/3): F=29/38 < 7/9", err < 1e-10 and max(f) < 7 / 9, f"max err {err:.1e}")


def test_c06_solver():
    tol = 1e-10
    (r,) = solve_symmetric_schedule(2, tol)
    s3 = solve_symmetric_schedule(3, tol)
    gaps = []
    for sched in ((r,), s3):
        f = [x for _, x in sequential_teleport(bloch_state(2.2, 4.0), sched).per_mode_fidelities]
        gaps.append(max(f) - min(f))
    ok = abs(r - 1 / 3) < 1e-6 and np.allclose(s3, (3 / 8, 1 / 3), rtol=0, atol=1e-6) and max(gaps) <= tol
    record("C6 schedule solver m=2, m=3", ok, f"R={r:.9f}, {s3}, replay gap {max(gaps):.1e}")


def test_c07_locc_reversal():
    worst, p_min = 0.0, 1.0
    for k in range(50):
        psi = haar_random_qubit(2000 + k)
        for r in (0.1, 1 / 3, 0.45):
            joint, _ = teleport_joint(psi, r)
            for restore, outcomes in ((locc_reverse_bob, ("VH", "HV")), (locc_reverse_alice, ("HV", "VH"))):
                for o in outcomes:
                    state, p = restore(joint, o, r)
                    worst = max(worst, abs(1 - overlap(state, psi)))
                    p_min = min(p_min, p)
    joint, _ = teleport_joint(haar_random_qubit(1), 0.5)
    with pytest.raises(ZeroProbabilityError):
        locc_reverse_alice(joint, "HV", 0.5)
    record("C7 LOCC reversal restores input", worst < 1e-10 and p_min > 0, f"max 1-F {worst:.1e}, min p {p_min:.3g}")


def test_c08_timebin():
    psi = haar_random_qubit(31)
    worst = 0.0
    for r in R_GRID:
        pol = partial_teleport(psi, r)
        tb = timebin_equivalence(psi, r)
        worst = max(worst, abs(tb.fidelity_s - pol.fidelity_s), abs(tb.fidelity_sprime - pol.fidelity_sprime),
                    abs(tb.fidelity_i - pol.fidelity_i))
        raw = timebin_equivalence(psi, r, correct=False)
        worst = max(worst, abs(raw.fidelity_sprime - oracles.f_sprime(r)))
    record("C8 time-bin equivalence", worst < 1e-10, f"max err {worst:.1e}")


def test_c09_monte_carlo():
    psi = bloch_state(1.0, 0.5)
    cfg = ShotConfig(100_000, seed=20240611, schedule=1 / 3)
    t0 = time.perf_counter()
    est = mc_partial_teleport(psi, cfg)
    dt = time.perf_counter() - t0
    targets = [(est.success, 1 / 3), (est.fidelity_s, 5 / 6), (est.fidelity_sprime, 5 / 6), (est.fidelity_i, 2 / 3)]
    z = [abs(e.mean - t) / e.std_error for e, t in targets]
    same = mc_partial_teleport(psi, cfg) == est
    record("C9 Monte Carlo within 3 SE, reproducible", max(z) <= 3 and same and dt < 30,
           f"max |z| {max(z):.2f}, {dt:.2f}s")


def test_c10_baselines():
    f_cl, f_opt = classical_baselines(3)
    record("C10 classical baselines M=3", abs(f_cl - 2 / 3) < 1e-12 and abs(f_opt - 7 / 9) < 1e-12,
           f"({f_cl}, {f_opt})")


def test_c11_golden_sweep(capsys):
    out = run_cli(capsys, "sweep", "--rmin", "0", "--rmax", "0.5", "--steps", "101", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    ok = out == (GOLDEN / "sweep.csv").read_text()
    ok &= rows[0] == ["R", "F_S", "F_Sprime", "F_I", "P_success", "ineq_residual"] and len(rows) == 102
    record("C11 golden: sweep", ok, f"{len(rows) - 1} rows")


@pytest.mark.xfail(strict=True, reason="1/3 is not a point of the 101-step grid on [0, 1/2]")
def test_c11_sweep_row_at_symmetric_point(capsys):
    out = run_cli(capsys, "sweep", "--rmin", "0", "--rmax", "0.5", "--steps", "101", "--format", "csv")
    rs = [float(row[0]) for row in list(csv.reader(io.StringIO(out)))[1:]]
    gap = min(abs(r - 1 / 3) for r in rs)
    record("C11 sweep has a row at R=1/3", gap < 1e-12, f"nearest grid point {gap:.2e} away")


def test_c11_golden_chain(capsys):
    out = run_cli(capsys, "chain", "--n", "2", "--format", "json")
    ok = strip_version(out) == strip_version((GOLDEN / "chain_n2.json").read_text())
    ok &= '"clone_fidelities":[0.916666666667,0.916666666667,0.916666666667]' in out
    ok &= '"anticlone_fidelity":0.75' in out
    record("C11 golden: chain fidelities", ok)


@pytest.mark.xfail(strict=True, reason="documented value is the per-mode normalizer, twice the success probability")
def test_c11_chain_documented_success_probability(capsys):
    out = run_cli(capsys, "chain", "--n", "2", "--format", "json")
    record("C11 chain success_probability 0.333333333333", '"success_probability":0.333333333333' in out,
           re.search(r'"success_probability":[^,}]*', out).group(0))


def test_c11_golden_solve_schedule(capsys):
    out = run_cli(capsys, "solve-schedule", "--m", "3", "--tol", "1e-10")
    ok = strip_version(out) == strip_version((GOLDEN / "solve_schedule_m3.json").read_text())
    ok &= '"schedule":[0.375,0.333333333333]' in out and '"common_fidelity":0.763157894737' in out
    record("C11 golden: solve-schedule", ok)
