"""No-cloning bounds, classical baselines and the symmetric-schedule solver."""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np

log = logging.getLogger(__name__)


class FidelityPair(NamedTuple):
    f_s: float
    f_sprime: float


class ConvergenceError(RuntimeError):
    """Raised when the schedule solver fails; carries the best point found."""

    def __init__(self, msg, best_schedule, best_residual):
        super().__init__(msg)
        self.best_schedule = best_schedule
        self.best_residual = best_residual


def inequality_residual(f_s: float | FidelityPair, f_sprime: float | None = None) -> float:
    """LHS - RHS of the asymmetric 1->2 cloning inequality.

    ``(1-F_S)(1-F_S') - (1/2 - (1-F_S) - (1-F_S'))**2``; nonnegative for
    every physical cloner, zero on the optimal frontier.
    """
    if f_sprime is None:
        f_s, f_sprime = f_s
    for f in (f_s, f_sprime):
        if not 0.0 <= f <= 1.0:
            raise ValueError(f"fidelity {f} outside [0, 1]")
    e_s, e_sp = 1.0 - f_s, 1.0 - f_sprime
    return e_s * e_sp - (0.5 - e_s - e_sp) ** 2


def optimal_fidelity_chain(n: int) -> float:
    """Fidelity of optimal symmetric N -> N+1 universal cloning."""
    if n < 1:
        raise ValueError("need at least one replica")
    return ((n + 1) ** 2 + n) / ((n + 1) * (n + 2))


def classical_baselines(m: int) -> tuple[float, float]:
    """(classical-like swap cloner, optimal universal 1 -> M cloner) fidelities."""
    if m < 1:
        raise ValueError("need at least one output")
    return 0.5 * (1 + 1 / m), (2 * m + 1) / (3 * m)


def _fidelity_gaps(schedule) -> np.ndarray:
    from .protocols import sequential_teleport
    from .hilbert import bloch_state

    # Universality makes the probe state irrelevant; any generic state works.
    report = sequential_teleport(bloch_state(1.0, 0.5), tuple(schedule))
    f = np.array([fid for _, fid in report.per_mode_fidelities])
    return f[:-1] - f[1:]


def solve_symmetric_schedule(
    m: int,
    tol: float = 1e-10,
    max_iter: int = 50,
    step: float = 1e-6,
    x0=None,
) -> tuple[float, ...]:
    """Reflectivities ``R_1..R_{M-1}`` giving M clones of equal fidelity.

    Damped Newton iteration on the vector of neighbouring fidelity differences,
    evaluated by the exact simulator. The Jacobian uses central differences
    (one-sided at the box faces) and iterates stay inside ``[0, 1/2]^(M-1)``.
    Raises :class:`ConvergenceError` if ``max |F_k - F_{k+1}| <= tol`` is not
    reached within ``max_iter``.
    """
    if not 2 <= m <= 8:
        raise ValueError(f"m must be in 2..8, got {m}")
    if tol < 1e-12:
        raise ValueError("tol below 1e-12 is not resolvable")
    k = m - 1
    if x0 is None:
        # the last stage always splits equally between two clones (R = 1/3)
        x = np.array([1.0 / (k - j + 2) for j in range(k)])
    else:
        x = np.array(x0, dtype=float)
    lo, hi = 0.0, 0.5
    x = np.clip(x, lo, hi)

    res = _fidelity_gaps(x)
    best = (x.copy(), np.max(np.abs(res)))
    for it in range(max_iter):
        err = np.max(np.abs(res))
        log.debug("iter %d  R=%s  max|gap|=%.3e", it, x, err)
        if err <= tol:
            return tuple(float(v) for v in x)
        jac = np.empty((k, k))
        for j in range(k):
            up, down = x.copy(), x.copy()
            up[j] = min(x[j] + step, hi)
            down[j] = max(x[j] - step, lo)
            jac[:, j] = (_fidelity_gaps(up) - _fidelity_gaps(down)) / (up[j] - down[j])
        try:
            dx = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError:
            dx = -np.linalg.pinv(jac) @ res
        lam = 1.0
        norm0 = np.linalg.norm(res)
        while lam > 1e-6:
            trial = np.clip(x + lam * dx, lo, hi)
            trial_res = _fidelity_gaps(trial)
            if np.linalg.norm(trial_res) < norm0:
                break
            lam *= 0.5
        else:
            break
        x, res = trial, trial_res
        if np.max(np.abs(res)) < best[1]:
            best = (x.copy(), np.max(np.abs(res)))

    err = np.max(np.abs(res))
    if err <= tol:
        return tuple(float(v) for v in x)
    raise ConvergenceError(
        f"schedule solver stalled at max|gap|={best[1]:.3e} (tol {tol:g})",
        tuple(float(v) for v in best[0]),
        float(best[1]),
    )
