"""Partial teleportation protocols simulated on the exact state vector.

Register layouts (qubit 0 first):

* 1 -> 2 teleportation: ``S, I, Sprime``
* N -> N+1 chain:       ``S1 .. SN, I, Sprime``
* sequential M clones:  ``S, I1, Sprime1, I2, Sprime2, ...``

The shared resource is the singlet ``(|VH> - |HV>)/sqrt(2)`` on ``I, Sprime``
unless stated otherwise. Every reported state is conditioned on all beam
splitters succeeding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bell_projection import apply_conditional, check_reflectivity
from .bounds import inequality_residual
from .hilbert import (
    DensityMatrix,
    PureState,
    QubitRef,
    apply_one_qubit,
    fidelity,
    normalize,
    orthogonal,
    partial_trace,
    singlet,
    tensor,
)

ZERO_PROB = 1e-14
MAX_CHAIN = 12
MAX_SEQUENTIAL = 8

_PROJ_V = np.diag([1.0, 0.0])
_PROJ_H = np.diag([0.0, 1.0])


class ZeroProbabilityError(ValueError):
    """A requested conditional outcome cannot occur."""


@dataclass(frozen=True)
class CloneReport:
    """Fidelities and post-selection probability of one protocol run.

    ``fidelity_i`` is the anti-clone's fidelity with the *orthogonal* input
    state. ``per_mode_fidelities`` lists every clone in register order;
    ``error_probabilities`` gives, for every output mode, the population of
    ``Psi_perp`` found there; over a chain these sum to one.
    ``inequality_residual`` refers to the pair ``(fidelity_s, fidelity_sprime)``.
    """

    fidelity_s: float
    fidelity_sprime: float
    fidelity_i: float
    success_probability: float
    inequality_residual: float
    per_mode_fidelities: tuple[tuple[str, float], ...] = ()
    error_probabilities: tuple[tuple[str, float], ...] = ()
    joint: PureState | None = field(default=None, repr=False, compare=False)


def _check_input(psi: PureState):
    if psi.num_qubits != 1 or not psi.normalized:
        raise ValueError("input must be a normalized single-qubit state")


def check_schedule(schedule: Sequence[float]) -> tuple[float, ...]:
    values = tuple(check_reflectivity(r) for r in schedule)
    if not values:
        raise ValueError("schedule must not be empty")
    return values


def chain_schedule(n: int) -> tuple[float, ...]:
    """Reflectivities ``R_k = 1/(k+2)``, k = 1..n, for symmetric N -> N+1 cloning."""
    return tuple(1.0 / (k + 2) for k in range(1, n + 1))


def _run_stages(state: PureState, stages) -> tuple[PureState, float]:
    """Apply ``(pair, R)`` stages in order, renormalizing; returns state, P."""
    p_total = 1.0
    for pair, r in stages:
        branch, p = apply_conditional(state, pair, r)
        if p < ZERO_PROB:
            raise ZeroProbabilityError(f"beam splitter at {pair} never succeeds")
        state = normalize(branch)
        p_total *= p
    return state, p_total


def _report(joint, psi, clones, anticlones, p) -> CloneReport:
    perp = orthogonal(psi)
    per_mode = []
    errors = []
    for q in clones:
        f = fidelity(psi, partial_trace(joint, q))
        per_mode.append((q.role, f))
        errors.append((q.role, 1.0 - f))
    anti = []
    for q in anticlones:
        f = fidelity(perp, partial_trace(joint, q))
        anti.append(f)
        errors.append((q.role, f))
    f_s, f_sp = per_mode[0][1], per_mode[-1][1]
    return CloneReport(
        fidelity_s=f_s,
        fidelity_sprime=f_sp,
        fidelity_i=anti[0],
        success_probability=p,
        inequality_residual=inequality_residual(f_s, f_sp),
        per_mode_fidelities=tuple(per_mode),
        error_probabilities=tuple(errors),
        joint=joint,
    )


def teleport_joint(psi: PureState, r: float, resource: PureState | None = None) -> tuple[PureState, float]:
    """Normalized post-projection state on ``S, I, Sprime`` and its probability."""
    _check_input(psi)
    r = check_reflectivity(r)
    start = tensor(psi, resource if resource is not None else singlet())
    return _run_stages(start, [((0, 1), r)])


def partial_teleport(psi: PureState, r: float) -> CloneReport:
    """Asymmetric 1 -> 2 cloning at a distance with beam-splitter reflectivity ``r``."""
    joint, p = teleport_joint(psi, r)
    s, i, sp = QubitRef(0, "S"), QubitRef(1, "I"), QubitRef(2, "Sprime")
    return _report(joint, psi, [s, sp], [i], p)


# -- LOCC reversal ------------------------------------------------------------

_BOB_OUTCOMES = ("VH", "HV")
_ALICE_OUTCOMES = ("HV", "VH")


def _conditional_restore(joint, measured, outcome, target, filt):
    state = joint
    for q, bit in zip(measured, outcome):
        state = apply_one_qubit(state, _PROJ_V if bit == "V" else _PROJ_H, q)
    state = apply_one_qubit(state, filt, target)
    p = state.norm_squared
    if p < ZERO_PROB:
        raise ZeroProbabilityError(f"outcome {outcome} with filter has zero probability")
    # the measured qubits are now in a definite basis state; read off the target
    t = state.tensor()
    sel = [slice(None)] * state.num_qubits
    for q, bit in zip(measured, outcome):
        sel[q] = 0 if bit == "V" else 1
    vec = t[tuple(sel)].reshape(-1)
    return PureState(1, vec / np.linalg.norm(vec)), float(p)


def _check_joint(joint: PureState):
    if joint.num_qubits != 3 or not joint.normalized:
        raise ValueError("expected the normalized 3-qubit post-projection state")


def locc_reverse_bob(joint: PureState, outcome: str, r: float) -> tuple[PureState, float]:
    """Restore the input on Bob's qubit after Alice measures S and I in {V, H}.

    ``outcome`` names the detected polarizations of ``(S, I)``. Returns the
    restored state and the probability of that outcome together with the
    filter passing.
    """
    _check_joint(joint)
    r = check_reflectivity(r)
    if outcome not in _BOB_OUTCOMES:
        raise ValueError(f"outcome must be one of {_BOB_OUTCOMES}")
    # Bob holds alpha(1-R)|V> + beta R|H>  (VH)  or  alpha R|V> + beta(1-R)|H>  (HV)
    filt = np.diag([r, 1 - r]) if outcome == "VH" else np.diag([1 - r, r])
    return _conditional_restore(joint, (0, 1), outcome, 2, filt)


def locc_reverse_alice(joint: PureState, outcome: str, r: float) -> tuple[PureState, float]:
    """Restore the input on Alice's clone S after I and Sprime are measured in {V, H}.

    ``outcome`` names the detected polarizations of ``(I, Sprime)``.
    """
    _check_joint(joint)
    r = check_reflectivity(r)
    if outcome not in _ALICE_OUTCOMES:
        raise ValueError(f"outcome must be one of {_ALICE_OUTCOMES}")
    if 1 - 2 * r < ZERO_PROB:
        raise ZeroProbabilityError("R = 1/2 erases Alice's clone; restoration impossible")
    # Alice holds alpha(1-R)|V> + beta(1-2R)|H>  (HV)  or  alpha(1-2R)|V> + beta(1-R)|H>  (VH)
    filt = np.diag([1 - 2 * r, 1 - r]) if outcome == "HV" else np.diag([1 - r, 1 - 2 * r])
    return _conditional_restore(joint, (1, 2), outcome, 0, filt)


# -- multi-stage protocols ----------------------------------------------------


def sequential_teleport(
    psi: PureState, schedule: Sequence[float], max_qubits: int = 2 * MAX_SEQUENTIAL - 1
) -> CloneReport:
    """Distribute ``psi`` over ``len(schedule) + 1`` clones by repeated partial teleportation.

    Stage k sends the clone Bob received at stage k-1 through a fresh singlet.
    """
    _check_input(psi)
    schedule = check_schedule(schedule)
    state = psi
    for _ in schedule:
        state = tensor(state, singlet(), max_qubits=max_qubits)
    # qubit 0 = S; stage k (1-based) uses I_k = 2k - 1, Sprime_k = 2k
    stages = [((0 if k == 1 else 2 * k - 2, 2 * k - 1), r) for k, r in enumerate(schedule, 1)]
    joint, p = _run_stages(state, stages)
    clones = [QubitRef(0, "S")] + [QubitRef(2 * k, f"Sprime{k}") for k in range(1, len(schedule) + 1)]
    anti = [QubitRef(2 * k - 1, f"I{k}") for k in range(1, len(schedule) + 1)]
    return _report(joint, psi, clones, anti, p)


def _chain_joint(psi, n, schedule, partner_role):
    _check_input(psi)
    if not 1 <= n <= MAX_CHAIN:
        raise ValueError(f"n must be in 1..{MAX_CHAIN}, got {n}")
    schedule = chain_schedule(n) if schedule is None else check_schedule(schedule)
    if len(schedule) != n:
        raise ValueError(f"schedule has {len(schedule)} entries, need {n}")
    state = psi
    for _ in range(n - 1):
        state = tensor(state, psi)
    state = tensor(state, singlet())
    i = n
    joint, p = _run_stages(state, [((k, i), r) for k, r in enumerate(schedule)])
    clones = [QubitRef(k, f"S{k + 1}") for k in range(n)]
    return joint, p, clones, QubitRef(i, "I"), QubitRef(n + 1, partner_role)


def clone_chain(psi: PureState, n: int, schedule: Sequence[float] | None = None) -> CloneReport:
    """Symmetric N -> N+1 cloning at a distance from ``n`` replicas of ``psi``.

    With the default schedule every clone, Alice's and Bob's, has the optimal
    N -> N+1 fidelity.
    """
    joint, p, clones, anti, bob = _chain_joint(psi, n, schedule, "Sprime")
    return _report(joint, psi, clones + [bob], [anti], p)


def unot_local(psi: PureState, n: int) -> tuple[DensityMatrix, float]:
    """Local universal-NOT from ``n`` replicas and one maximally mixed port.

    The mixed port is one half of a singlet whose partner is never touched or
    measured. Returns the anti-clone's state and the success probability.
    """
    joint, p, _, anti, _ = _chain_joint(psi, n, None, "purifier")
    return partial_trace(joint, anti), p


# -- time-bin encoding --------------------------------------------------------

# |1,0> -> |V>, |0,1> -> |H>
PHI_PLUS = PureState(2, np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2))
# basis flip followed by a sign on |1,0>; maps PHI_PLUS to the singlet
TIMEBIN_U = np.array([[0, -1], [1, 0]], dtype=complex)


def timebin_equivalence(psi: PureState, r: float, correct: bool = True) -> CloneReport:
    """Partial teleportation of a time-bin qubit through the shared state ``PHI_PLUS``.

    With ``correct`` Bob applies ``TIMEBIN_U`` and all fidelities are taken
    against ``psi``; the result is checked against :func:`partial_teleport`.
    Without it Bob's fidelity is taken against ``TIMEBIN_U psi``
    (``alpha|0,1> - beta|1,0>``).
    """
    joint, p = teleport_joint(psi, r, resource=PHI_PLUS)
    bob = QubitRef(2, "Sprime")
    if correct:
        joint = normalize(apply_one_qubit(joint, TIMEBIN_U, bob))
        report = _report(joint, psi, [QubitRef(0, "S"), bob], [QubitRef(1, "I")], p)
        ref = partial_teleport(psi, r)
        got = (report.fidelity_s, report.fidelity_sprime, report.fidelity_i)
        want = (ref.fidelity_s, ref.fidelity_sprime, ref.fidelity_i)
        if not np.allclose(got, want, rtol=0, atol=1e-10):
            raise RuntimeError(f"time-bin fidelities {got} differ from polarization {want}")
        return report
    transformed = PureState(1, TIMEBIN_U @ psi.amplitudes)
    base = _report(joint, psi, [QubitRef(0, "S"), bob], [QubitRef(1, "I")], p)
    f_sp = fidelity(transformed, partial_trace(joint, bob))
    return CloneReport(
        fidelity_s=base.fidelity_s,
        fidelity_sprime=f_sp,
        fidelity_i=base.fidelity_i,
        success_probability=p,
        inequality_residual=inequality_residual(base.fidelity_s, f_sp),
        per_mode_fidelities=(("S", base.fidelity_s), ("Sprime", f_sp)),
        error_probabilities=(("S", 1 - base.fidelity_s), ("Sprime", 1 - f_sp), ("I", base.fidelity_i)),
        joint=joint,
    )
