"""Shot-based sampling of the post-selected protocols.

Each shot first samples the beam-splitter instrument {success, failure} for
every stage; accepted shots then measure each output mode in its own
``{Psi, Psi_perp}`` basis on an independent copy. Random numbers come from a
counter-based Philox stream keyed by the seed: shot ``i`` reads counter
blocks ``[i*b, (i+1)*b)``, so any subset of shots can be regenerated in
isolation and results do not depend on how the shots are chunked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .bell_projection import build_projector, check_reflectivity, failure_complement
from .hilbert import (
    PureState,
    apply_two_qubit,
    expectation,
    fidelity,
    normalize,
    orthogonal,
    partial_trace,
    singlet,
    tensor,
)
from .protocols import MAX_CHAIN, ZeroProbabilityError, chain_schedule, check_schedule

MAX_MC_CHAIN = 8
CHUNK = 1 << 16
_SNAP = 1e-12


@dataclass(frozen=True)
class ShotConfig:
    shots: int
    seed: int = 0
    schedule: float | Sequence[float] | None = None

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("shots must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    n_accepted: int
    n_total: int


class TeleportEstimates(NamedTuple):
    fidelity_s: Estimate
    fidelity_sprime: Estimate
    fidelity_i: Estimate
    success: Estimate


class ChainEstimates(NamedTuple):
    clones: list[Estimate]
    anticlone: Estimate
    success: Estimate


def shot_uniforms(seed: int, start: int, count: int, draws: int) -> np.ndarray:
    """Uniforms in [0, 1) of shape ``(count, draws)`` for shots ``start..start+count-1``."""
    blocks = -(-draws // 4)
    bitgen = np.random.Philox(key=seed, counter=[start * blocks, 0, 0, 0])
    raw = bitgen.random_raw(count * blocks * 4).reshape(count, blocks * 4)[:, :draws]
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _clip_prob(p: float) -> float:
    # amplitudes carry ~1e-16 rounding; keep certain outcomes certain
    if p < _SNAP:
        return 0.0
    if p > 1.0 - _SNAP:
        return 1.0
    return p


def _bernoulli(hits: int, n: int) -> Estimate:
    if n == 0:
        return Estimate(float("nan"), float("nan"), 0, 0)
    p = hits / n
    return Estimate(p, float(np.sqrt(p * (1 - p) / n)), hits, n)


def _stage_probabilities(state: PureState, stages) -> tuple[list[float], PureState]:
    """Conditional success probability of every stage and the final branch."""
    probs = []
    for pair, r in stages:
        kraus = build_projector(r).matrix
        p_ok = expectation(state, kraus.conj().T @ kraus, pair)
        p_fail = expectation(state, failure_complement(r), pair)
        assert abs(p_ok + p_fail - 1.0) < 1e-10
        probs.append(_clip_prob(p_ok))
        if p_ok < 1e-14:
            raise ZeroProbabilityError(f"stage at {pair} never succeeds")
        state = normalize(apply_two_qubit(state, kraus, pair))
    return probs, state


def _sample(cfg: ShotConfig, stage_p, mode_p) -> tuple[int, np.ndarray]:
    """Returns (accepted count, per-mode hit counts among accepted shots)."""
    k = len(stage_p)
    draws = k + len(mode_p)
    stage_p = np.asarray(stage_p)
    mode_p = np.asarray(mode_p)
    accepted = 0
    hits = np.zeros(len(mode_p), dtype=np.int64)
    for start in range(0, cfg.shots, CHUNK):
        count = min(CHUNK, cfg.shots - start)
        u = shot_uniforms(cfg.seed, start, count, draws)
        ok = np.all(u[:, :k] < stage_p, axis=1)
        accepted += int(ok.sum())
        hits += (u[ok, k:] < mode_p).sum(axis=0)
    return accepted, hits


def mc_partial_teleport(psi: PureState, cfg: ShotConfig) -> TeleportEstimates:
    r = cfg.schedule
    if r is None:
        r = 1 / 3
    elif not np.isscalar(r):
        (r,) = r
    r = check_reflectivity(r)
    start = tensor(psi, singlet())
    (p,), joint = _stage_probabilities(start, [((0, 1), r)])
    modes = [
        _clip_prob(fidelity(psi, partial_trace(joint, 0))),
        _clip_prob(fidelity(psi, partial_trace(joint, 2))),
        _clip_prob(fidelity(orthogonal(psi), partial_trace(joint, 1))),
    ]
    accepted, hits = _sample(cfg, [p], modes)
    if accepted == 0:
        raise ZeroProbabilityError(f"no shot accepted out of {cfg.shots}")
    f_s, f_sp, f_i = (_bernoulli(int(h), accepted) for h in hits)
    return TeleportEstimates(f_s, f_sp, f_i, _bernoulli(accepted, cfg.shots))


def mc_clone_chain(psi: PureState, n: int, cfg: ShotConfig) -> ChainEstimates:
    """Sampled N -> N+1 chain; clones are ordered ``S1..SN, Sprime``."""
    if not 1 <= n <= min(MAX_CHAIN, MAX_MC_CHAIN):
        raise ValueError(f"n must be in 1..{MAX_MC_CHAIN} for sampling, got {n}")
    sched = cfg.schedule
    if sched is None:
        sched = chain_schedule(n)
    elif np.isscalar(sched):
        sched = (sched,)
    sched = check_schedule(sched)
    if len(sched) != n:
        raise ValueError(f"schedule has {len(sched)} entries, need {n}")
    state = psi
    for _ in range(n - 1):
        state = tensor(state, psi)
    state = tensor(state, singlet())
    stage_p, joint = _stage_probabilities(state, [((k, n), r) for k, r in enumerate(sched)])
    modes = [_clip_prob(fidelity(psi, partial_trace(joint, q))) for q in [*range(n), n + 1]]
    modes.append(_clip_prob(fidelity(orthogonal(psi), partial_trace(joint, n))))
    accepted, hits = _sample(cfg, stage_p, modes)
    if accepted == 0:
        raise ZeroProbabilityError(f"no shot accepted out of {cfg.shots}")
    ests = [_bernoulli(int(h), accepted) for h in hits]
    return ChainEstimates(ests[:-1], ests[-1], _bernoulli(accepted, cfg.shots))
