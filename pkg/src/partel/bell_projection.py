"""Conditional map of an unbalanced beam splitter acting as a partial Bell measurement.

Post-selecting on the two photons leaving the splitter in separate ports acts
on their polarization as

    Pi(R) = (1 - 2R) * 1 + 2R * |Psi-><Psi-|,     0 <= R <= 1/2,

which has eigenvalue 1 on the singlet and ``1 - 2R`` on the triplet. It is
the Kraus element of the success outcome; bunched events form the failure
outcome ``1 - Pi^dag Pi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hilbert import NORM_TOL, PureState, apply_two_qubit, orthogonal, singlet, tensor

R_MAX = 0.5


def check_reflectivity(r: float) -> float:
    """Return ``r`` as a float, raising if outside ``[0, 1/2]``."""
    r = float(r)
    if not np.isfinite(r) or r < 0.0 or r > R_MAX:
        raise ValueError(f"reflectivity must lie in [0, 1/2], got {r}")
    return r


@dataclass(frozen=True)
class ConditionalMap:
    """A 4x4 measurement operator with spectral norm at most one."""

    matrix: np.ndarray = field(repr=False)
    label: str = ""

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"conditional map must be 4x4, got {m.shape}")
        if np.linalg.norm(m, 2) > 1.0 + NORM_TOL:
            raise ValueError("operator norm exceeds one; not a measurement element")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


_SINGLET_PROJ = np.outer(singlet().amplitudes, singlet().amplitudes.conj())


def build_projector(r: float) -> ConditionalMap:
    r = check_reflectivity(r)
    m = (1 - 2 * r) * np.eye(4) + 2 * r * _SINGLET_PROJ
    return ConditionalMap(m, label=f"Pi-({r:g})")


def failure_complement(r: float) -> ConditionalMap:
    """POVM element ``1 - Pi^dag Pi`` of the discarded (bunched) outcome."""
    p = build_projector(r).matrix
    return ConditionalMap(np.eye(4) - p.conj().T @ p, label=f"fail({r:g})")


def check_pair_action(r: float, psi: PureState, tol: float = NORM_TOL) -> bool:
    """Check the beam-splitter action on the ``psi``-adapted pair basis.

    ``|psi psi>  -> (T - R)|psi psi>`` and
    ``|psi psi_perp> -> T|psi psi_perp> - R|psi_perp psi>`` with ``T = 1 - R``.
    """
    r = check_reflectivity(r)
    pi = build_projector(r).matrix
    perp = orthogonal(psi)
    same = tensor(psi, psi).amplitudes
    mixed = tensor(psi, perp).amplitudes
    swapped = tensor(perp, psi).amplitudes
    t = 1 - r
    ok_same = np.allclose(pi @ same, (t - r) * same, rtol=0, atol=tol)
    ok_mixed = np.allclose(pi @ mixed, t * mixed - r * swapped, rtol=0, atol=tol)
    return bool(ok_same and ok_mixed)


def apply_conditional(state: PureState, pair, r: float) -> tuple[PureState, float]:
    """Apply ``Pi(R)`` to ``pair`` of a normalized state.

    Returns the unnormalized success branch and its probability.
    """
    if not state.normalized:
        raise ValueError("apply_conditional expects a normalized state")
    branch = apply_two_qubit(state, build_projector(r), pair)
    return branch, min(branch.norm_squared, 1.0)
