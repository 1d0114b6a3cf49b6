"""Dense state vectors over small qubit registers.

Conventions
-----------
* ``|V> = |0>``, ``|H> = |1>``.
* Qubit 0 is the most significant bit of the basis index, so the amplitude of
  ``|q0 q1 ... q_{n-1}>`` sits at ``int("q0q1...", 2)``.
* States are compared through overlaps and fidelities only, never amplitude by
  amplitude (global phase is meaningless here).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAX_QUBITS = 14

NORM_TOL = 1e-12
DM_TOL = 1e-10


@dataclass(frozen=True)
class QubitRef:
    """A register position tagged with the optical mode it stands for.

    ``role`` is one of ``"S"``, ``"I"``, ``"Sprime"`` or ``"S<n>"`` for the
    n-th replica of a cloning chain; free-form labels are allowed for
    auxiliary qubits (e.g. a purification partner).
    """

    index: int
    role: str = ""

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"qubit index must be nonnegative, got {self.index}")


def _index(q) -> int:
    return q.index if isinstance(q, QubitRef) else int(q)


@dataclass(frozen=True)
class PureState:
    """Amplitude vector of length ``2**num_qubits``.

    ``normalized`` is False for post-selected branch states; their squared norm
    is the branch probability and must be normalized explicitly with
    :func:`normalize`.
    """

    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)
    normalized: bool = True

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if self.num_qubits < 1:
            raise ValueError("a state needs at least one qubit")
        if amps.size != 2**self.num_qubits:
            raise ValueError(
                f"expected {2**self.num_qubits} amplitudes, got {amps.size}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        if self.normalized and abs(np.vdot(amps, amps).real - 1.0) > NORM_TOL:
            raise ValueError("state flagged normalized but its norm is not 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per qubit."""
        return self.amplitudes.reshape((2,) * self.num_qubits)


@dataclass(frozen=True)
class DensityMatrix:
    """Density matrix of one or more qubits (dimension a power of two)."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        dim = m.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise ValueError(f"dimension {dim} is not a power of two")
        if np.max(np.abs(m - m.conj().T)) > DM_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > DM_TOL:
            raise ValueError("density matrix trace is not 1")
        if np.linalg.eigvalsh(m).min() < -DM_TOL:
            raise ValueError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def bloch_vector(self) -> np.ndarray:
        if self.dim != 2:
            raise ValueError("Bloch vector is defined for a single qubit")
        m = self.matrix
        return np.array([2 * m[0, 1].real, -2 * m[0, 1].imag, (m[0, 0] - m[1, 1]).real])


# -- constructors -------------------------------------------------------------


def qubit(alpha: complex, beta: complex) -> PureState:
    """Single-qubit state ``alpha|V> + beta|H>`` (normalized on the fly)."""
    v = np.array([alpha, beta], dtype=complex)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("zero vector is not a state")
    return PureState(1, v / n)


def bloch_state(theta: float, phi: float) -> PureState:
    """``cos(theta/2)|V> + exp(i phi) sin(theta/2)|H>``."""
    return PureState(1, [np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def basis_state(bits: str) -> PureState:
    """Computational basis state from a bit string, e.g. ``"010"``."""
    amps = np.zeros(2 ** len(bits), dtype=complex)
    amps[int(bits, 2)] = 1.0
    return PureState(len(bits), amps)


def singlet() -> PureState:
    """``(|VH> - |HV>)/sqrt(2)``."""
    return PureState(2, np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2))


def haar_random_qubit(seed: int) -> PureState:
    """Uniformly distributed point on the Bloch sphere, fixed by ``seed``."""
    rng = np.random.default_rng(seed)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return PureState(1, v / np.linalg.norm(v))


def orthogonal(psi: PureState) -> PureState:
    """The state ``(-beta*, alpha*)`` orthogonal to ``psi = (alpha, beta)``."""
    if psi.num_qubits != 1:
        raise ValueError("orthogonal() takes a single-qubit state")
    a, b = psi.amplitudes
    return PureState(1, [-np.conj(b), np.conj(a)], normalized=psi.normalized)


# -- operations ---------------------------------------------------------------


def tensor(a: PureState, b: PureState, max_qubits: int = MAX_QUBITS) -> PureState:
    """Joint state on the concatenated register, ``a`` occupying the high bits."""
    n = a.num_qubits + b.num_qubits
    if n > max_qubits:
        raise ValueError(f"register of {n} qubits exceeds the limit of {max_qubits}")
    return PureState(
        n, np.kron(a.amplitudes, b.amplitudes), normalized=a.normalized and b.normalized
    )


def normalize(state: PureState) -> PureState:
    n2 = state.norm_squared
    if n2 <= 0.0:
        raise ValueError("cannot normalize a zero-probability branch")
    return PureState(state.num_qubits, state.amplitudes / np.sqrt(n2))


def _as_matrix(op) -> np.ndarray:
    return np.asarray(getattr(op, "matrix", op), dtype=complex)


def apply_operator(state: PureState, op, targets) -> PureState:
    """Apply a ``2^k x 2^k`` operator to the qubits ``targets`` (in that order).

    The result is flagged unnormalized; its squared norm is the branch weight
    relative to the input.
    """
    idx = [_index(q) for q in targets]
    k = len(idx)
    n = state.num_qubits
    if len(set(idx)) != k:
        raise ValueError(f"target qubits must be distinct, got {idx}")
    if any(i < 0 or i >= n for i in idx):
        raise ValueError(f"target qubits {idx} out of range for {n} qubits")
    m = _as_matrix(op)
    if m.shape != (2**k, 2**k):
        raise ValueError(f"operator shape {m.shape} does not act on {k} qubit(s)")
    t = np.tensordot(m.reshape((2,) * (2 * k)), state.tensor(), axes=(range(k, 2 * k), idx))
    t = np.moveaxis(t, range(k), idx)
    return PureState(n, t.reshape(-1), normalized=False)


def apply_two_qubit(state: PureState, op, pair) -> PureState:
    """Embed a 4x4 operator on ``pair``; returns the unnormalized branch."""
    if len(pair) != 2:
        raise ValueError("pair must name exactly two qubits")
    return apply_operator(state, op, pair)


def apply_one_qubit(state: PureState, op, target) -> PureState:
    return apply_operator(state, op, [target])


def expectation(state: PureState, op, targets) -> float:
    """``<state| op |state>`` for a Hermitian ``op`` on ``targets``."""
    out = apply_operator(state, op, targets)
    return float(np.vdot(state.amplitudes, out.amplitudes).real)


def partial_trace(state: PureState | DensityMatrix, keep) -> DensityMatrix:
    """Reduced density matrix of the single qubit ``keep``."""
    i = _index(keep)
    n = state.num_qubits
    if i < 0 or i >= n:
        raise ValueError(f"qubit {i} out of range for {n} qubits")
    if isinstance(state, DensityMatrix):
        t = state.matrix.reshape((2**i, 2, 2 ** (n - i - 1)) * 2)
        rho = np.einsum("aibajb->ij", t)
    else:
        if not state.normalized:
            raise ValueError("normalize a branch state before tracing it")
        t = state.amplitudes.reshape(2**i, 2, 2 ** (n - i - 1))
        rho = np.einsum("aib,ajb->ij", t, t.conj())
    return DensityMatrix(rho)


def fidelity(pure: PureState, rho: DensityMatrix) -> float:
    """``<pure| rho |pure>``."""
    if pure.num_qubits != rho.num_qubits:
        raise ValueError(
            f"dimension mismatch: {pure.num_qubits}-qubit state vs "
            f"{rho.num_qubits}-qubit density matrix"
        )
    v = pure.amplitudes
    f = np.vdot(v, rho.matrix @ v)
    assert abs(f.imag) < NORM_TOL
    return float(min(max(f.real, 0.0), 1.0))


def overlap(a: PureState, b: PureState) -> float:
    """``|<a|b>|^2``."""
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)
