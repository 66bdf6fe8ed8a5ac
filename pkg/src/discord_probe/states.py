"""Bipartite states and local channels: dephasing, local unitaries,
Haar-random unitaries, thermal oscillator states."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor import (
    BipartitionDims,
    kron,
    partial_trace_b,
    require_hermitian,
    require_square,
    require_unitary,
)

DEGENERACY_GAP = 1e-8
FOCK_TAIL_TOL = 1e-8


@dataclass(frozen=True)
class BipartiteState:
    """Density operator together with its A-first dimension split."""

    rho: np.ndarray
    dims: BipartitionDims

    def __post_init__(self):
        rho = require_hermitian(self.rho)
        self.dims.check(rho)
        tr = np.trace(rho).real
        if abs(tr - 1.0) > 1e-10:
            raise ValueError(f"state trace {tr} deviates from 1")
        wmin = np.linalg.eigvalsh(rho)[0]
        if wmin < -1e-10:
            raise ValueError(f"state has negative eigenvalue {wmin:.3e}")
        object.__setattr__(self, "rho", rho)

    @property
    def marginal_a(self) -> np.ndarray:
        return partial_trace_b(self.rho, self.dims)

    def purity(self) -> float:
        return float(np.trace(self.rho @ self.rho).real)


@dataclass(frozen=True)
class ProjectiveBasis:
    """Complete orthonormal basis on subsystem A, stored as unitary columns."""

    vectors: np.ndarray

    def __post_init__(self):
        v = require_unitary(self.vectors)
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def projectors(self):
        for i in range(self.dim):
            col = self.vectors[:, i : i + 1]
            yield col @ col.conj().T


def computational_basis(dim: int) -> ProjectiveBasis:
    return ProjectiveBasis(np.eye(dim, dtype=complex))


def qubit_basis(theta: float, phi: float) -> ProjectiveBasis:
    """Qubit basis from Bloch angles of the first basis vector."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    v = np.array([[c, -s * e.conjugate()], [s * e, c]], dtype=complex)
    return ProjectiveBasis(v)


def zero_discord_state(weights, basis_a: ProjectiveBasis, states_b) -> BipartiteState:
    """sum_m p_m |phi_m><phi_m| (x) rho_B^m."""
    weights = np.asarray(weights, dtype=float)
    if abs(weights.sum() - 1.0) > 1e-10 or np.any(weights < -1e-14):
        raise ValueError("weights must form a probability distribution")
    if len(weights) != basis_a.dim or len(states_b) != basis_a.dim:
        raise ValueError("weights / basis / ancilla-state counts must match")
    d_b = require_square(states_b[0]).shape[0]
    rho = np.zeros((basis_a.dim * d_b,) * 2, dtype=complex)
    for p, proj, sb in zip(weights, basis_a.projectors(), states_b):
        sb = require_hermitian(sb)
        if abs(np.trace(sb).real - 1.0) > 1e-10 or np.linalg.eigvalsh(sb)[0] < -1e-10:
            raise ValueError("ancilla states must be valid density operators")
        rho += p * kron(proj, sb)
    return BipartiteState(rho, BipartitionDims(basis_a.dim, d_b))


def dephase(state: BipartiteState, basis: ProjectiveBasis) -> BipartiteState:
    """Local pinching sum_i (Pi_i (x) I) rho (Pi_i (x) I) on subsystem A."""
    if basis.dim != state.dims.d_a:
        raise ValueError("basis dimension does not match subsystem A")
    eye_b = np.eye(state.dims.d_b)
    out = np.zeros_like(state.rho)
    for proj in basis.projectors():
        p = kron(proj, eye_b)
        out += p @ state.rho @ p
    return BipartiteState(out, state.dims)


def dephase_qubit_bloch(state: BipartiteState, n: np.ndarray) -> np.ndarray:
    """Pinching along Bloch axis n for a qubit probe, returned as a raw matrix.

    Uses sum_i Pi_i rho Pi_i = (rho + N rho N)/2 with N = (n.sigma) (x) I.
    """
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    big_n = kron(n[0] * sx + n[1] * sy + n[2] * sz, np.eye(state.dims.d_b))
    return 0.5 * (state.rho + big_n @ state.rho @ big_n)


def local_eigenbasis(state: BipartiteState):
    """Eigenbasis of the A-marginal (eigenvalues descending) and a flag for
    near-degenerate spectra (adjacent gap below 1e-8)."""
    w, v = np.linalg.eigh(state.marginal_a)
    w, v = w[::-1], v[:, ::-1]
    degenerate = bool(np.any(np.abs(np.diff(w)) < DEGENERACY_GAP))
    # fix phases: largest-magnitude component real positive
    for i in range(v.shape[1]):
        k = np.argmax(np.abs(v[:, i]))
        ph = v[k, i] / abs(v[k, i])
        v[:, i] = v[:, i] / ph
    return ProjectiveBasis(v), degenerate


def apply_local_unitary(state: BipartiteState, u_a: np.ndarray) -> BipartiteState:
    u_a = require_unitary(u_a)
    if u_a.shape[0] != state.dims.d_a:
        raise ValueError("unitary dimension does not match subsystem A")
    u = kron(u_a, np.eye(state.dims.d_b))
    return BipartiteState(u @ state.rho @ u.conj().T, state.dims)


def haar_unitary(dim: int, seed: int) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix, deterministic in
    the seed."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z / np.sqrt(2.0))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def fock_cutoff(nbar: float, tail_tol: float = FOCK_TAIL_TOL,
                floor: int = 20, headroom: int = 2) -> int:
    """Smallest cutoff with thermal tail mass below tail_tol, floored at 20,
    plus headroom for sideband-coupling leakage into n+1."""
    if nbar <= 0:
        return floor + headroom
    # tail mass above n is (nbar/(nbar+1))**(n+1)
    n = int(np.ceil(np.log(tail_tol) / np.log(nbar / (nbar + 1.0)))) - 1
    return max(floor, n) + headroom


def thermal_fock_state(nbar: float, n_max: int) -> np.ndarray:
    """Truncated thermal oscillator state, renormalized to unit trace."""
    if nbar < 0:
        raise ValueError("mean occupation must be nonnegative")
    n = np.arange(n_max + 1)
    if nbar == 0:
        p = np.zeros(n_max + 1)
        p[0] = 1.0
    else:
        tail = (nbar / (nbar + 1.0)) ** (n_max + 1)
        if tail >= FOCK_TAIL_TOL:
            raise ValueError(
                f"n_max={n_max} leaves tail mass {tail:.3e} >= {FOCK_TAIL_TOL}"
            )
        # log-space evaluation: nbar**n overflows for hot states
        p = np.exp(n * np.log(nbar) - (n + 1) * np.log(nbar + 1.0))
        p = p / p.sum()
    return np.diag(p).astype(complex)
