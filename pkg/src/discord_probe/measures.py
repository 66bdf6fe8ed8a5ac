"""Distance and discord quantifiers: trace distance, dephasing disturbance,
basis-minimized disturbance, negativity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import (
    BipartiteState,
    ProjectiveBasis,
    dephase,
    local_eigenbasis,
    qubit_basis,
)
from .tensor import (
    kron,
    partial_transpose_a,
    require_hermitian,
    require_square,
    trace_norm_hermitian,
)

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class BasisGrid:
    """Bloch-angle grid over the qubit projective-basis manifold.

    theta runs over [0, pi/2] and phi over [0, 2*pi); the restriction to the
    upper hemisphere removes the antipodal double counting.
    """

    n_theta: int = 60
    n_phi: int = 120
    refine_rounds: int = 6

    def angles(self) -> np.ndarray:
        thetas = np.linspace(0.0, np.pi / 2, self.n_theta)
        phis = np.linspace(0.0, 2 * np.pi, self.n_phi, endpoint=False)
        tt, pp = np.meshgrid(thetas, phis, indexing="ij")
        return np.column_stack([tt.ravel(), pp.ravel()])

    @property
    def spacing(self) -> tuple[float, float]:
        return (np.pi / 2 / max(self.n_theta - 1, 1), 2 * np.pi / self.n_phi)


def bloch_vectors(angles: np.ndarray) -> np.ndarray:
    t, p = angles[:, 0], angles[:, 1]
    return np.column_stack(
        [np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)]
    )


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the trace norm of the Hermitian difference."""
    a, b = require_hermitian(a), require_hermitian(b)
    if a.shape != b.shape:
        raise ValueError("operator dimensions differ")
    return 0.5 * trace_norm_hermitian(a - b)


def hs_distance_sq(a: np.ndarray, b: np.ndarray) -> float:
    """Squared Hilbert-Schmidt distance Tr (a-b)^dag (a-b)."""
    a, b = require_square(a), require_square(b)
    if a.shape != b.shape:
        raise ValueError("operator dimensions differ")
    d = a - b
    return float(np.sum(np.abs(d) ** 2))


def dephasing_disturbance(state: BipartiteState) -> float:
    """Trace distance between the state and its pinching in the eigenbasis
    of the A-marginal. Refuses degenerate marginals."""
    basis, degenerate = local_eigenbasis(state)
    if degenerate:
        raise ValueError(
            "A-marginal spectrum is degenerate; use "
            "minimal_dephasing_disturbance instead"
        )
    return trace_distance(state.rho, dephase(state, basis).rho)


def negativity(state: BipartiteState) -> float:
    """(|rho^Gamma|_1 - 1)/2 with the partial transpose on A."""
    pt = partial_transpose_a(state.rho, state.dims)
    val = 0.5 * (trace_norm_hermitian(pt) - 1.0)
    return max(val, 0.0)


def _sigma_conjugations(state: BipartiteState) -> np.ndarray:
    """A[a, b] = (sigma_a (x) I) rho (sigma_b (x) I) for a qubit probe."""
    eye_b = np.eye(state.dims.d_b)
    s_big = [kron(s, eye_b) for s in _SIGMA]
    d = state.dims.total
    out = np.empty((3, 3, d, d), dtype=complex)
    for a in range(3):
        left = s_big[a] @ state.rho
        for b in range(3):
            out[a, b] = left @ s_big[b]
    return out


def _disturbance_batch(rho: np.ndarray, conj: np.ndarray,
                       ns: np.ndarray, chunk: int = 256) -> np.ndarray:
    """D(n) = (1/4) || rho - N rho N ||_1 for a batch of Bloch axes n."""
    vals = np.empty(len(ns))
    for lo in range(0, len(ns), chunk):
        nn = ns[lo : lo + chunk]
        pinched = np.einsum("ga,gb,abij->gij", nn, nn, conj, optimize=True)
        diff = rho[None, :, :] - pinched
        w = np.linalg.eigvalsh(diff)
        vals[lo : lo + chunk] = 0.25 * np.sum(np.abs(w), axis=1)
    return vals


def _marginal_eigen_angles(state: BipartiteState) -> np.ndarray:
    """Bloch angles of the A-marginal eigenbasis, folded into theta<=pi/2."""
    basis, _ = local_eigenbasis(state)
    v = basis.vectors[:, 0]
    n = np.array(
        [
            2 * (v[0].conjugate() * v[1]).real,
            2 * (v[0].conjugate() * v[1]).imag,
            (abs(v[0]) ** 2 - abs(v[1]) ** 2),
        ]
    )
    if n[2] < 0:
        n = -n
    theta = np.arccos(np.clip(n[2], -1.0, 1.0))
    phi = np.arctan2(n[1], n[0]) % (2 * np.pi)
    return np.array([[theta, phi]])


def minimal_dephasing_disturbance(
    state: BipartiteState, grid: BasisGrid | None = None
):
    """Grid minimum of the basis-dependent dephasing disturbance for a qubit
    probe, with local refinement around the incumbent.

    The eigenbasis of the A-marginal is always included as a candidate, which
    makes the result exact for pure states and never above the plain
    dephasing disturbance. Returns (value, argmin basis).
    """
    if state.dims.d_a != 2:
        raise ValueError("basis-grid minimization is defined for d_A = 2 only")
    grid = grid or BasisGrid()
    conj = _sigma_conjugations(state)
    angles = np.vstack([grid.angles(), _marginal_eigen_angles(state)])
    vals = _disturbance_batch(state.rho, conj, bloch_vectors(angles))
    best = int(np.argmin(vals))
    best_val, best_ang = vals[best], angles[best]

    dt, dp = grid.spacing
    for _ in range(grid.refine_rounds):
        dt, dp = dt / 2, dp / 2
        offs = np.array([(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)])
        cand = best_ang[None, :] + offs * np.array([dt, dp])
        cvals = _disturbance_batch(state.rho, conj, bloch_vectors(cand))
        k = int(np.argmin(cvals))
        if cvals[k] < best_val:
            best_val, best_ang = cvals[k], cand[k]
    return float(best_val), qubit_basis(best_ang[0], best_ang[1])
