"""Dense complex linear algebra over bipartite tensor-product spaces.

Index convention, fixed repo-wide: subsystem A is the slow (leftmost)
tensor factor, i.e. a composite index reads (i_A * d_B + i_B).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-10
UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class BipartitionDims:
    """Dimension split (d_a, d_b) of a bipartite space, A-first."""

    d_a: int
    d_b: int

    def __post_init__(self):
        if self.d_a < 1 or self.d_b < 1:
            raise ValueError("subsystem dimensions must be positive")

    @property
    def total(self) -> int:
        return self.d_a * self.d_b

    def check(self, op: np.ndarray):
        if op.shape != (self.total, self.total):
            raise ValueError(
                f"operator shape {op.shape} does not match split "
                f"{self.d_a}x{self.d_b}"
            )


def require_square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def require_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = require_square(m)
    dev = np.max(np.abs(m - m.conj().T))
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return m


def require_unitary(m: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    m = require_square(m)
    dev = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
    if dev > tol:
        raise ValueError(f"matrix is not unitary (max deviation {dev:.3e})")
    return m


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product with A as the slow index."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace_b(rho: np.ndarray, dims: BipartitionDims) -> np.ndarray:
    rho = require_square(rho)
    dims.check(rho)
    r = rho.reshape(dims.d_a, dims.d_b, dims.d_a, dims.d_b)
    return np.trace(r, axis1=1, axis2=3)


def partial_trace_a(rho: np.ndarray, dims: BipartitionDims) -> np.ndarray:
    rho = require_square(rho)
    dims.check(rho)
    r = rho.reshape(dims.d_a, dims.d_b, dims.d_a, dims.d_b)
    return np.trace(r, axis1=0, axis2=2)


def partial_transpose_a(rho: np.ndarray, dims: BipartitionDims) -> np.ndarray:
    rho = require_square(rho)
    dims.check(rho)
    r = rho.reshape(dims.d_a, dims.d_b, dims.d_a, dims.d_b)
    return r.transpose(2, 1, 0, 3).reshape(dims.total, dims.total)


def eig_hermitian(h: np.ndarray):
    """Spectral decomposition h = V diag(w) V^dag, eigenvalues ascending."""
    h = require_hermitian(h)
    w, v = np.linalg.eigh(h)
    return w, v


def trace_norm(x: np.ndarray) -> float:
    """Full trace norm Tr sqrt(X^dag X) (sum of singular values)."""
    x = require_square(x)
    return float(np.sum(np.linalg.svd(x, compute_uv=False)))


def trace_norm_hermitian(x: np.ndarray) -> float:
    """Trace norm of a Hermitian matrix via its eigenvalues."""
    return float(np.sum(np.abs(np.linalg.eigvalsh(x))))


def evolve(rho: np.ndarray, h: np.ndarray, t: float) -> np.ndarray:
    """Unitary conjugation exp(-iht) rho exp(+iht) via spectral decomposition
    (hbar = 1)."""
    rho = require_square(rho)
    w, v = eig_hermitian(h)
    if h.shape != rho.shape:
        raise ValueError("generator and state dimensions differ")
    phase = np.exp(-1j * w * t)
    u = (v * phase) @ v.conj().T
    return u @ rho @ u.conj().T
