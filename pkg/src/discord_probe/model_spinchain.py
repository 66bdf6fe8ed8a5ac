"""Variable-range transverse Ising chain: exact diagonalization with parity
bookkeeping, single-spin detection on ground and thermal states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import measures
from .measures import BasisGrid
from .protocol import EvolutionSpec, TimeGrid, WitnessSeries, run_minimized_detection
from .states import BipartiteState
from .tensor import BipartitionDims, kron

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_EYE2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class ChainParams:
    n_spins: int = 8
    alpha: float = 1.0
    j0: float = 1.0
    b_field: float = 1.0
    kT: float = 0.0

    def __post_init__(self):
        if not 2 <= self.n_spins <= 12:
            raise ValueError("chain length must lie in [2, 12]")
        if self.alpha <= 0 or self.j0 <= 0:
            raise ValueError("alpha and J0 must be positive")

    @property
    def dims(self) -> BipartitionDims:
        return BipartitionDims(2, 2 ** (self.n_spins - 1))

    def default_time_grid(self, n: int = 400) -> TimeGrid:
        return TimeGrid.linear(20.0 / self.j0, n)


def _site_op(op: np.ndarray, site: int, n: int) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for j in range(n):
        out = kron(out, op if j == site else _EYE2)
    return out


def build_chain_hamiltonian(p: ChainParams) -> np.ndarray:
    """H = -sum_{i<j} J0/|i-j|^alpha sx_i sx_j - B sum_i sy_i, open chain.

    Spin 0 (leftmost, slow index) is the accessible subsystem A.
    """
    n = p.n_spins
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    sx = [_site_op(_SX, i, n) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            h -= p.j0 / abs(i - j) ** p.alpha * (sx[i] @ sx[j])
    for i in range(n):
        h -= p.b_field * _site_op(_SY, i, n)
    return h


def parity_operator(n: int) -> np.ndarray:
    """Global pi-rotation about y, fixed to the involution (x) sigma_y."""
    out = np.array([[1.0 + 0j]])
    for _ in range(n):
        out = kron(out, _SY)
    return out


@dataclass(frozen=True)
class SpectralData:
    energies: np.ndarray
    states: np.ndarray    # eigenvectors as columns
    parities: np.ndarray  # +-1 per eigenstate


def spectral(p: ChainParams) -> SpectralData:
    """Eigendecomposition with definite parity per eigenvector; degenerate
    energy blocks are rotated to diagonalize the parity operator."""
    h = build_chain_hamiltonian(p)
    w, v = np.linalg.eigh(h)
    par = parity_operator(p.n_spins)
    scale = max(np.max(np.abs(w)), 1.0)
    # group numerically degenerate blocks
    splits = np.where(np.diff(w) > 1e-9 * scale)[0] + 1
    blocks = np.split(np.arange(len(w)), splits)
    for idx in blocks:
        if len(idx) > 1:
            sub = v[:, idx]
            pw, pv = np.linalg.eigh(sub.conj().T @ par @ sub)
            v[:, idx] = sub @ pv
    parities = np.sign(np.real(np.einsum("ia,ij,ja->a", v.conj(), par, v)))
    # purify: project each vector onto its dominant parity sector, removing
    # the cross-sector contamination eigh leaves on quasi-degenerate doublets
    v = 0.5 * (v + (par @ v) * parities[None, :])
    v = v / np.linalg.norm(v, axis=0)
    return SpectralData(w, v, parities)


def evolution(p: ChainParams, spec: SpectralData | None = None) -> EvolutionSpec:
    evo = EvolutionSpec(hamiltonian=build_chain_hamiltonian(p))
    if spec is not None:
        evo._spectral = (spec.energies, spec.states)
    return evo


def _dephased_components(spec: SpectralData, n: int):
    """Ground state and its sigma_y^(1)-flipped partner: the y-dephased
    ground state is the even mixture of the two (rank 2)."""
    psi0 = spec.states[:, 0]
    chi = _site_op(_SY, 0, n) @ psi0
    return psi0, chi


def _qubit_marginal(vec: np.ndarray) -> np.ndarray:
    r = vec.reshape(2, -1)
    return r @ r.conj().T


@dataclass(frozen=True)
class GroundStateResult:
    series: WitnessSeries
    d_mag: np.ndarray        # magnetization form (1/2)|m_y(t) - m_y(0)|
    negativity: float
    gap: float


def ground_state_detection(p: ChainParams, grid: TimeGrid | None = None,
                           spec: SpectralData | None = None) -> GroundStateResult:
    """Dephase spin 1 along y, evolve, and record the single-spin distance
    both as a trace distance and through the y-magnetization."""
    spec = spec or spectral(p)
    grid = grid or p.default_time_grid()
    gap = float(spec.energies[1] - spec.energies[0])
    if gap <= 1e-10:
        raise ValueError("ground state is (numerically) degenerate")
    psi0, chi = _dephased_components(spec, p.n_spins)
    neg = measures.negativity(
        BipartiteState(np.outer(psi0, psi0.conj()), p.dims)
    )
    m0 = _qubit_marginal(psi0)
    chi_t = spec.states.conj().T @ chi
    phases = np.exp(-1j * np.outer(spec.energies, grid.samples))
    evolved = spec.states @ (phases * chi_t[:, None])  # (dim, T)
    d_t = np.empty(len(grid.samples))
    d_mag = np.empty(len(grid.samples))
    my0 = float(np.trace(m0 @ _SY).real)
    for ti in range(len(grid.samples)):
        mc = _qubit_marginal(evolved[:, ti])
        # rho'_A(t) = (m0 + mc)/2; undephased marginal stays m0
        diff = 0.5 * (m0 - mc)
        d_t[ti] = 0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff)))
        my_t = 0.5 * (my0 + float(np.trace(mc @ _SY).real))
        d_mag[ti] = 0.5 * abs(my_t - my0)
    series = WitnessSeries(grid.samples, d_t, bound_ref=neg)
    return GroundStateResult(series, d_mag, neg, gap)


def excitation_overlaps(p: ChainParams, spec: SpectralData | None = None):
    """Populations c_j of the y-dephased ground state in the energy
    eigenbasis, with parities."""
    spec = spec or spectral(p)
    psi0, chi = _dephased_components(spec, p.n_spins)
    a = spec.states.conj().T @ psi0
    b = spec.states.conj().T @ chi
    c = 0.5 * (np.abs(a) ** 2 + np.abs(b) ** 2)
    return list(zip(spec.energies, c, spec.parities))


def autocorrelation(p: ChainParams, grid: TimeGrid | None = None,
                    spec: SpectralData | None = None):
    """Global autocorrelation of the dephased ground state, from the
    coherence sums in the energy eigenbasis."""
    spec = spec or spectral(p)
    grid = grid or p.default_time_grid()
    psi0, chi = _dephased_components(spec, p.n_spins)
    a = spec.states.conj().T @ psi0
    b = spec.states.conj().T @ chi
    rho_t = 0.5 * (np.outer(a, a.conj()) + np.outer(b, b.conj()))
    purity = float(np.sum(np.abs(rho_t) ** 2))
    coh = np.abs(rho_t) ** 2
    c_t = np.empty(len(grid.samples))
    phases = np.exp(-1j * np.outer(spec.energies, grid.samples))
    for ti in range(len(grid.samples)):
        ph = phases[:, ti]
        val = np.einsum("ji,i,j->", coh, ph, ph.conj(), optimize=True)
        if abs(val.imag) > 1e-10:
            raise RuntimeError("autocorrelation picked up an imaginary part")
        c_t[ti] = val.real / purity
    return list(zip(grid.samples, c_t))


def autocorrelation_direct(p: ChainParams, t: float,
                           spec: SpectralData | None = None) -> float:
    """Direct-definition evaluation Tr{rho U rho U^dag} / purity."""
    spec = spec or spectral(p)
    psi0, chi = _dephased_components(spec, p.n_spins)
    rho = 0.5 * (np.outer(psi0, psi0.conj()) + np.outer(chi, chi.conj()))
    u = (spec.states * np.exp(-1j * spec.energies * t)) @ spec.states.conj().T
    purity = float(np.trace(rho @ rho).real)
    return float(np.trace(rho @ u @ rho @ u.conj().T).real / purity)


def gibbs_state(p: ChainParams, spec: SpectralData | None = None) -> BipartiteState:
    if p.kT <= 0:
        raise ValueError("Gibbs state needs kT > 0")
    spec = spec or spectral(p)
    w = np.exp(-(spec.energies - spec.energies[0]) / p.kT)
    w = w / w.sum()
    rho = (spec.states * w) @ spec.states.conj().T
    return BipartiteState(rho, p.dims)


def thermal_detection(p: ChainParams, grid: TimeGrid | None = None,
                      bases: BasisGrid | None = None,
                      spec: SpectralData | None = None):
    """Minimized witness series and minimal dephasing disturbance of the
    Gibbs state. Returns (series, d_min_bound)."""
    spec = spec or spectral(p)
    grid = grid or p.default_time_grid()
    state = gibbs_state(p, spec)
    series = run_minimized_detection(state, evolution(p, spec), grid, bases)
    return series, series.bound_ref
