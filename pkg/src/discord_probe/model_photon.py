"""Photonic models: polarization coupled to a discretized Lorentzian
frequency continuum, and the discrete two-channel ancilla state."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .protocol import EvolutionSpec
from .states import BipartiteState
from .tensor import BipartitionDims, kron


@dataclass(frozen=True)
class PhotonParams:
    beta: float = 0.4
    delta_omega: float = 1.0
    omega0: float = 0.0
    t_prep: float = 1.0
    grid_span: float = 640.0   # half-width in units of delta_omega
    grid_points: int = 3201

    def __post_init__(self):
        if not 0.0 <= self.beta <= 0.5:
            raise ValueError("coherence amplitude must lie in [0, 1/2]")
        if self.grid_points < 101 or self.grid_points % 2 == 0:
            raise ValueError("frequency grid needs an odd point count >= 101")
        if self.grid_span < 40:
            raise ValueError("frequency grid span must cover >= 40 half-widths")

    def frequencies(self) -> np.ndarray:
        half = self.grid_span * self.delta_omega
        return np.linspace(self.omega0 - half, self.omega0 + half, self.grid_points)

    def weights(self) -> np.ndarray:
        """Trapezoidal Lorentzian weights, renormalized to unit mass."""
        om = self.frequencies()
        g = (self.delta_omega / np.pi) / (
            self.delta_omega**2 + (om - self.omega0) ** 2
        )
        w = g.copy()
        w[0] *= 0.5
        w[-1] *= 0.5
        return w / w.sum()

    @property
    def dims(self) -> BipartitionDims:
        return BipartitionDims(2, self.grid_points)


def coherence_decay(p: PhotonParams, t: float) -> float:
    """C(t) = sum_w weights * exp(i (w - w0) t); tends to exp(-dw |t|)."""
    x = p.frequencies() - p.omega0
    return float(np.sum(p.weights() * np.exp(1j * x * t)).real)


def build_correlated_state(p: PhotonParams) -> BipartiteState:
    """Post-crystal state: per-frequency 2x2 polarization blocks with
    coherence beta * exp(i (w - w0) t_prep) (initial phase phi = -w0 t)."""
    w = p.weights()
    phase = np.exp(1j * (p.frequencies() - p.omega0) * p.t_prep)
    m = p.grid_points
    rho = np.zeros((2 * m, 2 * m), dtype=complex)
    idx = np.arange(m)
    rho[idx, idx] = 0.5 * w
    rho[m + idx, m + idx] = 0.5 * w
    rho[idx, m + idx] = p.beta * w * phase
    rho[m + idx, idx] = p.beta * w * phase.conj()
    return BipartiteState(rho, p.dims)


def simulated_local_distance_photon(p: PhotonParams, taus: np.ndarray) -> np.ndarray:
    """d(tau) evaluated exactly on the discretized state.

    The dephased-state difference is -beta sum_w w sin(phi_w) sigma_y per
    frequency; the Michelson phase rotates each term by w*tau about z, so the
    local distance is the modulus of a frequency sum.
    """
    x = p.frequencies() - p.omega0
    w = p.weights()
    s = np.sin(x * p.t_prep)
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    # Bloch-plane component: sum_w w sin(phi_w) e^{i w tau} (modulus is basis
    # rotation invariant)
    z = (w * s)[None, :] * np.exp(1j * np.outer(taus, p.frequencies()))
    return p.beta * np.abs(z.sum(axis=1))


def analytic_local_distance_photon(p: PhotonParams, tau: float) -> float:
    """(beta/2) |exp(-dw|t+tau|) - exp(-dw|t-tau|)| (continuum limit)."""
    dw, t = p.delta_omega, p.t_prep
    return (
        0.5
        * p.beta
        * abs(np.exp(-dw * abs(t + tau)) - np.exp(-dw * abs(t - tau)))
    )


def analytic_disturbance_photon(p: PhotonParams) -> float:
    """beta * integral G(w) |sin((w - w0) t)| dw via adaptive quadrature with
    an analytic tail (mean |sin| = 2/pi against the Lorentzian tail mass)."""
    a = p.delta_omega * p.t_prep
    if a == 0.0:
        return 0.0
    cut = 200.0
    # integrate half-period by half-period so |sin| stays smooth per panel
    edges = np.arange(0.0, cut, np.pi / a)
    edges = np.append(edges, cut)
    body = sum(
        quad(lambda x: abs(np.sin(a * x)) / (1.0 + x * x), lo, hi)[0]
        for lo, hi in zip(edges[:-1], edges[1:])
    )
    tail = (2.0 / np.pi) * (np.pi / 2 - np.arctan(cut))
    return float(p.beta * (2.0 / np.pi) * (body + tail))


def michelson_propagator(p: PhotonParams, tau: float, eta_angle: float = 0.0) -> np.ndarray:
    """Closed-form Michelson unitary: phase exp(-i w tau) on the polarization
    axis rotated by eta_angle from V."""
    m = p.grid_points
    ph = np.exp(-1j * p.frequencies() * tau)
    u = np.zeros((2 * m, 2 * m), dtype=complex)
    idx = np.arange(m)
    u[idx, idx] = 1.0
    u[m + idx, m + idx] = ph
    if eta_angle != 0.0:
        c, s = np.cos(eta_angle), np.sin(eta_angle)
        w_rot = kron(np.array([[c, -s], [s, c]]), np.eye(m))
        u = w_rot @ u @ w_rot.conj().T
    return u


def michelson_evolution(p: PhotonParams, eta_angle: float = 0.0) -> EvolutionSpec:
    """Hermitian-generator form of the Michelson imprint (H has eigenvalue w
    on the rotated-V branch), equivalent to michelson_propagator."""
    m = p.grid_points
    h_pol = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
    if eta_angle != 0.0:
        c, s = np.cos(eta_angle), np.sin(eta_angle)
        w_rot = np.array([[c, -s], [s, c]], dtype=complex)
        h_pol = w_rot @ h_pol @ w_rot.conj().T
    h = kron(h_pol, np.diag(p.frequencies()).astype(complex))
    return EvolutionSpec(hamiltonian=h)


@dataclass(frozen=True)
class DiscreteAncillaParams:
    lam: float = 0.5
    theta: float = np.pi / 4

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("mixing weight must lie in [0, 1]")


def build_discrete_state(p: DiscreteAncillaParams) -> BipartiteState:
    """lam |H,0><H,0| + (1 - lam) |theta,1><theta,1| on qubit x qubit."""
    h_vec = np.array([1.0, 0.0], dtype=complex)
    th_vec = np.array([np.cos(p.theta), np.sin(p.theta)], dtype=complex)
    rho = p.lam * kron(np.outer(h_vec, h_vec.conj()), np.diag([1.0, 0.0])) + (
        1 - p.lam
    ) * kron(np.outer(th_vec, th_vec.conj()), np.diag([0.0, 1.0]))
    return BipartiteState(rho, BipartitionDims(2, 2))


def channel_phase_evolution(rate: float = 1.0) -> EvolutionSpec:
    """Relative polarization phase accumulating in momentum channel |1> only."""
    h = kron(np.diag([0.0, rate]).astype(complex), np.diag([0.0, 1.0]))
    return EvolutionSpec(hamiltonian=h)
