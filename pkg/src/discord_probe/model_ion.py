"""Trapped-ion blue-sideband model: thermal preparation, qubit-phonon
coupling and the closed-form local witness signals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre

from .protocol import EvolutionSpec, TimeGrid, WitnessSeries, run_local_detection
from .states import (
    BipartiteState,
    computational_basis,
    fock_cutoff,
    thermal_fock_state,
)
from .tensor import BipartitionDims, kron


@dataclass(frozen=True)
class IonParams:
    omega: float = 1.0
    eta: float = 0.05
    nbar: float = 0.0
    n_max: int | None = None
    lamb_dicke_limit: bool = True

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError("Lamb-Dicke parameter must be positive")
        if self.nbar < 0:
            raise ValueError("mean phonon number must be nonnegative")
        if self.n_max is None:
            object.__setattr__(self, "n_max", fock_cutoff(self.nbar))

    def rabi(self, n: np.ndarray) -> np.ndarray:
        """Sideband Rabi frequency for the |g,n> <-> |e,n+1> transition."""
        n = np.asarray(n, dtype=float)
        if self.lamb_dicke_limit:
            return np.sqrt(n + 1) * self.eta * self.omega
        lag = eval_genlaguerre(n.astype(int), 1, self.eta**2)
        return self.eta * np.exp(-self.eta**2) * lag / np.sqrt(n + 1) * self.omega

    @property
    def omega0(self) -> float:
        return float(self.rabi(np.array(0.0)))

    def populations(self) -> np.ndarray:
        return np.diag(thermal_fock_state(self.nbar, self.n_max)).real

    @property
    def dims(self) -> BipartitionDims:
        return BipartitionDims(2, self.n_max + 1)


def build_hamiltonian(p: IonParams) -> np.ndarray:
    """Coupling |g,n> <-> |e,n+1> with matrix element Omega_n / 2 (hbar = 1).

    Qubit ordering: index 0 = |g>, index 1 = |e>; A = qubit, B = phonons.
    """
    nb = p.n_max + 1
    h = np.zeros((2 * nb, 2 * nb), dtype=complex)
    for n in range(p.n_max):
        g_n = n           # |g, n>
        e_np1 = nb + n + 1  # |e, n+1>
        elem = 0.5 * p.rabi(np.array(float(n)))
        h[e_np1, g_n] = elem
        h[g_n, e_np1] = elem
    return h


def prepare_state(p: IonParams, t0: float) -> BipartiteState:
    """Blue-sideband pulse of duration t0 on |g><g| (x) thermal motion."""
    if t0 < 0:
        raise ValueError("preparation time must be nonnegative")
    rho0 = kron(np.diag([1.0, 0.0]), thermal_fock_state(p.nbar, p.n_max))
    evo = evolution(p)
    return BipartiteState(evo.evolve_state(rho0, t0), p.dims)


def evolution(p: IonParams) -> EvolutionSpec:
    return EvolutionSpec(hamiltonian=build_hamiltonian(p))


def analytic_local_distance(p: IonParams, t0: float, t1: float) -> float:
    """(1/2) |sum_n p_n sin(Omega_n t0) sin(Omega_n t1)|."""
    pn = p.populations()
    om = p.rabi(np.arange(len(pn)))
    return 0.5 * abs(float(np.sum(pn * np.sin(om * t0) * np.sin(om * t1))))


def analytic_disturbance(p: IonParams, t0: float) -> float:
    """sum_n p_n |sin(Omega_n t0 / 2) cos(Omega_n t0 / 2)|."""
    pn = p.populations()
    om = p.rabi(np.arange(len(pn)))
    return float(np.sum(pn * np.abs(np.sin(om * t0 / 2) * np.cos(om * t0 / 2))))


def simulated_local_distance(p: IonParams, t0: float, t1_grid: TimeGrid) -> WitnessSeries:
    """Full-matrix protocol: prepare at t0, dephase the qubit in {|g>,|e>},
    evolve and compare marginals over the detection grid."""
    state = prepare_state(p, t0)
    return run_local_detection(
        state, evolution(p), t1_grid, basis=computational_basis(2)
    )


def signal_vs_temperature(p: IonParams, nbar_list) -> list:
    """Closed-form signal at t0 = t1 = pi / (2 Omega_0) per mean phonon
    number."""
    out = []
    for nbar in nbar_list:
        q = IonParams(
            omega=p.omega, eta=p.eta, nbar=float(nbar),
            lamb_dicke_limit=p.lamb_dicke_limit,
        )
        t = np.pi / (2 * q.omega0)
        out.append((float(nbar), analytic_local_distance(q, t, t)))
    return out
