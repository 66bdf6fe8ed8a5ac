"""Local detection protocol: dephase-then-evolve witnesses, the basis
minimized variant, the classical-correlation witness and the Haar-averaged
signal estimate."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import measures
from .measures import BasisGrid, bloch_vectors, hs_distance_sq, trace_distance
from .states import (
    BipartiteState,
    ProjectiveBasis,
    apply_local_unitary,
    dephase,
    haar_unitary,
    local_eigenbasis,
)
from .tensor import (
    BipartitionDims,
    eig_hermitian,
    partial_trace_b,
    require_hermitian,
    require_unitary,
)


class WitnessBoundError(RuntimeError):
    """A locally observed distance exceeded its contractivity bound."""


@dataclass(frozen=True)
class TimeGrid:
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 1 or len(s) == 0 or s[0] != 0.0 or np.any(np.diff(s) <= 0):
            raise ValueError("time grid must start at 0 and strictly increase")
        object.__setattr__(self, "samples", s)

    @classmethod
    def linear(cls, t_max: float, n: int) -> "TimeGrid":
        return cls(np.linspace(0.0, t_max, n))


@dataclass
class EvolutionSpec:
    """Time-independent Hermitian generator (hbar = 1) with a spectral cache,
    or an explicit closed-form propagator t -> U(t)."""

    hamiltonian: Optional[np.ndarray] = None
    propagator: Optional[Callable[[float], np.ndarray]] = None
    _spectral: tuple = field(default=None, repr=False, compare=False)
    _prop_checks: int = field(default=0, repr=False, compare=False)

    def __post_init__(self):
        if (self.hamiltonian is None) == (self.propagator is None):
            raise ValueError("provide exactly one of hamiltonian / propagator")
        if self.hamiltonian is not None:
            self.hamiltonian = require_hermitian(self.hamiltonian)

    def spectral(self):
        if self._spectral is None:
            self._spectral = eig_hermitian(self.hamiltonian)
        return self._spectral

    def propagator_at(self, t: float) -> np.ndarray:
        if self.hamiltonian is not None:
            w, v = self.spectral()
            return (v * np.exp(-1j * w * t)) @ v.conj().T
        u = np.asarray(self.propagator(t), dtype=complex)
        if self._prop_checks < 5:
            require_unitary(u)
            if t == 0.0 and np.max(np.abs(u - np.eye(u.shape[0]))) > 1e-10:
                raise ValueError("closed-form propagator violates U(0) = I")
            self._prop_checks += 1
        return u

    def evolve_state(self, rho: np.ndarray, t: float) -> np.ndarray:
        u = self.propagator_at(t)
        return u @ rho @ u.conj().T

    def marginal_series(self, mats, dims: BipartitionDims,
                        times: np.ndarray) -> np.ndarray:
        """A-marginals of U(t) X U(t)^dag for a stack of operators X.

        Returns shape (n_states, n_times, d_A, d_A). The Hermitian-generator
        path works in the energy eigenbasis and never forms the full evolved
        matrices.
        """
        mats = np.asarray(mats, dtype=complex)
        times = np.asarray(times, dtype=float)
        if self.hamiltonian is None:
            out = np.empty(
                (len(mats), len(times), dims.d_a, dims.d_a), dtype=complex
            )
            for ti, t in enumerate(times):
                u = self.propagator_at(t)
                for xi, x in enumerate(mats):
                    out[xi, ti] = partial_trace_b(u @ x @ u.conj().T, dims)
            return out
        w, v = self.spectral()
        d = v.shape[0]
        dims.check(v)
        r = v.reshape(dims.d_a, dims.d_b, d)
        # G[(i,j),(a,b)] couples eigenbasis coherences to marginal entries
        g = np.einsum("ika,jkb->ijab", r, r.conj(), optimize=True)
        phases = np.exp(-1j * np.outer(w, times))  # (d, T)
        out = np.empty((len(mats), len(times), dims.d_a, dims.d_a), dtype=complex)
        for xi, x in enumerate(mats):
            xt = v.conj().T @ x @ v
            c = g * xt[None, None, :, :]
            y = np.einsum("ijab,bt->ijat", c, phases.conj(), optimize=True)
            out[xi] = np.einsum("ijat,at->tij", y, phases, optimize=True)
        return out


@dataclass(frozen=True)
class WitnessSeries:
    """Local trace distances over a time grid and the bound they certify."""

    times: np.ndarray
    d_t: np.ndarray
    bound_ref: Optional[float] = None

    def __post_init__(self):
        d = np.asarray(self.d_t, dtype=float)
        if len(d) != len(self.times):
            raise ValueError("series length mismatch")
        if np.any(d < -1e-12) or np.any(d > 1.0 + 1e-9):
            raise ValueError("trace distances must lie in [0, 1]")
        if self.bound_ref is not None and np.any(d > self.bound_ref + 1e-9):
            raise WitnessBoundError(
                f"local distance {d.max():.3e} exceeds bound "
                f"{self.bound_ref:.3e}"
            )
        object.__setattr__(self, "d_t", d)

    @property
    def d_max(self) -> float:
        return float(np.max(self.d_t))

    @property
    def argmax_time(self) -> float:
        return float(self.times[int(np.argmax(self.d_t))])


def _distances_2x2_quarter(diff: np.ndarray) -> np.ndarray:
    """(1/4)||M||_1 for a batch of Hermitian 2x2 matrices M (closed form)."""
    tr = (diff[..., 0, 0] + diff[..., 1, 1]).real
    det = (
        diff[..., 0, 0] * diff[..., 1, 1] - diff[..., 0, 1] * diff[..., 1, 0]
    ).real
    s = np.sqrt(np.maximum(tr**2 - 4 * det, 0.0))
    return 0.25 * np.maximum(np.abs(tr), s)


def run_local_detection(
    state: BipartiteState,
    evo: EvolutionSpec,
    grid: TimeGrid,
    basis: Optional[ProjectiveBasis] = None,
) -> WitnessSeries:
    """Dephase in the A-marginal eigenbasis (or an explicitly supplied basis),
    evolve both states and record the local trace distance per time."""
    if basis is None:
        basis, degenerate = local_eigenbasis(state)
        if degenerate:
            raise ValueError(
                "degenerate A-marginal: supply a basis explicitly or use "
                "run_minimized_detection"
            )
    dephased = dephase(state, basis)
    bound = trace_distance(state.rho, dephased.rho)
    margs = evo.marginal_series(
        [state.rho, dephased.rho], state.dims, grid.samples
    )
    diff = margs[0] - margs[1]
    if state.dims.d_a == 2:
        d_t = 2.0 * _distances_2x2_quarter(diff)
    else:
        d_t = 0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff)), axis=1)
    return WitnessSeries(grid.samples, d_t, bound_ref=bound)


def run_minimized_detection(
    state: BipartiteState,
    evo: EvolutionSpec,
    grid: TimeGrid,
    bases: Optional[BasisGrid] = None,
) -> WitnessSeries:
    """max over t of the basis-minimized local distance, qubit probe only.

    Exploits that dephasing along Bloch axis n maps the evolved marginal to
    (R(t) + sum_ab n_a n_b M_ab(t))/2, so the basis sweep costs only 2x2
    algebra once the nine sigma-conjugated marginal series are known.
    """
    if state.dims.d_a != 2:
        raise ValueError("basis-grid minimization is defined for d_A = 2 only")
    bases = bases or BasisGrid()
    conj = measures._sigma_conjugations(state)
    stack = np.concatenate([state.rho[None], conj.reshape(9, *state.rho.shape)])
    margs = evo.marginal_series(stack, state.dims, grid.samples)
    r_t = margs[0]  # (T, 2, 2)
    m_t = margs[1:].reshape(3, 3, len(grid.samples), 2, 2)

    angles = np.vstack(
        [bases.angles(), measures._marginal_eigen_angles(state)]
    )
    d_min_t = np.empty(len(grid.samples))
    dt0, dp0 = bases.spacing
    for ti in range(len(grid.samples)):
        def batch(ang):
            n = bloch_vectors(ang)
            pin = np.einsum("ga,gb,abij->gij", n, n, m_t[:, :, ti], optimize=True)
            return _distances_2x2_quarter(r_t[ti][None] - pin)

        vals = batch(angles)
        k = int(np.argmin(vals))
        best, best_ang = vals[k], angles[k]
        dt, dp = dt0, dp0
        for _ in range(bases.refine_rounds):
            dt, dp = dt / 2, dp / 2
            offs = np.array([(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)])
            cand = best_ang[None, :] + offs * np.array([dt, dp])
            cvals = batch(cand)
            j = int(np.argmin(cvals))
            if cvals[j] < best:
                best, best_ang = cvals[j], cand[j]
        d_min_t[ti] = best
    bound, _ = measures.minimal_dephasing_disturbance(state, bases)
    return WitnessSeries(grid.samples, d_min_t, bound_ref=bound)


def classical_correlation_witness(
    state: BipartiteState,
    perturbation: Optional[np.ndarray],
    evo: EvolutionSpec,
    grid: TimeGrid,
):
    """Compare the evolutions of the state and a locally rotated copy.

    An increase of the local trace distance above its initial value witnesses
    initial correlations (classical or quantum). Returns (series, detected).
    """
    if perturbation is None:
        perturbation = np.array([[0, 1], [1, 0]], dtype=complex)
    perturbed = apply_local_unitary(state, perturbation)
    margs = evo.marginal_series(
        [state.rho, perturbed.rho], state.dims, grid.samples
    )
    diff = margs[0] - margs[1]
    d_t = 0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff)), axis=1)
    series = WitnessSeries(grid.samples, d_t)
    detected = bool(np.max(d_t) > d_t[0] + 1e-9)
    return series, detected


def haar_coefficient(dims: BipartitionDims) -> float:
    da, db = dims.d_a, dims.d_b
    return (da**2 * db - db) / (da**2 * db**2 - 1)


def haar_average_estimate(state: BipartiteState, n_samples: int, seed: int):
    """Monte-Carlo mean of the locally observed squared HS distance under
    Haar-random global unitaries, against the closed-form prediction."""
    if n_samples < 100:
        raise ValueError("need at least 100 samples")
    basis, degenerate = local_eigenbasis(state)
    if degenerate:
        raise ValueError("degenerate A-marginal: reference state undefined")
    delta = state.rho - dephase(state, basis).rho
    predicted = haar_coefficient(state.dims) * hs_distance_sq(
        state.rho, dephase(state, basis).rho
    )
    rng = np.random.default_rng(seed)
    seeds = rng.integers(0, 2**63 - 1, size=n_samples)
    vals = np.empty(n_samples)
    for i, s in enumerate(seeds):
        u = haar_unitary(state.dims.total, int(s))
        loc = partial_trace_b(u @ delta @ u.conj().T, state.dims)
        vals[i] = np.sum(np.abs(loc) ** 2)
    mean = float(vals.mean())
    std_error = float(vals.std(ddof=1) / np.sqrt(n_samples))
    return mean, std_error, float(predicted)
