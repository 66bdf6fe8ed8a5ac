"""Local detection protocol, minimized witness, classical-correlation
witness and the Haar-average estimator."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SX, random_density, random_hermitian, random_state
from discord_probe.measures import dephasing_disturbance, hs_distance_sq, trace_distance
from discord_probe.protocol import (
    EvolutionSpec,
    TimeGrid,
    WitnessBoundError,
    WitnessSeries,
    classical_correlation_witness,
    haar_average_estimate,
    haar_coefficient,
    run_local_detection,
    run_minimized_detection,
)
from discord_probe.states import (
    BipartiteState,
    computational_basis,
    dephase,
    local_eigenbasis,
    zero_discord_state,
)
from discord_probe.tensor import (
    BipartitionDims,
    evolve,
    kron,
    partial_trace_a,
    partial_trace_b,
)

GRID = TimeGrid.linear(5.0, 60)


class TestTimeGrid:
    def test_valid(self):
        g = TimeGrid.linear(2.0, 5)
        assert g.samples[0] == 0.0 and len(g.samples) == 5

    def test_rejects_bad(self):
        with pytest.raises(ValueError):
            TimeGrid(np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            TimeGrid(np.array([0.0, 2.0, 1.0]))


class TestEvolutionSpec:
    def test_exactly_one_source(self, rng):
        with pytest.raises(ValueError):
            EvolutionSpec()
        with pytest.raises(ValueError):
            EvolutionSpec(hamiltonian=np.eye(2), propagator=lambda t: np.eye(2))

    def test_propagator_checks(self):
        evo = EvolutionSpec(propagator=lambda t: 2 * np.eye(2, dtype=complex))
        with pytest.raises(ValueError):
            evo.propagator_at(1.0)
        evo2 = EvolutionSpec(
            propagator=lambda t: np.diag([1.0, np.exp(-1j * t) + (0.1 if t == 0 else 0)])
        )
        with pytest.raises(ValueError):
            evo2.propagator_at(0.0)

    def test_marginal_series_matches_direct(self, rng):
        dims = BipartitionDims(2, 3)
        h = random_hermitian(6, rng)
        rho = random_density(6, rng)
        evo = EvolutionSpec(hamiltonian=h)
        times = np.array([0.0, 0.7, 1.9])
        out = evo.marginal_series([rho], dims, times)
        for ti, t in enumerate(times):
            direct = partial_trace_b(evolve(rho, h, t), dims)
            assert np.max(np.abs(out[0, ti] - direct)) <= 1e-10

    def test_propagator_path_matches_hamiltonian_path(self, rng):
        dims = BipartitionDims(2, 2)
        h = random_hermitian(4, rng)
        rho = random_density(4, rng)
        evo_h = EvolutionSpec(hamiltonian=h)
        evo_p = EvolutionSpec(propagator=lambda t: evo_h.propagator_at(t))
        times = np.array([0.0, 0.5, 1.1])
        a = evo_h.marginal_series([rho], dims, times)
        b = evo_p.marginal_series([rho], dims, times)
        assert np.max(np.abs(a - b)) <= 1e-10


class TestWitnessSeries:
    def test_bound_enforced(self):
        with pytest.raises(WitnessBoundError):
            WitnessSeries(np.array([0.0, 1.0]), np.array([0.0, 0.5]), bound_ref=0.1)

    def test_range_enforced(self):
        with pytest.raises(ValueError):
            WitnessSeries(np.array([0.0, 1.0]), np.array([0.0, 1.5]))

    def test_maxima(self):
        s = WitnessSeries(np.array([0.0, 1.0, 2.0]), np.array([0.0, 0.3, 0.1]))
        assert s.d_max == 0.3 and s.argmax_time == 1.0


class TestRunLocalDetection:
    def test_product_state_silent(self, rng):
        rho_b = random_density(3, rng)
        s = zero_discord_state([1.0, 0.0], computational_basis(2), [rho_b, rho_b])
        evo = EvolutionSpec(hamiltonian=random_hermitian(6, rng))
        series = run_local_detection(s, evo, GRID)
        assert series.d_max <= 1e-12

    def test_zero_discord_silent(self, rng):
        s = zero_discord_state(
            [0.8, 0.2], computational_basis(2),
            [random_density(2, rng), random_density(2, rng)],
        )
        evo = EvolutionSpec(hamiltonian=random_hermitian(4, rng))
        assert run_local_detection(s, evo, GRID).d_max <= 1e-12

    def test_noninteracting_silent(self, rng):
        s = random_state(2, 3, rng)
        h = kron(random_hermitian(2, rng), np.eye(3)) + kron(
            np.eye(2), random_hermitian(3, rng)
        )
        series = run_local_detection(s, EvolutionSpec(hamiltonian=h), GRID)
        assert series.d_max <= 1e-12

    def test_d0_zero_and_bound(self, rng):
        s = random_state(2, 2, rng)
        evo = EvolutionSpec(hamiltonian=random_hermitian(4, rng))
        series = run_local_detection(s, evo, GRID)
        assert series.d_t[0] <= 1e-12
        assert series.bound_ref == pytest.approx(dephasing_disturbance(s), abs=1e-12)
        assert np.all(series.d_t <= series.bound_ref + 1e-9)

    def test_b_marginals_coincide_at_t0(self, rng):
        s = random_state(2, 3, rng)
        basis, _ = local_eigenbasis(s)
        deph = dephase(s, basis)
        assert np.max(np.abs(
            partial_trace_a(s.rho, s.dims) - partial_trace_a(deph.rho, s.dims)
        )) <= 1e-12

    def test_refusal_on_degeneracy(self):
        b = np.array([1, 0, 0, 1]) / np.sqrt(2)
        bell = BipartiteState(np.outer(b, b).astype(complex), BipartitionDims(2, 2))
        evo = EvolutionSpec(hamiltonian=np.eye(4, dtype=complex))
        with pytest.raises(ValueError, match="degenerate"):
            run_local_detection(bell, evo, GRID)

    def test_grid_refinement_monotone(self, rng):
        s = random_state(2, 2, rng)
        evo = EvolutionSpec(hamiltonian=random_hermitian(4, rng))
        coarse = run_local_detection(s, evo, TimeGrid.linear(5.0, 20))
        fine = run_local_detection(
            s, evo, TimeGrid(np.unique(np.concatenate(
                [coarse.times, np.linspace(0, 5.0, 77)])))
        )
        assert fine.d_max >= coarse.d_max - 1e-15

    def test_qubit_fast_path_matches_general(self, rng):
        # same physics through the d_A = 2 closed form and the generic eigh path
        s = random_state(2, 4, rng)
        h = random_hermitian(8, rng)
        evo = EvolutionSpec(hamiltonian=h)
        series = run_local_detection(s, evo, GRID)
        basis, _ = local_eigenbasis(s)
        deph = dephase(s, basis)
        for ti in (7, 23, 41):
            t = GRID.samples[ti]
            direct = trace_distance(
                partial_trace_b(evolve(s.rho, h, t), s.dims),
                partial_trace_b(evolve(deph.rho, h, t), s.dims),
            )
            assert abs(series.d_t[ti] - direct) <= 1e-10


class TestRunMinimizedDetection:
    def test_zero_discord(self, rng):
        s = zero_discord_state(
            [0.7, 0.3], computational_basis(2),
            [random_density(2, rng), random_density(2, rng)],
        )
        evo = EvolutionSpec(hamiltonian=random_hermitian(4, rng))
        series = run_minimized_detection(s, evo, TimeGrid.linear(3.0, 16))
        assert series.d_max <= 1e-4

    def test_below_plain_witness(self, rng):
        s = random_state(2, 2, rng)
        evo = EvolutionSpec(hamiltonian=random_hermitian(4, rng))
        grid = TimeGrid.linear(3.0, 16)
        plain = run_local_detection(s, evo, grid)
        minimized = run_minimized_detection(s, evo, grid)
        assert np.all(minimized.d_t <= plain.d_t + 1e-9)

    def test_rejects_large_probe(self, rng):
        s = random_state(3, 2, rng)
        evo = EvolutionSpec(hamiltonian=random_hermitian(6, rng))
        with pytest.raises(ValueError):
            run_minimized_detection(s, evo, GRID)


class TestClassicalCorrelationWitness:
    def test_product_state_never_fires(self, rng):
        rho_b = random_density(2, rng)
        s = zero_discord_state([1.0, 0.0], computational_basis(2), [rho_b, rho_b])
        for seed in range(5):
            h = random_hermitian(4, np.random.default_rng(seed))
            _, detected = classical_correlation_witness(
                s, None, EvolutionSpec(hamiltonian=h), GRID
            )
            assert not detected

    def test_identity_perturbation_silent(self, rng):
        s = random_state(2, 2, rng)
        evo = EvolutionSpec(hamiltonian=random_hermitian(4, rng))
        series, detected = classical_correlation_witness(
            s, np.eye(2, dtype=complex), evo, GRID
        )
        assert np.max(series.d_t) <= 1e-12 and not detected

    def test_correlated_state_fires(self, rng):
        s = zero_discord_state(
            [0.5, 0.5], computational_basis(2),
            [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)],
        )
        h = kron(SX, np.diag([0.0, 1.0]).astype(complex))
        _, detected = classical_correlation_witness(
            s, None, EvolutionSpec(hamiltonian=h), GRID
        )
        assert detected


class TestHaarAverage:
    def test_coefficients(self):
        assert haar_coefficient(BipartitionDims(2, 2)) == pytest.approx(0.4)
        assert haar_coefficient(BipartitionDims(2, 3)) == pytest.approx(9 / 35)

    def test_zero_discord_mean_zero(self, rng):
        s = zero_discord_state(
            [0.7, 0.3], computational_basis(2),
            [random_density(2, rng), random_density(2, rng)],
        )
        mean, _, predicted = haar_average_estimate(s, 100, seed=5)
        assert mean <= 1e-12 and predicted <= 1e-12

    def test_three_sigma(self, rng):
        s = random_state(2, 2, rng)
        mean, se, predicted = haar_average_estimate(s, 10_000, seed=11)
        assert abs(mean - predicted) <= 3 * se
        basis, _ = local_eigenbasis(s)
        assert predicted == pytest.approx(
            0.4 * hs_distance_sq(s.rho, dephase(s, basis).rho)
        )

    def test_sample_floor(self, rng):
        with pytest.raises(ValueError):
            haar_average_estimate(random_state(2, 2, rng), 50, seed=0)
