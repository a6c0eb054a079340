"""Sign-descent dynamics: exact oscillations, simplified model, scalings."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bigramlab.errors import DomainError
from bigramlab.powerlaw import PowerLawSpec, build_full_problem
from bigramlab.sd import (
    PHI_GRID_EXPONENTS,
    SDConfig,
    SimulationMode,
    sd_asymptotic_rate,
    sd_exact_distance,
    sd_full_simulation,
    sd_grid_search_phi,
    sd_optimal_phi_large_alpha,
    sd_scaling,
    sd_simplified_distance,
    sd_simplified_relative_loss,
    sd_time_to_eps,
)
from bigramlab.specfun import zeta


def iterate_sign_descent(delta0: float, eta: float, t: int) -> float:
    """Reference recurrence: delta <- delta - eta * sign(delta)."""
    delta = delta0
    for _ in range(t):
        if delta > 0:
            delta -= eta
        elif delta < 0:
            delta += eta
    return delta


class TestExactDistance:
    def test_matches_recurrence_exactly(self):
        # Dyadic-rational inputs keep every intermediate value exactly
        # representable, so the closed form must agree bit for bit.
        rng = np.random.default_rng(12345)
        scale = 2.0**20
        for _ in range(10**4):
            delta0 = rng.integers(-(2**20), 2**20) / scale
            eta = rng.integers(1, 2**20) / scale
            t = int(rng.integers(0, 1001))
            assert sd_exact_distance(delta0, eta, t) == iterate_sign_descent(
                delta0, eta, t
            )

    def test_zero_is_fixed_point(self):
        assert sd_exact_distance(0.0, 0.5, 100) == 0.0

    def test_oscillation_pattern(self):
        # delta0=0.5, eta=0.2: 0.5, 0.3, 0.1, -0.1, 0.1, -0.1, ...
        expected = [0.5, 0.3, 0.1, -0.1, 0.1, -0.1]
        got = [sd_exact_distance(0.5, 0.2, t) for t in range(6)]
        assert got == pytest.approx(expected, abs=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            sd_exact_distance(0.5, 0.0, 1)
        with pytest.raises(DomainError):
            sd_exact_distance(0.5, 0.1, -1)


class TestSimplifiedDistance:
    def test_phases(self):
        assert sd_simplified_distance(1.0, 0.25, 2) == pytest.approx(0.5)
        assert sd_simplified_distance(1.0, 0.25, 4) == pytest.approx(0.0)
        assert sd_simplified_distance(1.0, 0.25, 5) == pytest.approx(0.125)

    def test_domain(self):
        with pytest.raises(DomainError):
            sd_simplified_distance(-1.0, 0.1, 1)


class TestSimplifiedLossOracle:
    @pytest.mark.parametrize("d", [2, 64, 2048])
    @pytest.mark.parametrize("alpha", [0.25, 0.5, 1.0, 2.0])
    def test_matches_full_simulation(self, d, alpha):
        spec = PowerLawSpec(d=d, alpha=alpha)
        system = build_full_problem(spec)
        phis = [p for p in [1.25, 1.5 + d / 3.0, d - 0.5] if 1.0 <= p <= d]
        for T in [1, 3, 10, 64]:
            for phi in phis:
                config = SDConfig(spec=spec, horizon_T=T, phi=phi)
                direct = sd_full_simulation(
                    system, config.eta, T, SimulationMode.SIMPLIFIED
                )
                closed = sd_simplified_relative_loss(spec, T, phi)
                assert closed == pytest.approx(direct, abs=1e-10)

    def test_two_point_hand_value(self):
        # d=2, alpha=1, T=1, phi=2: eta = 1/(z*2); rank 1 decreasing to
        # pi_1 - eta, rank 2 oscillating at eta/2; relative loss 0.2.
        spec = PowerLawSpec(d=2, alpha=1.0)
        assert sd_simplified_relative_loss(spec, 1, 2.0) == pytest.approx(0.2, abs=1e-12)

    def test_all_oscillatory(self):
        # eta above every initial distance: all coordinates sit at eta/2.
        spec = PowerLawSpec(d=4, alpha=1.0)
        system = build_full_problem(spec)
        eta = 1.0
        r = sd_full_simulation(system, eta, 3, SimulationMode.SIMPLIFIED)
        loss0 = system.initial_loss()
        expected = float(np.sum(system.lambdas * (eta / 2.0) ** 2)) / loss0
        assert r == pytest.approx(expected, rel=1e-12)

    def test_exact_mode_even_iterations(self):
        spec = PowerLawSpec(d=64, alpha=1.0)
        system = build_full_problem(spec)
        config = SDConfig(spec=spec, horizon_T=10, phi=3.7)
        r_exact = sd_full_simulation(system, config.eta, 10, SimulationMode.EXACT)
        r_simpl = sd_full_simulation(system, config.eta, 10, SimulationMode.SIMPLIFIED)
        # Oscillation amplitudes differ by at most eta per coordinate.
        assert r_exact >= 0.0
        assert abs(r_exact - r_simpl) < 1.0

    def test_permutation_invariance(self):
        spec = PowerLawSpec(d=16, alpha=0.5)
        rng = np.random.default_rng(5)
        perms = [rng.permutation(16) for _ in range(16)]
        base = build_full_problem(spec)
        permuted = build_full_problem(spec, perms)
        for mode in (SimulationMode.EXACT, SimulationMode.SIMPLIFIED):
            r1 = sd_full_simulation(base, 0.01, 8, mode)
            r2 = sd_full_simulation(permuted, 0.01, 8, mode)
            assert r1 == pytest.approx(r2, abs=1e-12)


class TestScaling:
    def test_alpha_half_example(self):
        T, phi = sd_scaling(0.5, 10**4, 0.5)
        assert T == pytest.approx(5.0)
        assert phi == pytest.approx(100.0)

    def test_alpha_one_example(self):
        T, phi = sd_scaling(1.0, 10**4, 2.0)
        assert T == pytest.approx(100.0)
        assert phi == pytest.approx(1.25)

    def test_alpha_quarter_large_tau(self):
        c1, c2 = 1.0 - 2.0, 0.25 / 0.75
        tau = 3.0
        _, phi = sd_scaling(0.25, 10**4, tau)
        assert phi == pytest.approx(10**4 / (c1 + 4.0 * c2 * tau**2), rel=1e-12)

    def test_alpha_quarter_plateau_phi(self):
        _, phi = sd_scaling(0.25, 10**4, 0.1)
        assert phi == 10**4

    def test_alpha_half_domain(self):
        with pytest.raises(DomainError):
            sd_scaling(0.5, 100, 1.5)


class TestAsymptoticRate:
    def test_alpha_half(self):
        assert sd_asymptotic_rate(0.5, 0.3) == pytest.approx(0.7)
        with pytest.raises(DomainError):
            sd_asymptotic_rate(0.5, 1.2)

    def test_alpha_quarter_plateau(self):
        assert sd_asymptotic_rate(0.25, 0.1) == pytest.approx(1.0 / 6.0)

    def test_alpha_one(self):
        # Exact limiting loss at the optimal step-size shape.
        assert sd_asymptotic_rate(1.0, 1.0) == pytest.approx(
            1.0 / (2.0 * zeta(2.0)), rel=1e-12
        )

    def test_alpha_one_matches_finite_d(self):
        d = 10**6
        spec = PowerLawSpec(d=d, alpha=1.0)
        for tau in [1.0, 2.0, 4.0]:
            T, phi = sd_scaling(1.0, d, tau)
            r = sd_simplified_relative_loss(spec, T, phi)
            assert r == pytest.approx(sd_asymptotic_rate(1.0, tau), abs=1e-4)


class TestOptimalPhi:
    def test_limit_is_one(self):
        assert sd_optimal_phi_large_alpha(1.0, 100, 10**9) == pytest.approx(1.0, abs=1e-9)

    def test_boundary_example(self):
        assert sd_optimal_phi_large_alpha(1.0, 101, 5.0) == pytest.approx(2.0)

    def test_local_optimality(self):
        d, alpha, T = 1000, 1.0, 50
        spec = PowerLawSpec(d=d, alpha=alpha)
        phi = sd_optimal_phi_large_alpha(alpha, d, T)
        best = sd_simplified_relative_loss(spec, T, phi)
        assert best <= sd_simplified_relative_loss(spec, T, phi * 1.05)
        assert best <= sd_simplified_relative_loss(spec, T, phi * 0.95)

    def test_threshold_violation(self):
        with pytest.raises(DomainError) as err:
            sd_optimal_phi_large_alpha(1.0, 101, 4.0)
        assert "100" in str(err.value)


class TestGridSearch:
    def test_grid_size(self):
        assert len(PHI_GRID_EXPONENTS) == 321

    def test_beats_predicted_phi(self):
        d, alpha, tau = 10**4, 1.0, 2.0
        spec = PowerLawSpec(d=d, alpha=alpha)
        T, phi_pred = sd_scaling(alpha, d, tau)
        _, loss_best = sd_grid_search_phi(spec, T)
        # The grid is geometric in the exponent of d, so the predicted phi
        # falls between nodes; the best node is within 1% of its loss.
        assert loss_best <= sd_simplified_relative_loss(spec, T, phi_pred) * 1.01

    def test_ratio_converges(self):
        alpha, tau = 1.0, 2.0
        ratios = []
        for d in [10**3, 10**4, 10**5]:
            spec = PowerLawSpec(d=d, alpha=alpha)
            T, phi_pred = sd_scaling(alpha, d, tau)
            phi_best, _ = sd_grid_search_phi(spec, T)
            ratios.append(phi_best / phi_pred)
        assert abs(ratios[-1] - 1.0) <= abs(ratios[0] - 1.0) + 1e-9
        assert abs(ratios[-1] - 1.0) < 0.1

    def test_minimizer_step_size_in_valid_range(self):
        # The implied eta always lies between delta_d(0)/T and delta_1(0)/T.
        for d, alpha, T in [(100, 1.0, 7), (500, 0.5, 3)]:
            spec = PowerLawSpec(d=d, alpha=alpha)
            phi_best, _ = sd_grid_search_phi(spec, T)
            eta = 1.0 / (spec.z * T * phi_best**alpha)
            grid_step = float(d) ** (PHI_GRID_EXPONENTS[1] - PHI_GRID_EXPONENTS[0])
            assert eta <= (1.0 / spec.z) / T * (1.0 + 1e-9)
            assert eta >= (d**-alpha / spec.z) / T / (1.0 + grid_step)


class TestUnreachabilityFloor:
    def test_large_phi_floor(self):
        # With phi = 2 the first-coordinate residual never shrinks below a
        # constant, no matter how long the run.
        spec = PowerLawSpec(d=1000, alpha=1.0)
        floor = (1.0 - 0.5) ** 2 / (spec.z**2 * np.sum(
            (np.arange(1, 1001) ** -1.0 / spec.z) ** 2
        ))
        for T in [10**2, 10**4, 10**6]:
            assert sd_simplified_relative_loss(spec, T, 2.0) >= 0.1


class TestTimeToEps:
    def test_alpha_half_example(self):
        assert sd_time_to_eps(0.5, 10**4, 0.5) == pytest.approx(5.0)

    def test_alpha_one_example(self):
        t = sd_time_to_eps(1.0, 10**4, 0.1)
        assert t == pytest.approx(117.0, abs=0.5)

    def test_eps_near_one(self):
        assert sd_time_to_eps(1.0, 10**4, 0.999) < 2.0

    def test_plateau_unreachable(self):
        with pytest.raises(DomainError):
            sd_time_to_eps(0.25, 10**4, 0.5)

    def test_below_plateau_allowed(self):
        assert sd_time_to_eps(0.25, 10**4, 0.01) > 0


class TestAsymptoticConvergence:
    @pytest.mark.parametrize(
        "alpha,taus",
        [
            (0.25, [0.2, 1.0, 3.0]),
            (0.5, [0.3, 0.5, 0.7]),
            (1.0, [1.5, 2.0, 3.0]),
        ],
    )
    def test_gap_decreases_in_d(self, alpha, taus):
        sups = []
        for d in [10**3, 10**4, 10**5, 10**6]:
            spec = PowerLawSpec(d=d, alpha=alpha)
            gaps = []
            for tau in taus:
                T, phi = sd_scaling(alpha, d, tau)
                gaps.append(
                    abs(
                        sd_simplified_relative_loss(spec, T, phi)
                        - sd_asymptotic_rate(alpha, tau)
                    )
                )
            sups.append(max(gaps))
        assert all(a >= b - 1e-12 for a, b in zip(sups, sups[1:]))


class TestConfig:
    def test_eta_formula(self):
        spec = PowerLawSpec(d=10, alpha=1.0)
        config = SDConfig(spec=spec, horizon_T=4, phi=2.5)
        assert config.eta == pytest.approx(1.0 / (spec.z * 4 * 2.5), rel=1e-14)

    def test_phi_range(self):
        spec = PowerLawSpec(d=10, alpha=1.0)
        with pytest.raises(DomainError):
            SDConfig(spec=spec, horizon_T=1, phi=0.5)
        with pytest.raises(DomainError):
            SDConfig(spec=spec, horizon_T=1, phi=11.0)
        with pytest.raises(DomainError):
            SDConfig(spec=spec, horizon_T=0, phi=2.0)
