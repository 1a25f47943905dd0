import math

import numpy as np
from django.test import SimpleTestCase, tag
from scipy import stats as scipy_stats
from scipy.spatial.distance import pdist

from config.rng import make_rng
from spatial_core.geometry import Domain, PointSeq, ball_volume, neighbour_count

from .consistency import mle_consistency
from .exceptions import DivergentEstimate, InvalidParams, JammedBeforeTarget, NonIdentifiable
from .jamming import estimate_jamming
from .likelihood import fit_statistics, log_likelihood, score
from .params import CsaParams
from .profiles import empirical_limit_profile
from .sampler import sample_csa
from .statistics import (
    CsaStatistics,
    compute_statistics,
    estimate_N,
    estimate_rsa_radius,
    exact_gamma_1d,
    gamma_columns,
    gamma_statistics,
    prior_neighbour_counts,
    t_statistics,
)


def make_statistics(t, gamma, volume=1.0):
    gamma = np.asarray(gamma, dtype=float)
    return CsaStatistics(
        t=np.asarray(t),
        gamma=gamma,
        gamma_se=np.zeros_like(gamma),
        mc_samples=1,
        volume=volume,
    )


class CsaParamsTests(SimpleTestCase):
    def test_invalid_radius(self):
        with self.assertRaises(InvalidParams):
            CsaParams(R=0, beta=(1.0,))

    def test_nonpositive_beta(self):
        with self.assertRaises(InvalidParams):
            CsaParams(R=0.1, beta=(1.0, 0.0))

    def test_from_table_normalises(self):
        params = CsaParams.from_table(0.1, [2, 4, 0, 0])
        self.assertEqual(params.beta, (2.0,))
        self.assertEqual(params.N, 1)
        self.assertEqual(params.rate(0), 1.0)
        self.assertEqual(params.rate(5), 0.0)


class SamplerTests(SimpleTestCase):
    """
    Тесты точной выборки CSA методом принятия-отклонения.
    """

    def test_rsa_min_distance(self):
        params = CsaParams(R=0.03)
        for seed in range(3):
            seq = sample_csa(params, Domain.unit_cube(2), 500, make_rng(seed), streak=10**4)
            self.assertEqual(len(seq), 500)
            self.assertGreater(pdist(seq.points).min(), 0.03)

    def test_first_point_uniform(self):
        params = CsaParams(R=0.05, beta=(1000.0, 10000.0))
        firsts = np.array(
            [
                sample_csa(params, Domain.unit_cube(2), 1, make_rng(13, i)).points[0]
                for i in range(300)
            ]
        )
        for axis in range(2):
            self.assertGreater(scipy_stats.kstest(firsts[:, axis], "uniform").pvalue, 1e-3)

    def test_constant_rates_give_uniform_points(self):
        params = CsaParams(R=0.05, beta=(1.0,) * 50)
        seq = sample_csa(params, Domain.unit_cube(2), 400, make_rng(17))
        for axis in range(2):
            self.assertGreater(scipy_stats.kstest(seq.points[:, axis], "uniform").pvalue, 1e-3)

    def test_counts_at_arrival_bounded_by_N(self):
        params = CsaParams(R=0.01, beta=(1000.0, 10000.0))
        seq = sample_csa(params, Domain.unit_cube(2), 1000, make_rng(2024))
        self.assertLessEqual(prior_neighbour_counts(seq, 0.01).max(), 2)

    def test_same_seed_same_sequence(self):
        params = CsaParams(R=0.05, beta=(5.0,))
        first = sample_csa(params, Domain.unit_cube(2), 100, make_rng(42))
        second = sample_csa(params, Domain.unit_cube(2), 100, make_rng(42))
        np.testing.assert_array_equal(first.points, second.points)

    def test_jammed_before_target(self):
        params = CsaParams(R=3.0)
        with self.assertRaises(JammedBeforeTarget):
            sample_csa(params, Domain([0], [1]), 2, make_rng(1), streak=100)


class StatisticsTests(SimpleTestCase):
    """
    Тесты t- и Γ-статистик.
    """

    def setUp(self):
        self.domain = Domain.unit_cube(2)

    def test_single_point(self):
        seq = PointSeq([[0.5, 0.5]], self.domain)
        t = t_statistics(seq, 0.1, 3)
        np.testing.assert_array_equal(t.counts, [1, 0, 0, 0])
        self.assertEqual(t.overflow, 0)

    def test_hard_core_pattern(self):
        seq = PointSeq([[0.1, 0.1], [0.5, 0.5], [0.9, 0.9]], self.domain)
        self.assertEqual(t_statistics(seq, 0.1, 2).counts[0], 3)
        self.assertEqual(estimate_N(seq, 0.1), 0)

    def test_estimate_N_two_earlier_neighbours(self):
        seq = PointSeq(
            [[0.5, 0.5], [0.52, 0.5], [0.5, 0.52], [0.9, 0.9]], self.domain
        )
        self.assertEqual(estimate_N(seq, 0.05), 2)

    def test_counts_sum_with_overflow(self):
        rng = make_rng(8)
        for index in range(1000):
            length = int(rng.integers(1, 40))
            seq = PointSeq(rng.random((length, 2)), self.domain)
            t = t_statistics(seq, 0.2, 1)
            self.assertEqual(t.total, length)

    def test_matches_prefix_recomputation(self):
        params = CsaParams(R=0.05, beta=(5.0, 2.0))
        seq = sample_csa(params, self.domain, 300, make_rng(21))
        counts = t_statistics(seq, 0.05, 2).counts
        expected = np.zeros(3, dtype=int)
        for i, point in enumerate(seq.points):
            expected[neighbour_count(point, seq.prefix(i), 0.05)] += 1
        np.testing.assert_array_equal(counts, expected)

    def test_gamma_boundary_values(self):
        seq = PointSeq(make_rng(4).random((5, 2)), Domain([0, 0], [2, 1]))
        gamma, _ = gamma_statistics(seq, seq.domain, 0.2, 2, 500, make_rng(5))
        self.assertEqual(gamma[0, 0], 2.0)
        self.assertEqual(gamma[2, 1], 0.0)
        self.assertEqual(gamma[1, 0], 0.0)

    def test_gamma_single_ball(self):
        gamma, se = gamma_columns(
            np.array([[0.5, 0.5]]), self.domain, 0.1, 1, 2, 20000, make_rng(6)
        )
        self.assertLess(abs(gamma[1, 1] - ball_volume(2, 0.1)), 4 * se[1, 1])

    def test_gamma_rows_bounded_by_volume(self):
        seq = PointSeq(make_rng(9).random((50, 2)), self.domain)
        gamma, _ = gamma_statistics(seq, self.domain, 0.1, 2, 1000, make_rng(10))
        self.assertTrue(np.all(gamma >= 0))
        self.assertTrue(np.all(gamma.sum(axis=0) <= self.domain.volume + 1e-12))

    def test_gamma_matches_exact_1d(self):
        domain = Domain([0], [1])
        points = np.array([[0.3], [0.35], [0.8]])
        exact = exact_gamma_1d(points, domain, 0.1, 2, 3)
        self.assertAlmostEqual(exact[1, 1], 0.2)
        self.assertAlmostEqual(exact[2, 2], 0.15)
        gamma, se = gamma_columns(points, domain, 0.1, 2, 3, 100000, make_rng(12))
        self.assertTrue(np.all(np.abs(gamma - exact) <= 4 * se + 1e-12))

    def test_rsa_radius_heuristic(self):
        seq = PointSeq([[0.1, 0.1], [0.1, 0.4], [0.6, 0.6]], self.domain)
        self.assertAlmostEqual(estimate_rsa_radius(seq), 0.3)


class LikelihoodTests(SimpleTestCase):
    """
    Тесты правдоподобия и МП-оценок по готовым статистикам.
    """

    def test_single_point_likelihood(self):
        stats = make_statistics([1], [[2.0]], volume=2.0)
        self.assertAlmostEqual(log_likelihood(stats, []), -math.log(2.0))

    def test_N_zero_does_not_depend_on_beta(self):
        stats = make_statistics([3], [[1.0, 0.8, 0.6]])
        self.assertAlmostEqual(
            log_likelihood(stats, []), -math.log(1.0) - math.log(0.8) - math.log(0.6)
        )

    def test_matches_direct_formula(self):
        rng = make_rng(30)
        for _ in range(20):
            length = 8
            gamma = rng.random((2, length))
            t = [int(rng.integers(1, length)), 0]
            t[1] = length - t[0]
            beta = float(rng.uniform(0.1, 10))
            expected = t[1] * math.log(beta)
            for k in range(length):
                expected -= math.log(gamma[0, k] + beta * gamma[1, k])
            stats = make_statistics(t, gamma)
            self.assertAlmostEqual(log_likelihood(stats, [beta]), expected, places=10)

    def test_non_identifiable(self):
        stats = make_statistics([4, 0], np.ones((2, 4)))
        with self.assertRaises(NonIdentifiable) as context:
            fit_statistics(stats)
        self.assertEqual(context.exception.j, 1)

    def test_divergent_estimate(self):
        stats = make_statistics([1, 3], np.ones((2, 4)))
        with self.assertRaises(DivergentEstimate):
            fit_statistics(stats)

    def test_single_parameter_fit(self):
        params = CsaParams(R=0.05, beta=(5.0,))
        seq = sample_csa(params, Domain.unit_cube(2), 150, make_rng(31))
        stats = compute_statistics(seq, seq.domain, 0.05, 2000, make_rng(32), N=1)
        fit = fit_statistics(stats, tol=1e-6, R=0.05)
        self.assertEqual(fit.method, "bisection")
        self.assertGreater(fit.beta_hat[0], 0)
        self.assertLessEqual(np.max(np.abs(fit.residuals)), 1e-6)

    def test_two_parameter_fit(self):
        gamma = make_rng(33).uniform(0.2, 1.0, size=(3, 6))
        stats = make_statistics([2, 2, 2], gamma)
        fit = fit_statistics(stats, tol=1e-6)
        self.assertEqual(fit.method, "trust-exact")
        self.assertEqual(fit.N_hat, 2)
        self.assertLessEqual(np.max(np.abs(score(stats, fit.beta_hat))), 1e-6)

    def test_argmax_invariant_under_gamma_rescaling(self):
        gamma = make_rng(34).uniform(0.2, 1.0, size=(3, 6))
        fit = fit_statistics(make_statistics([2, 2, 2], gamma))
        rescaled = fit_statistics(make_statistics([2, 2, 2], 3.0 * gamma, volume=3.0))
        np.testing.assert_allclose(fit.beta_hat, rescaled.beta_hat, rtol=1e-5)


class JammingTests(SimpleTestCase):
    def test_single_point_fills_interval(self):
        density = estimate_jamming(CsaParams(R=3.0), Domain([0], [1]), make_rng(1), streak=100)
        self.assertEqual(density, 1.0)

    def test_density_decreases_with_radius(self):
        domain = Domain.unit_cube(2)
        for seed in range(3):
            small = estimate_jamming(CsaParams(R=0.1), domain, make_rng(seed, 1), streak=2000)
            large = estimate_jamming(CsaParams(R=0.2), domain, make_rng(seed, 2), streak=2000)
            self.assertGreater(small, large)


class LimitProfileTests(SimpleTestCase):
    def test_rsa_profile_has_no_residuals(self):
        profile = empirical_limit_profile(
            CsaParams(R=0.1), Domain.unit_cube(2), [1, 2], 10, make_rng(40), mc_n=200
        )
        self.assertEqual(list(profile["ell"]), [10, 20])
        self.assertNotIn("residual_1", profile.columns)
        np.testing.assert_allclose(profile["rho_0"], [10.0, 10.0])

    def test_single_parameter_profile(self):
        params = CsaParams(R=0.05, beta=(5.0,))
        profile = empirical_limit_profile(
            params, Domain.unit_cube(2), [1, 4], 100, make_rng(41), mc_n=500
        )
        np.testing.assert_allclose(profile["rho_0"] + profile["rho_1"], [100.0, 100.0])
        self.assertTrue(np.all(np.isfinite(profile["residual_1"])))
        self.assertEqual(list(profile["mc_n"]), [500, 2000])

    @classmethod
    def profiles(cls, scales, n_seeds, mc_n=1000):
        params = CsaParams(R=0.05, beta=(5.0,))
        return [
            empirical_limit_profile(
                params, Domain.unit_cube(2), scales, 50, make_rng(50, seed), mc_n=mc_n
            ).set_index("m")
            for seed in range(n_seeds)
        ]

    def test_residual_shrinks_with_scale(self):
        profiles = self.profiles([1, 16], n_seeds=8)
        residuals = np.abs([profile["residual_1"] for profile in profiles]).mean(axis=0)
        self.assertLess(residuals[1], residuals[0])

    @tag("slow")
    def test_normalised_counts_settle(self):
        profiles = self.profiles([1, 4, 16], n_seeds=20)
        rho = np.array([profile["rho_1"] for profile in profiles])
        early = np.abs(rho[:, 1] - rho[:, 0]).mean()
        late = np.abs(rho[:, 2] - rho[:, 1]).mean()
        self.assertLess(late, early)
        residuals = np.abs([profile["residual_1"] for profile in profiles]).mean(axis=0)
        self.assertLess(residuals[2], residuals[0])

    def test_scales_must_increase(self):
        with self.assertRaises(ValueError):
            empirical_limit_profile(
                CsaParams(R=0.1), Domain.unit_cube(2), [2, 1], 10, make_rng(1)
            )


class ConsistencyTests(SimpleTestCase):
    """
    Тесты эксперимента на состоятельность МП-оценок.
    """

    def test_small_experiment(self):
        params = CsaParams(R=0.05, beta=(5.0,))
        runs, summary, theta = mle_consistency(
            params, [1, 2], seed=7, n_seeds=3, mc_n=500, jamming_runs=1, streak=2000
        )
        self.assertGreater(theta, 0)
        self.assertEqual(len(runs), 6)
        self.assertEqual(list(summary["m"]), [1, 2])
        fitted = runs[runs["error"] == ""]
        self.assertTrue(np.all(fitted["max_residual"] <= 1e-6))

    def test_all_fits_failed(self):
        # на отрезке [0, 2] при R = 2 и N = 1 помещаются только две точки
        params = CsaParams(R=2.0, beta=(2.0,))
        runs, summary, theta = mle_consistency(
            params, [2], seed=3, n_seeds=3, mu_fraction=1.0, dimension=1,
            mc_n=100, jamming_runs=1, streak=200,
        )
        self.assertEqual(theta, 2.0)
        self.assertEqual(list(runs["error"]), ["JammedBeforeTarget"] * 3)
        self.assertIn("beta_1", runs.columns)
        row = summary.iloc[0]
        self.assertEqual((row["fits"], row["failures"]), (0, 3))
        self.assertTrue(math.isnan(row["median_rel_error_1"]))

    def test_too_few_points(self):
        params = CsaParams(R=2.0, beta=(2.0,))
        runs, summary, _ = mle_consistency(
            params, [1, 2], seed=3, n_seeds=2, mu_fraction=0.25, dimension=1,
            mc_n=100, jamming_runs=1, streak=200,
        )
        self.assertEqual(list(runs["ell"]), [0, 0, 1, 1])
        self.assertTrue((runs["error"] == "TooFewPoints").all())
        self.assertEqual(list(summary["failures"]), [2, 2])

    @tag("slow")
    def test_median_error_at_area_16(self):
        params = CsaParams(R=0.05, beta=(5.0,))
        runs, summary, _ = mle_consistency(params, [1, 4, 16], seed=20240717, n_seeds=20)
        fitted = runs[runs["error"] == ""]
        self.assertTrue(np.all(fitted["max_residual"] <= 1e-6))
        errors = summary.set_index("m")["median_rel_error_1"]
        self.assertLessEqual(errors[16], 0.2)
        self.assertLessEqual(errors[16], errors[1])
