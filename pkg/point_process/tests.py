import math

import numpy as np
from django.test import SimpleTestCase, tag
from scipy.spatial.distance import pdist

from config.rng import make_rng
from spatial_core.exceptions import PointOutsideDomain
from spatial_core.geometry import Domain

from .configuration import PointConfig
from .density import (
    log_papangelou_ratio,
    log_unnormalized_density,
    neighbour_counts,
    pair_count,
    papangelou_ratio,
)
from .exceptions import DuplicatePoint, InvalidRule, PointAlreadyPresent
from .fitting import estimate_N_pp, fit_finite_table, poisson_count_summary
from .normalizing import estimate_log_Z, hard_core_log_Z_1d
from .rules import (
    ConstantBeta,
    CustomRule,
    FiniteTable,
    PpParams,
    Strauss,
    parse_rule,
    validate_params,
)
from .sampler import geweke_z, kernel_balance_residual, run_chains, sample_bd_mcmc


def sqrt_growth(m):
    return 1.0 + math.sqrt(m)


def square_growth(m):
    return 1.0 + m**2


class BasePointProcessTests(SimpleTestCase):
    """
    Базовый класс: случайные конфигурации и набор правил.
    """

    square = Domain.unit_cube(2)

    @classmethod
    def random_config(cls, rng, size, domain=None):
        domain = domain or cls.square
        return PointConfig(domain.sample_uniform(rng, size), domain)

    @classmethod
    def rules(cls):
        return [
            ConstantBeta(1.7),
            FiniteTable((2.0, 1.5, 0.5)),
            Strauss(2.0, 0.5),
            CustomRule(sqrt_growth, certificate=(2.0, 0.5)),
        ]


class RuleTests(BasePointProcessTests):
    """
    Тесты правил интенсивностей и проверки корректности.
    """

    def test_finite_table_tail(self):
        rule = FiniteTable((1.0, 0.0, 3.0))
        np.testing.assert_array_equal(rule.beta(np.arange(5)), [1.0, 0.0, 3.0, 0.0, 0.0])

    def test_strauss_rates(self):
        rule = Strauss(2.0, 0.25)
        np.testing.assert_allclose(rule.beta(np.arange(3)), [2.0, 1.0, 0.5])

    def test_invalid_rules(self):
        with self.assertRaises(InvalidRule):
            ConstantBeta(0.0)
        with self.assertRaises(InvalidRule):
            FiniteTable((0.0, 1.0))
        with self.assertRaises(InvalidRule):
            FiniteTable((1.0, -1.0))
        with self.assertRaises(InvalidRule):
            Strauss(2.0, 1.0)
        with self.assertRaises(InvalidRule):
            PpParams(0.0, ConstantBeta(1.0))

    def test_validate_builtin_rules(self):
        self.assertTrue(validate_params(PpParams(0.1, Strauss(2.0, 0.5))))
        self.assertTrue(validate_params(PpParams(0.01, FiniteTable((1, 1000, 10000, 0, 0)))))
        self.assertTrue(validate_params(PpParams(0.1, ConstantBeta(3.0))))

    def test_validate_custom_rules(self):
        verdict = validate_params(PpParams(0.1, CustomRule(square_growth)))
        self.assertFalse(verdict)
        self.assertIn("сертификат", verdict.reason)
        self.assertFalse(validate_params(PpParams(0.1, CustomRule(square_growth, (2.0, 0.9)))))
        self.assertFalse(validate_params(PpParams(0.1, CustomRule(square_growth, (2.0, 2.0)))))
        self.assertTrue(validate_params(PpParams(0.1, CustomRule(sqrt_growth, (2.0, 0.5)))))

    def test_parse_rule(self):
        self.assertEqual(parse_rule("strauss:2.0,0.5"), Strauss(2.0, 0.5))
        self.assertEqual(parse_rule("table:1,1000,10000"), FiniteTable((1, 1000, 10000)))
        self.assertEqual(parse_rule("constant:2"), ConstantBeta(2.0))
        with self.assertRaises(InvalidRule):
            parse_rule("strauss:2.0")
        with self.assertRaises(InvalidRule):
            parse_rule("gibbs:1")


class PointConfigTests(BasePointProcessTests):
    """
    Тесты конфигурации точек.
    """

    def test_duplicates_rejected(self):
        with self.assertRaises(DuplicatePoint):
            PointConfig([[0.1, 0.1], [0.1, 0.1]], self.square)

    def test_outside_rejected(self):
        with self.assertRaises(PointOutsideDomain):
            PointConfig([[0.1, 1.1]], self.square)

    def test_with_point_and_without(self):
        config = PointConfig([[0.1, 0.1], [0.5, 0.5]], self.square)
        with self.assertRaises(PointAlreadyPresent):
            config.with_point([0.5, 0.5])
        self.assertEqual(len(config.with_point([0.2, 0.2])), 3)
        np.testing.assert_array_equal(config.without(0).points, [[0.5, 0.5]])


class DensityTests(BasePointProcessTests):
    """
    Тесты плотности, числа пар соседей и условной интенсивности.
    """

    def test_empty_configuration(self):
        params = PpParams(0.1, Strauss(2.0, 0.5))
        self.assertEqual(log_unnormalized_density(params, PointConfig.empty(self.square)), 0.0)

    def test_hard_core_violation(self):
        params = PpParams(0.1, FiniteTable((5.0,)))
        config = PointConfig([[0.5, 0.5], [0.55, 0.5]], self.square)
        self.assertEqual(log_unnormalized_density(params, config), -math.inf)

    def test_strauss_closed_form(self):
        config = self.random_config(make_rng(1), 40)
        params = PpParams(0.15, Strauss(2.0, 0.5))
        expected = 40 * math.log(2.0) + pair_count(config, 0.15) * math.log(0.5)
        self.assertAlmostEqual(log_unnormalized_density(params, config), expected, places=10)

    def test_pair_count_half_radius(self):
        self.assertEqual(pair_count(PointConfig([[0.2, 0.2], [0.2, 0.25]], self.square), 0.1), 1)

    def test_pair_count_matches_enumeration(self):
        rng = make_rng(2)
        for _ in range(20):
            config = self.random_config(rng, 30)
            points = config.points
            expected = sum(
                math.dist(points[i], points[j]) <= 0.2
                for i in range(len(points))
                for j in range(i + 1, len(points))
            )
            self.assertEqual(pair_count(config, 0.2), expected)

    def test_permutation_invariance(self):
        config = self.random_config(make_rng(3), 25)
        shuffled = PointConfig(make_rng(4).permutation(config.points), self.square)
        params = PpParams(0.2, FiniteTable((2.0, 1.5, 0.5, 0.1)))
        self.assertEqual(pair_count(config, 0.2), pair_count(shuffled, 0.2))
        self.assertAlmostEqual(
            log_unnormalized_density(params, config),
            log_unnormalized_density(params, shuffled),
            places=12,
        )

    def test_constant_rule_ratio(self):
        config = self.random_config(make_rng(5), 20)
        self.assertAlmostEqual(papangelou_ratio(PpParams(0.3, ConstantBeta(2.5)), config, [0.5, 0.5]), 2.5)

    def test_isolated_point_ratio(self):
        config = PointConfig([[0.1, 0.1], [0.9, 0.9]], self.square)
        params = PpParams(0.1, FiniteTable((3.0, 1.0)))
        self.assertAlmostEqual(papangelou_ratio(params, config, [0.5, 0.5]), 3.0)

    def test_forbidden_insertion(self):
        config = PointConfig([[0.5, 0.5]], self.square)
        params = PpParams(0.1, FiniteTable((3.0,)))
        self.assertEqual(papangelou_ratio(params, config, [0.52, 0.5]), 0.0)

    def test_ratio_matches_density_quotient(self):
        rng = make_rng(6)
        for rule in self.rules():
            params = PpParams(0.15, rule)
            for _ in range(1000):
                config = self.random_config(rng, int(rng.integers(0, 12)))
                base = log_unnormalized_density(params, config)
                if base == -math.inf:
                    continue
                u = self.square.sample_uniform(rng)
                direct = log_unnormalized_density(params, config.with_point(u)) - base
                ratio = log_papangelou_ratio(params, config, u)
                if direct == -math.inf:
                    self.assertEqual(ratio, -math.inf)
                else:
                    self.assertLessEqual(abs(ratio - direct), 1e-10)

    def test_existing_point(self):
        config = PointConfig([[0.5, 0.5]], self.square)
        with self.assertRaises(PointAlreadyPresent):
            papangelou_ratio(PpParams(0.1, ConstantBeta(1.0)), config, [0.5, 0.5])


class SamplerTests(BasePointProcessTests):
    """
    Тесты цепи рождения и гибели.
    """

    def test_hard_core_distances(self):
        params = PpParams(0.05, FiniteTable((100.0,)))
        result = sample_bd_mcmc(params, self.square, 3000, make_rng(7))
        self.assertGreater(len(result.config), 10)
        self.assertGreater(pdist(result.config.points).min(), 0.05)

    def test_finite_table_neighbour_bound(self):
        params = PpParams(0.1, FiniteTable((50.0, 20.0, 5.0)))
        result = sample_bd_mcmc(params, self.square, 3000, make_rng(8))
        self.assertLessEqual(neighbour_counts(result.config, 0.1).max(), 2)

    def test_poisson_counts(self):
        domain = Domain([0, 0], [5, 5])
        chains = run_chains(PpParams(0.1, ConstantBeta(2.0)), domain, 3000, seed=9, n_chains=40)
        summary = poisson_count_summary([len(chain.config) for chain in chains], 50.0)
        self.assertLessEqual(abs(summary["mean"] - 50.0), 3 * summary["mean_se"])
        self.assertLessEqual(abs(summary["variance"] - 50.0), 3 * summary["variance_se"])

    def test_strauss_near_one_behaves_as_poisson(self):
        domain = Domain([0, 0], [5, 5])
        chains = run_chains(PpParams(0.1, Strauss(2.0, 0.999)), domain, 3000, seed=10, n_chains=40)
        summary = poisson_count_summary([len(chain.config) for chain in chains], 50.0)
        self.assertLessEqual(abs(summary["mean"] - 50.0), 3 * summary["mean_se"])

    def test_same_seed_same_sample(self):
        params = PpParams(0.1, Strauss(20.0, 0.5))
        first = sample_bd_mcmc(params, self.square, 500, make_rng(11))
        second = sample_bd_mcmc(params, self.square, 500, make_rng(11))
        np.testing.assert_array_equal(first.config.points, second.config.points)

    def test_diagnostics(self):
        result = sample_bd_mcmc(PpParams(0.1, ConstantBeta(20.0)), self.square, 1000, make_rng(12), trace_every=10)
        self.assertEqual(result.trace.size, 100)
        self.assertEqual(result.births_proposed + result.deaths_proposed, 1000)
        self.assertEqual(set(result.acceptance_rates), {"birth", "death"})
        self.assertEqual(result.trace[-1], len(result.config))

    def test_moves_required(self):
        with self.assertRaises(ValueError):
            sample_bd_mcmc(PpParams(0.1, ConstantBeta(1.0)), self.square, 0, make_rng(13))

    def test_kernel_detailed_balance(self):
        rng = make_rng(14)
        for rule in self.rules():
            params = PpParams(0.15, rule)
            for _ in range(200):
                config = self.random_config(rng, int(rng.integers(0, 10)))
                u = self.square.sample_uniform(rng)
                self.assertLessEqual(kernel_balance_residual(params, self.square, config, u), 1e-10)

    def test_geweke(self):
        self.assertEqual(geweke_z(np.full(1000, 7)), 0.0)
        self.assertLess(abs(geweke_z(make_rng(15).normal(size=10000))), 4.0)
        self.assertGreater(abs(geweke_z(np.arange(10000))), 10.0)


class NormalizingConstantTests(BasePointProcessTests):
    """
    Тесты оценки нормировочной константы.
    """

    def test_unit_rates_exact(self):
        estimate = estimate_log_Z(PpParams(0.1, ConstantBeta(1.0)), self.square, 500, make_rng(16))
        self.assertAlmostEqual(estimate.value, 0.0, places=12)
        self.assertAlmostEqual(estimate.se, 0.0, places=12)

    def test_constant_rule_closed_form(self):
        estimate = estimate_log_Z(PpParams(0.1, ConstantBeta(1.5)), self.square, 20000, make_rng(17))
        self.assertLessEqual(abs(estimate.value - 0.5), 3 * estimate.se)
        self.assertLess(estimate.se, 0.02)

    def test_hard_core_segment(self):
        domain = Domain([0.0], [0.15])
        estimate = estimate_log_Z(PpParams(0.1, FiniteTable((2.0,))), domain, 20000, make_rng(18))
        exact = hard_core_log_Z_1d(2.0, 0.1, 0.15)
        self.assertLessEqual(abs(estimate.value - exact), 3 * estimate.se)

    def test_segment_formula_range(self):
        with self.assertRaises(ValueError):
            hard_core_log_Z_1d(2.0, 0.1, 0.25)

    def test_minimum_samples(self):
        with self.assertRaises(ValueError):
            estimate_log_Z(PpParams(0.1, ConstantBeta(1.0)), self.square, 50, make_rng(19))


class FittingTests(BasePointProcessTests):
    """
    Тесты экспериментальной сеточной оценки.
    """

    def test_estimate_N(self):
        self.assertEqual(estimate_N_pp(PointConfig.empty(self.square), 0.1), 0)
        config = PointConfig([[0.1, 0.5], [0.15, 0.5], [0.2, 0.5]], self.square)
        self.assertEqual(estimate_N_pp(config, 0.1), 2)

    def test_grid_maximum(self):
        config = PointConfig([[0.5, 0.5]], self.square)
        fit = fit_finite_table(config, self.square, 0.05, [(0.5, 1.0, 1.5)], 20000, make_rng(20))
        self.assertEqual(fit.N_hat, 0)
        self.assertEqual(fit.table, (1.0,))
        self.assertEqual(len(fit.candidates), 3)
        self.assertTrue(fit.to_dict()["experimental"])

    def test_grid_shape_checked(self):
        config = PointConfig([[0.5, 0.5]], self.square)
        with self.assertRaises(ValueError):
            fit_finite_table(config, self.square, 0.05, [(1.0,), (1.0,)], 200, make_rng(21))

    @tag("slow")
    def test_long_chain_converges(self):
        params = PpParams(0.05, Strauss(100.0, 0.5))
        result = sample_bd_mcmc(params, self.square, 200000, make_rng(22), trace_every=10)
        self.assertLess(abs(geweke_z(result.trace[result.trace.size // 10:])), 4.0)
