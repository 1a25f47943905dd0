import math

import networkx as nx
import numpy as np
from django.test import SimpleTestCase, override_settings
from scipy.special import softmax

from config.rng import make_rng
from graph_core.graph import Graph, make_family

from .classification import Verdict, classify, critical_beta
from .exceptions import Disconnected, InvalidCtmcParams, NotNormalized, StateSpaceTooLarge
from .monotonicity import (
    occupancy_covariances,
    stochastic_dominance,
    verify_beta_dominance,
    verify_monotonicity,
)
from .params import CtmcParams
from .potential import check_detailed_balance, potential_Q, potential_S, potential_W
from .rates import log_rate, rates
from .simulation import CtmcTrajectory, simulate_ctmc
from .stationary import (
    conditional_site_law,
    ising_log_weights,
    solve_global_balance,
    stationary_finite,
)


class BaseCtmcTests(SimpleTestCase):
    """
    Базовый класс с конструктором параметров.
    """

    @classmethod
    def make_params(cls, alpha, beta, graph="path:2", variant=CtmcParams.X_RATES, cap=None):
        if isinstance(graph, str):
            kind, size = graph.split(":")
            graph = make_family(kind, int(size))
        return CtmcParams(alpha, beta, graph, variant=variant, cap=cap)


class RatesTests(BaseCtmcTests):
    """
    Тесты интенсивностей переходов.
    """

    def test_origin_births_only(self):
        params = self.make_params(-0.7, 1.3, "cycle:3")
        transitions = rates(params, [0, 0, 0])
        self.assertEqual(
            transitions, [((1, 0, 0), 1.0), ((0, 1, 0), 1.0), ((0, 0, 1), 1.0)]
        )

    def test_two_vertex_hand_evaluation(self):
        params = self.make_params(1.0, -1.0)
        transitions = dict(rates(params, [2, 1]))
        self.assertAlmostEqual(transitions[(3, 1)], math.e)
        self.assertAlmostEqual(transitions[(2, 2)], 1 / math.e)
        self.assertEqual(transitions[(1, 1)], 1.0)
        self.assertEqual(transitions[(2, 0)], 1.0)

    def test_y_variant_rates(self):
        params = self.make_params(1.0, -1.0, variant=CtmcParams.Y_RATES)
        transitions = dict(rates(params, [2, 1]))
        self.assertAlmostEqual(transitions[(3, 1)], math.e**2)
        self.assertAlmostEqual(transitions[(2, 2)], math.e)
        self.assertAlmostEqual(transitions[(1, 1)], math.e)
        self.assertAlmostEqual(transitions[(2, 0)], math.e**2)

    def test_cap_blocks_birth(self):
        params = self.make_params(0.5, 0.5, cap=1)
        targets = [target for target, _ in rates(params, [1, 0])]
        self.assertNotIn((2, 0), targets)
        self.assertIn((1, 1), targets)

    def test_non_neighbouring_states(self):
        params = self.make_params(0.5, 0.5)
        self.assertEqual(log_rate(params, [0, 0], [1, 1]), -np.inf)

    def test_invalid_cap(self):
        with self.assertRaises(InvalidCtmcParams):
            self.make_params(0.0, 0.0, cap=0)


class PotentialTests(BaseCtmcTests):
    """
    Тесты потенциала W и детального баланса.
    """

    def test_origin(self):
        self.assertEqual(potential_W(self.make_params(1.3, -0.4, "star:3"), [0, 0, 0, 0]), 0.0)

    def test_single_site_alpha_zero(self):
        params = self.make_params(0.0, 0.9, "cycle:4")
        for k in range(6):
            self.assertEqual(potential_W(params, [0, k, 0, 0]), 0.0)

    def test_matches_quadratic_forms(self):
        rng = make_rng(1)
        params = self.make_params(-0.8, 0.35, "star:4")
        for _ in range(100):
            x = rng.integers(0, 8, size=5)
            expected = -potential_Q(params, x) - params.alpha / 2 * potential_S(params, x)
            self.assertAlmostEqual(potential_W(params, x), expected, places=9)

    def test_detailed_balance_random_triples(self):
        rng = make_rng(2)
        graphs = [make_family("cycle", 5), make_family("star", 4), make_family("complete", 3)]
        worst = 0.0
        for _ in range(10**4):
            graph = graphs[rng.integers(len(graphs))]
            variant = CtmcParams.X_RATES if rng.random() < 0.5 else CtmcParams.Y_RATES
            cap = 6 if rng.random() < 0.5 else None
            params = CtmcParams(rng.uniform(-2, 2), rng.uniform(-2, 2), graph, variant, cap)
            x = rng.integers(0, 6, size=graph.n)
            v = int(rng.integers(graph.n))
            worst = max(worst, check_detailed_balance(params, x, v))
        self.assertLessEqual(worst, 1e-12)

    def test_perturbed_death_detected(self):
        epsilon = 0.05

        def perturbed(params, x, y):
            value = log_rate(params, x, y)
            if np.sum(y) < np.sum(x):
                value += math.log(1 + epsilon)
            return value

        params = self.make_params(-1.0, 0.5, "path:3")
        residual = check_detailed_balance(params, [1, 2, 0], 1, log_rate_fn=perturbed)
        self.assertAlmostEqual(residual, math.log(1 + epsilon), places=10)


class SimulationTests(BaseCtmcTests):
    """
    Тесты симуляции Гиллеспи.
    """

    def test_single_vertex_occupation(self):
        params = CtmcParams(-2.0, 0.0, Graph(1))
        trajectory = simulate_ctmc(params, [0], 20000, 10**6, make_rng(3), thin=100, record_occupation=True)
        self.assertEqual(trajectory.outcome, CtmcTrajectory.COMPLETED_HORIZON)
        weights = np.exp([-k * (k - 1) for k in range(8)])
        expected = weights / weights.sum()
        empirical = trajectory.occupation_law()
        observed = np.array([empirical.get((k,), 0.0) for k in range(8)])
        self.assertLessEqual(0.5 * np.abs(observed - expected).sum(), 0.03)

    def test_capped_occupation_approaches_stationary_law(self):
        params = self.make_params(-1.0, 0.5, "path:2", cap=2)
        law = stationary_finite(params)

        def distance(t_max, seed):
            trajectory = simulate_ctmc(
                params, None, t_max, 10**7, make_rng(9, seed), thin=10**6, record_occupation=True
            )
            self.assertEqual(trajectory.outcome, CtmcTrajectory.COMPLETED_HORIZON)
            empirical = trajectory.occupation_law()
            observed = np.array([empirical.get(tuple(int(c) for c in x), 0.0) for x in law.states])
            return 0.5 * np.abs(observed - law.probabilities).sum()

        short = np.mean([distance(100.0, seed) for seed in range(3)])
        long = np.mean([distance(10000.0, seed) for seed in range(3)])
        self.assertLess(long, short)
        self.assertLessEqual(long, 0.05)

    def test_explosion_signal(self):
        params = self.make_params(1.0, 0.5, "path:2")
        fast = 0
        for seed in range(20):
            trajectory = simulate_ctmc(params, None, 100.0, 5000, make_rng(4, seed), thin=1000)
            fast += trajectory.exploded and trajectory.t_reached < 5.0
        self.assertGreaterEqual(fast, 18)

    def test_bounded_rates_never_hit_cap(self):
        params = self.make_params(0.0, -1.0, "cycle:5")
        for seed in range(5):
            trajectory = simulate_ctmc(params, None, 100.0, 10**5, make_rng(5, seed), thin=100)
            self.assertEqual(trajectory.outcome, CtmcTrajectory.COMPLETED_HORIZON)
            self.assertLessEqual(trajectory.max_log_rate, math.log(10) + 1e-12)

    def test_recurrent_returns_to_origin(self):
        params = self.make_params(-1.0, 0.4, "star:4")
        returned = sum(
            simulate_ctmc(params, None, 500.0, 10**6, make_rng(6, seed), thin=1000).origin_visits > 1
            for seed in range(10)
        )
        self.assertGreaterEqual(returned, 9)

    def test_same_seed_same_path(self):
        params = self.make_params(-0.5, 0.2, "cycle:4")
        first = simulate_ctmc(params, None, 50.0, 10**5, make_rng(7))
        second = simulate_ctmc(params, None, 50.0, 10**5, make_rng(7))
        np.testing.assert_array_equal(first.times, second.times)
        np.testing.assert_array_equal(first.states, second.states)
        self.assertEqual(list(first.to_frame().columns), ["t", "x_0", "x_1", "x_2", "x_3"])


class ClassificationTests(BaseCtmcTests):
    """
    Тесты таблицы решений классификации.
    """

    def test_star_boundary(self):
        star = make_family("star", 4)
        expected = {
            0.49: Verdict.POSITIVE_RECURRENT,
            0.5: Verdict.TRANSIENT_NON_EXPLOSIVE,
            0.75: Verdict.TRANSIENT_EXPLOSIVITY_UNKNOWN,
            1.0: Verdict.TRANSIENT_EXPLOSIVITY_UNKNOWN,
            1.01: Verdict.TRANSIENT_EXPLOSIVE,
        }
        for beta, verdict in expected.items():
            result = classify(-1.0, beta, star)
            self.assertEqual(result.verdict, verdict, msg=f"β={beta}")
            self.assertEqual(result.lambda1, 2.0)
            self.assertEqual(result.min_degree, 1)

    def test_star_positive_recurrent(self):
        self.assertEqual(classify(-1, 0.4, make_family("star", 4)).verdict, Verdict.POSITIVE_RECURRENT)

    def test_cycles_alpha_zero(self):
        five = classify(0, -1, make_family("cycle", 5))
        six = classify(0, -1, make_family("cycle", 6))
        self.assertEqual(five.verdict, Verdict.NULL_RECURRENT)
        self.assertEqual(five.kappa, 2)
        self.assertEqual(six.verdict, Verdict.TRANSIENT_NON_EXPLOSIVE)
        self.assertEqual(six.kappa, 3)

    def test_independent_case(self):
        self.assertEqual(classify(-1, 0, make_family("cycle", 4)).verdict, Verdict.POSITIVE_RECURRENT)
        self.assertEqual(classify(0, 0, make_family("path", 2)).verdict, Verdict.NULL_RECURRENT)
        self.assertEqual(classify(0, 0, make_family("cycle", 3)).verdict, Verdict.TRANSIENT_NON_EXPLOSIVE)
        self.assertEqual(classify(0.1, 0, make_family("cycle", 3)).verdict, Verdict.TRANSIENT_EXPLOSIVE)

    def test_explosive_cases(self):
        graph = make_family("path", 4)
        self.assertEqual(classify(0.5, -2, graph).verdict, Verdict.TRANSIENT_EXPLOSIVE)
        self.assertEqual(classify(0, 0.1, graph).verdict, Verdict.TRANSIENT_EXPLOSIVE)

    def test_kappa_only_for_repulsive_alpha_zero(self):
        self.assertIsNone(classify(-1, 0.3, make_family("cycle", 6)).kappa)

    def test_computed_lambda_boundary(self):
        graph = Graph(4, [(0, 1), (1, 2), (2, 0), (2, 3)])
        lam = classify(-1, 0.1, graph).lambda1
        self.assertEqual(classify(-1, 1 / lam, graph).verdict, Verdict.TRANSIENT_NON_EXPLOSIVE)

    def test_total_on_grid(self):
        graph = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)])
        verdicts = {value for value, _ in Verdict.CHOICES}
        for alpha in np.linspace(-2, 2, 9):
            for beta in np.linspace(-2, 2, 9):
                self.assertIn(classify(alpha, beta, graph).verdict, verdicts)

    def test_disconnected(self):
        with self.assertRaises(Disconnected):
            classify(-1, 0.2, Graph(4, [(0, 1), (2, 3)]))

    def test_y_variant_inherited(self):
        result = classify(-1, 0.4, make_family("star", 4), variant=CtmcParams.Y_RATES)
        self.assertEqual(result.source, "inherited")
        self.assertEqual(result.verdict, Verdict.POSITIVE_RECURRENT)

    def test_critical_beta(self):
        self.assertEqual(critical_beta(-1.0, make_family("star", 4)), 0.5)
        with self.assertRaises(ValueError):
            critical_beta(0.0, make_family("star", 4))


class StationaryTests(BaseCtmcTests):
    """
    Тесты точного стационарного закона ограниченной цепи.
    """

    def test_single_vertex_uniform(self):
        for alpha in (-3.0, 0.0, 2.0):
            law = stationary_finite(CtmcParams(alpha, 0.7, Graph(1), cap=1))
            np.testing.assert_allclose(law.probabilities, [0.5, 0.5])

    def test_two_vertices_match_linear_solve(self):
        law = stationary_finite(self.make_params(-1.0, 0.5, cap=2))
        self.assertLessEqual(law.total_variation, 1e-10)
        self.assertAlmostEqual(law.probabilities.sum(), 1.0)

    def test_several_graphs_match_linear_solve(self):
        cases = [
            ("path:3", 3, -1.0, 0.5, CtmcParams.X_RATES),
            ("star:3", 2, 0.5, -0.3, CtmcParams.X_RATES),
            ("cycle:4", 2, -0.5, 0.8, CtmcParams.Y_RATES),
            ("complete:4", 3, -1.0, 0.3, CtmcParams.X_RATES),
            ("cycle:5", 3, 0.2, -0.5, CtmcParams.Y_RATES),
            ("star:5", 4, -1.0, 0.4, CtmcParams.X_RATES),
        ]
        for graph, cap, alpha, beta, variant in cases:
            law = stationary_finite(self.make_params(alpha, beta, graph, variant=variant, cap=cap))
            self.assertLessEqual(law.total_variation, 1e-10, msg=graph)

    def test_global_balance_solution_normalised(self):
        solved = solve_global_balance(self.make_params(-0.3, 0.6, "path:3", cap=2))
        self.assertAlmostEqual(solved.sum(), 1.0)
        self.assertTrue(np.all(solved > 0))

    def test_ising_correspondence(self):
        for graph in ("cycle:4", "star:3"):
            params = self.make_params(0.3, 0.8, graph, cap=1)
            law = stationary_finite(params, cross_check=False)
            spins = 2 * law.states - 1
            expected = softmax(ising_log_weights(params.graph, 0.8, spins))
            np.testing.assert_allclose(law.probabilities, expected, rtol=1e-12)

    @override_settings(STATE_SPACE_LIMIT=100)
    def test_state_space_limit(self):
        with self.assertRaises(StateSpaceTooLarge):
            stationary_finite(self.make_params(-1, 0.2, "cycle:5", cap=2))

    def test_conditional_isolated_vertex_uniform(self):
        params = CtmcParams(0.0, 0.9, Graph(3, [(1, 2)]), cap=3)
        np.testing.assert_allclose(conditional_site_law(params, [0, 2, 1], 0), np.full(4, 0.25))

    def test_conditional_matches_marginalisation(self):
        params = self.make_params(-0.5, 0.7, "path:3", cap=2)
        law = stationary_finite(params, cross_check=False)
        x = np.array([2, 0, 1])
        mask = (law.states[:, 0] == x[0]) & (law.states[:, 2] == x[2])
        direct = law.probabilities[mask] / law.probabilities[mask].sum()
        np.testing.assert_allclose(conditional_site_law(params, x, 1), direct, rtol=1e-12)

    def test_probability_of(self):
        law = stationary_finite(self.make_params(-1.0, 0.5, cap=2), cross_check=False)
        weights = np.exp([potential_W(law.params, s) for s in law.states])
        self.assertAlmostEqual(law.probability_of([1, 2]), weights[5] / weights.sum())


class DominanceTests(BaseCtmcTests):
    """
    Тесты стохастического доминирования и монотонности.
    """

    def test_equal_laws(self):
        result = stochastic_dominance([0.2, 0.3, 0.5], [0.2, 0.3, 0.5])
        self.assertTrue(result.dominates)
        self.assertTrue(result.premise)

    def test_dominance_fails(self):
        self.assertFalse(stochastic_dominance([0.5, 0.5], [0.9, 0.1]).dominates)

    def test_not_normalized(self):
        with self.assertRaises(NotNormalized):
            stochastic_dominance([0.5, 0.4], [0.5, 0.5])

    def test_neighbour_increase_shifts_law_up(self):
        params = self.make_params(-0.5, 0.6, "star:3", cap=3)
        lower = conditional_site_law(params, [0, 1, 0, 2], 0)
        upper = conditional_site_law(params, [0, 2, 0, 2], 0)
        result = stochastic_dominance(lower, upper)
        self.assertTrue(result.dominates)
        self.assertTrue(result.premise)

    def test_equal_beta_gives_equality(self):
        params = self.make_params(-1.0, 0.3, "path:3", cap=2)
        report = verify_beta_dominance(params, params)
        self.assertTrue(report["ordered"])
        for item in report["expectations"].values():
            self.assertAlmostEqual(item["lower"], item["upper"])

    def test_two_vertices_beta_order(self):
        report = verify_beta_dominance(
            self.make_params(-1.0, 0.1, cap=2), self.make_params(-1.0, 0.5, cap=2)
        )
        self.assertTrue(report["ordered"])
        self.assertTrue(report["holley_premise"])

    def test_beta_order_required(self):
        with self.assertRaises(InvalidCtmcParams):
            verify_beta_dominance(self.make_params(-1.0, 0.5, cap=2), self.make_params(-1.0, 0.1, cap=2))

    def test_small_graphs_suite(self):
        graphs = [
            Graph.from_networkx(graph)
            for graph in nx.graph_atlas_g()
            if 1 <= graph.number_of_nodes() <= 4
        ]
        self.assertEqual(len(graphs), 18)
        for graph in graphs:
            for cap in (1, 2):
                for alpha in (-1.0, 0.0, 1.0):
                    low = CtmcParams(alpha, 0.2, graph, cap=cap)
                    high = CtmcParams(alpha, 0.8, graph, cap=cap)
                    for params in (low, high):
                        self.assertTrue(verify_monotonicity(params).holds)
                        covariances = occupancy_covariances(stationary_finite(params, cross_check=False))
                        self.assertTrue(np.all(covariances >= -1e-12))
                    report = verify_beta_dominance(low, high)
                    self.assertTrue(report["ordered"], msg=f"{graph.edges}, N={cap}, α={alpha}")
