import math

import numpy as np
from django.test import SimpleTestCase, tag
from scipy import stats as scipy_stats

from config.rng import make_rng
from graph_core.exceptions import BadSize
from graph_core.graph import Graph, make_family

from .dynamics import growth_step_distribution, simulate_growth
from .exceptions import WindowTooLarge
from .localisation import detect_localisation, ensemble_localisation
from .min_rule import cyclic_sums, min_rule_tail, simulate_min_rule
from .state import GrowthState


class StepDistributionTests(SimpleTestCase):
    """
    Тесты распределения одного шага процесса роста.
    """

    def test_single_vertex(self):
        probabilities = growth_step_distribution(Graph(1), 1.0, 1.0, GrowthState([5]))
        np.testing.assert_array_equal(probabilities, [1.0])

    def test_symmetric_state_uniform(self):
        graph = make_family("cycle", 6)
        probabilities = growth_step_distribution(graph, 0.7, -0.3, GrowthState(np.zeros(6)))
        np.testing.assert_allclose(probabilities, np.full(6, 1 / 6))

    def test_triangle_hand_evaluation(self):
        graph = make_family("complete", 3)
        probabilities = growth_step_distribution(graph, 1.0, 1.0, GrowthState([2, 1, 0]))
        np.testing.assert_allclose(probabilities, np.full(3, 1 / 3))

    def test_large_counts_do_not_overflow(self):
        graph = make_family("path", 4)
        rng = make_rng(3)
        for _ in range(50):
            state = GrowthState(rng.integers(0, 10**4, size=4))
            probabilities = growth_step_distribution(graph, 2.0, 1.5, state)
            self.assertTrue(np.all(np.isfinite(probabilities)))
            self.assertAlmostEqual(probabilities.sum(), 1.0, delta=1e-12)


class SimulateGrowthTests(SimpleTestCase):
    """
    Тесты траекторий процесса роста.
    """

    def test_zero_steps(self):
        trajectory = simulate_growth(make_family("cycle", 4), 1.0, 1.0, [1, 2, 3, 4], 0, make_rng(1))
        np.testing.assert_array_equal(trajectory.counts, [[1, 2, 3, 4]])
        self.assertEqual(trajectory.n_steps, 0)

    def test_total_grows_by_one(self):
        trajectory = simulate_growth(make_family("star", 3), 0.5, 0.2, None, 200, make_rng(2))
        np.testing.assert_array_equal(trajectory.counts.sum(axis=1), trajectory.steps)
        self.assertEqual(trajectory.final.total, 200)
        np.testing.assert_array_equal(
            np.bincount(trajectory.increments, minlength=4), trajectory.counts[-1]
        )

    def test_thinning_keeps_last_step(self):
        trajectory = simulate_growth(make_family("cycle", 5), 1.0, 0.0, None, 105, make_rng(3), thin=10)
        self.assertEqual(list(trajectory.steps), [0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 105])
        self.assertEqual(trajectory.increments.size, 105)
        self.assertEqual(list(trajectory.to_frame().columns), ["step"] + [f"v_{v}" for v in range(5)])

    def test_first_step_frequencies(self):
        graph = make_family("path", 4)
        x0 = [0, 1, 2, 0]
        expected = growth_step_distribution(graph, 0.5, 0.3, GrowthState(x0))
        rng = make_rng(4)
        first = [
            simulate_growth(graph, 0.5, 0.3, x0, 1, rng).increments[0]
            for _ in range(20000)
        ]
        observed = np.bincount(first, minlength=4)
        result = scipy_stats.chisquare(observed, expected * len(first))
        self.assertGreater(result.pvalue, 1e-3)

    def test_beta_zero_ignores_edges(self):
        uniforms = make_rng(5).random(500)
        connected = simulate_growth(make_family("cycle", 5), 0.8, 0.0, [3, 0, 1, 0, 2], 500, None, uniforms=uniforms)
        edgeless = simulate_growth(Graph(5), 0.8, 0.0, [3, 0, 1, 0, 2], 500, None, uniforms=uniforms)
        np.testing.assert_array_equal(connected.increments, edgeless.increments)

    def test_polya_urn_monopoly(self):
        graph = Graph(2)
        for seed in range(5):
            trajectory = simulate_growth(graph, 1.0, 0.0, None, 2000, make_rng(6, seed))
            report = detect_localisation(trajectory, graph)
            self.assertEqual(len(report.final_set), 1)


class LocalisationTests(SimpleTestCase):
    """
    Тесты эвристики локализации на максимальной клике.
    """

    def test_path_localises_on_edge(self):
        graph = make_family("path", 3)
        runs, rate = ensemble_localisation(graph, 1.0, 1.0, 5000, seed=7, n_seeds=10)
        self.assertGreaterEqual(rate, 0.8)
        self.assertFalse(any(runs["final_set"] == "0 1 2"))

    def test_complete_graph_counts_equalise(self):
        graph = make_family("complete", 3)
        for seed in range(5):
            trajectory = simulate_growth(graph, 1.0, 2.0, None, 2000, make_rng(8, seed))
            report = detect_localisation(trajectory, graph)
            self.assertEqual(report.final_set, frozenset({0, 1, 2}))
            self.assertTrue(report.is_maximal_clique)
            for value in report.ratio_estimates.values():
                self.assertLessEqual(abs(value), math.log(1.1))

    @tag("slow")
    def test_path_localisation_rate_long_runs(self):
        runs, rate = ensemble_localisation(make_family("path", 3), 1.0, 1.0, 10**5, seed=9, n_seeds=50)
        self.assertGreaterEqual(rate, 0.95)
        self.assertGreaterEqual((runs["size"] == 2).mean(), 0.95)

    @tag("slow")
    def test_complete_graph_ratios_long_runs(self):
        graph = make_family("complete", 3)
        balanced = 0
        for seed in range(50):
            trajectory = simulate_growth(graph, 1.0, 2.0, None, 10**5, make_rng(10, seed), thin=10**5)
            counts = trajectory.final.counts.astype(float)
            ratios = counts[:, None] / counts[None, :]
            balanced += bool(np.all((ratios >= 0.9) & (ratios <= 1.1)))
        self.assertGreaterEqual(balanced, 45)

    def test_single_vertex(self):
        graph = Graph(1)
        trajectory = simulate_growth(graph, 1.0, 1.0, None, 10, make_rng(9))
        report = detect_localisation(trajectory, graph, window=3)
        self.assertEqual(report.final_set, frozenset({0}))
        self.assertTrue(report.is_maximal_clique)
        self.assertEqual(report.ratio_estimates, {})

    def test_ratio_pairs_within_final_set(self):
        graph = make_family("complete", 3)
        trajectory = simulate_growth(graph, 1.0, 2.0, None, 300, make_rng(10))
        report = detect_localisation(trajectory, graph, window=50)
        for v, u in report.ratio_estimates:
            self.assertIn(v, report.final_set)
            self.assertIn(u, report.final_set)
        self.assertEqual(len(report.ratio_estimates), 6)

    def test_window_too_large(self):
        graph = make_family("path", 3)
        trajectory = simulate_growth(graph, 1.0, 1.0, None, 10, make_rng(11))
        with self.assertRaises(WindowTooLarge):
            detect_localisation(trajectory, graph, window=10)


class MinRuleTests(SimpleTestCase):
    """
    Тесты правила минимума на циклах.
    """

    def test_small_cycle_rejected(self):
        with self.assertRaises(BadSize):
            simulate_min_rule(2, None, 10, make_rng(1))

    def test_first_step_uniform(self):
        first = [
            simulate_min_rule(4, None, 1, make_rng(12, seed)).increments[0]
            for seed in range(4000)
        ]
        result = scipy_stats.chisquare(np.bincount(first, minlength=4))
        self.assertGreater(result.pvalue, 1e-3)

    def test_chosen_vertex_attains_minimum(self):
        rng = make_rng(13)
        for _ in range(200):
            x0 = rng.integers(0, 5, size=7)
            vertex = simulate_min_rule(7, x0, 1, rng).increments[0]
            sums = [x0[(i - 1) % 7] + x0[i] + x0[(i + 1) % 7] for i in range(7)]
            self.assertEqual(sums[vertex], min(sums))
            np.testing.assert_array_equal(cyclic_sums(x0), sums)

    def test_four_cycle_confinement(self):
        for seed in range(100):
            trajectory = simulate_min_rule(4, None, 10**4, make_rng(14, seed))
            tail = min_rule_tail(trajectory, 4, window=1000)
            self.assertEqual(len(tail["active"]), 2)
            self.assertTrue(tail["non_adjacent"])
            self.assertLessEqual(tail["max_difference"], 1)
            # на активной паре числа частиц совпадают через шаг
            self.assertEqual(tail["max_difference"], 0)
