import math
import os
import tempfile
from itertools import combinations

import numpy as np
from django.test import SimpleTestCase, override_settings

from config.rng import make_rng

from .combinatorics import (
    independence_number,
    is_clique,
    is_maximal_clique,
    maximal_cliques,
    maximum_independent_set,
)
from .exceptions import BadSize, EmptyGraph, InvalidGraph, TooLarge
from .graph import Graph, make_family, parse_graph_spec, read_edge_list
from .spectral import (
    characteristic_polynomial,
    characteristic_spectrum,
    closed_form_lambda1,
    lambda1,
)


class BaseGraphTests(SimpleTestCase):
    """
    Базовый класс с генератором случайных графов.
    """

    @classmethod
    def random_graph(cls, n, p, seed):
        rng = make_rng(seed)
        edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
        return Graph(n, edges)


class GraphTests(BaseGraphTests):
    def test_cycle_three(self):
        graph = make_family("cycle", 3)
        self.assertEqual(graph.n, 3)
        self.assertEqual(graph.number_of_edges, 3)

    def test_star_four(self):
        graph = make_family("star", 4)
        self.assertEqual(graph.n, 5)
        self.assertEqual(graph.number_of_edges, 4)
        self.assertEqual(graph.max_degree, 4)

    def test_path_five(self):
        graph = make_family("path", 5)
        self.assertEqual(graph.number_of_edges, 4)
        self.assertEqual(graph.degrees[0], 1)
        self.assertEqual(graph.degrees[-1], 1)

    def test_bad_size(self):
        with self.assertRaises(BadSize):
            make_family("cycle", 2)
        with self.assertRaises(BadSize):
            make_family("star", 0)

    def test_self_loop_rejected(self):
        with self.assertRaises(InvalidGraph):
            Graph(3, [(1, 1)])

    def test_adjacency_symmetric(self):
        graph = self.random_graph(9, 0.4, seed=1)
        np.testing.assert_array_equal(graph.adjacency, graph.adjacency.T)
        np.testing.assert_array_equal(np.diag(graph.adjacency), np.zeros(9))
        np.testing.assert_array_equal(graph.adjacency.sum(axis=1), graph.degrees)

    def test_connectivity(self):
        self.assertTrue(make_family("path", 4).is_connected)
        self.assertFalse(Graph(4, [(0, 1), (2, 3)]).is_connected)

    def test_parse_graph_spec(self):
        self.assertEqual(parse_graph_spec("cycle:7"), make_family("cycle", 7))
        self.assertEqual(parse_graph_spec("star:4").family, ("star", 4))
        with self.assertRaises(InvalidGraph):
            parse_graph_spec("cycle")
        with self.assertRaises(InvalidGraph):
            parse_graph_spec("wheel:5")

    def test_edge_list_file(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, "triangle.txt")
            with open(path, "w", encoding="utf-8") as handle:
                handle.write("# треугольник с висячей вершиной\n0 1\n1,2\n2 0  # замыкание\n\n2 3\n")
            graph = read_edge_list(path)
            self.assertEqual(graph.n, 4)
            self.assertEqual(graph.edges, ((0, 1), (0, 2), (1, 2), (2, 3)))
            self.assertEqual(parse_graph_spec(f"edges:{path}"), graph)


class SpectralTests(BaseGraphTests):
    """
    Тесты перронова корня и характеристического многочлена.
    """

    def test_star(self):
        self.assertAlmostEqual(lambda1(make_family("star", 4)), 2.0, places=9)

    def test_path(self):
        self.assertAlmostEqual(lambda1(make_family("path", 5)), math.sqrt(3), places=9)

    def test_regular_cycle(self):
        self.assertAlmostEqual(lambda1(make_family("cycle", 5)), 2.0, places=9)
        self.assertAlmostEqual(lambda1(make_family("cycle", 6)), 2.0, places=9)

    def test_complete(self):
        self.assertAlmostEqual(lambda1(make_family("complete", 5)), 4.0, places=9)

    def test_long_path_without_cross_check(self):
        self.assertAlmostEqual(
            lambda1(make_family("path", 30)), 2 * math.cos(math.pi / 31), places=8
        )

    def test_closed_form(self):
        self.assertEqual(closed_form_lambda1(make_family("star", 9)), 3.0)
        self.assertEqual(lambda1(make_family("cycle", 8), use_closed_form=True), 2.0)
        self.assertIsNone(closed_form_lambda1(Graph(3, [(0, 1)])))

    def test_empty_graph(self):
        with self.assertRaises(EmptyGraph):
            lambda1(Graph(3))

    def test_degree_bounds(self):
        for seed in range(20):
            graph = self.random_graph(10, 0.35, seed=seed)
            if not graph.is_connected:
                continue
            value = lambda1(graph)
            self.assertLessEqual(graph.min_degree, value + 1e-9)
            self.assertLessEqual(value, graph.max_degree + 1e-9)

    def test_matches_numpy_eigenvalues(self):
        for seed in range(10):
            graph = self.random_graph(15, 0.3, seed=100 + seed)
            if graph.number_of_edges == 0:
                continue
            expected = np.linalg.eigvalsh(graph.adjacency).max()
            self.assertAlmostEqual(lambda1(graph), expected, places=8)

    def test_triangle_polynomial(self):
        self.assertEqual(characteristic_polynomial(make_family("cycle", 3)), [1, 0, -3, -2])

    def test_path_spectrum(self):
        spectrum = characteristic_spectrum(make_family("path", 4))
        expected = [2 * math.cos(k * math.pi / 5) for k in range(1, 5)]
        np.testing.assert_allclose(spectrum, expected, atol=1e-9)

    def test_spectrum_limit(self):
        with self.assertRaises(TooLarge):
            characteristic_spectrum(make_family("cycle", 13))


class CombinatoricsTests(BaseGraphTests):
    """
    Тесты числа независимости и максимальных клик.
    """

    @classmethod
    def brute_force_independence(cls, graph):
        for size in range(graph.n, 0, -1):
            for subset in combinations(range(graph.n), size):
                if not any(graph.are_adjacent(u, v) for u, v in combinations(subset, 2)):
                    return size
        return 0

    def test_star(self):
        self.assertEqual(independence_number(make_family("star", 6)), 6)

    def test_cycle(self):
        self.assertEqual(independence_number(make_family("cycle", 7)), 3)
        self.assertEqual(independence_number(make_family("cycle", 5)), 2)
        self.assertEqual(independence_number(make_family("cycle", 6)), 3)

    def test_complete(self):
        self.assertEqual(independence_number(make_family("complete", 5)), 1)

    def test_matches_exhaustive_search(self):
        for seed in range(15):
            graph = self.random_graph(11, 0.3, seed=200 + seed)
            self.assertEqual(independence_number(graph), self.brute_force_independence(graph))
            independent = maximum_independent_set(graph)
            self.assertFalse(
                any(graph.are_adjacent(u, v) for u, v in combinations(independent, 2))
            )

    @override_settings(GRAPH_EXACT_CAP=5)
    def test_cap_from_settings(self):
        with self.assertRaises(TooLarge):
            independence_number(make_family("cycle", 6))
        with self.assertRaises(TooLarge):
            maximal_cliques(make_family("cycle", 6))

    def test_cycle_cliques_are_edges(self):
        graph = make_family("cycle", 6)
        cliques = maximal_cliques(graph)
        self.assertEqual(sorted(tuple(sorted(c)) for c in cliques), list(graph.edges))

    def test_complete_single_clique(self):
        self.assertEqual(maximal_cliques(make_family("complete", 4)), [frozenset(range(4))])

    def test_triangle_with_pendant(self):
        graph = Graph(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
        self.assertEqual(maximal_cliques(graph), [frozenset({0, 1, 2}), frozenset({2, 3})])

    def test_cliques_pass_direct_checks(self):
        for seed in range(10):
            graph = self.random_graph(10, 0.5, seed=300 + seed)
            cliques = maximal_cliques(graph)
            for clique in cliques:
                self.assertTrue(is_clique(graph, clique))
                self.assertTrue(is_maximal_clique(graph, clique))
            exhaustive = {
                frozenset(subset)
                for size in range(1, graph.n + 1)
                for subset in combinations(range(graph.n), size)
                if is_maximal_clique(graph, subset)
            }
            self.assertEqual(set(cliques), exhaustive)

    def test_non_maximal_clique(self):
        graph = make_family("complete", 4)
        self.assertTrue(is_clique(graph, {0, 1}))
        self.assertFalse(is_maximal_clique(graph, {0, 1}))
