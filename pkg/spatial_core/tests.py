import math
import os
import tempfile

import numpy as np
from django.test import SimpleTestCase

from config.rng import make_rng

from .exceptions import DimensionMismatch, InvalidDomain, PointOutsideDomain
from .geometry import (
    Domain,
    NeighbourGrid,
    PointSeq,
    ball_volume,
    neighbour_count,
    volume,
)
from .io import read_points_csv, write_points_csv


class DomainTests(SimpleTestCase):
    """
    Тесты области: объём, принадлежность и проверка границ.
    """

    def test_unit_square_volume(self):
        self.assertEqual(volume(Domain.unit_cube(2)), 1.0)

    def test_box_volume(self):
        self.assertEqual(volume(Domain([0, 0], [2, 3])), 6.0)

    def test_rescaled_cube_volume(self):
        self.assertAlmostEqual(volume(Domain.rescaled_cube(2, 16)), 16.0)
        self.assertAlmostEqual(volume(Domain.rescaled_cube(3, 5)), 5.0)

    def test_degenerate_bounds_rejected(self):
        with self.assertRaises(InvalidDomain):
            Domain([0, 1], [1, 1])
        with self.assertRaises(InvalidDomain):
            Domain([0, 0], [1, 1, 1])

    def test_containment_is_closed(self):
        domain = Domain.unit_cube(2)
        self.assertTrue(domain.contains([1.0, 0.0]))
        self.assertFalse(domain.contains([1.0, 1.0 + 1e-12]))
        np.testing.assert_array_equal(
            domain.contains([[0.5, 0.5], [2.0, 0.5]]), [True, False]
        )

    def test_uniform_samples_inside(self):
        domain = Domain([-1, 2], [0, 5])
        samples = domain.sample_uniform(make_rng(1), 1000)
        self.assertTrue(np.all(domain.contains(samples)))

    def test_point_sequence_outside_domain(self):
        with self.assertRaises(PointOutsideDomain):
            PointSeq([[0.5, 0.5], [1.5, 0.5]], Domain.unit_cube(2))

    def test_point_sequence_prefix(self):
        seq = PointSeq([[0.1, 0.1], [0.2, 0.2], [0.3, 0.3]], Domain.unit_cube(2))
        self.assertEqual(len(seq), 3)
        np.testing.assert_array_equal(seq.prefix(2), [[0.1, 0.1], [0.2, 0.2]])


class NeighbourCountTests(SimpleTestCase):
    """
    Тесты подсчёта соседей: пустая конфигурация, замкнутый шар, сетка.
    """

    def test_empty_configuration(self):
        self.assertEqual(neighbour_count([0.3, 0.4], [], 0.1), 0)

    def test_one_neighbour(self):
        config = [[0.0, 0.05], [0.0, 0.2]]
        self.assertEqual(neighbour_count([0.0, 0.0], config, 0.1), 1)

    def test_distance_exactly_R_counts(self):
        self.assertEqual(neighbour_count([0.0, 0.0], [[0.0, 0.5]], 0.5), 1)

    def test_symmetry(self):
        rng = make_rng(3)
        points = rng.random((50, 2))
        for a in points[:10]:
            for b in points[10:20]:
                self.assertEqual(
                    neighbour_count(a, [b], 0.3), neighbour_count(b, [a], 0.3)
                )

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            neighbour_count([0.0, 0.0], [[0.0, 0.0, 0.0]], 0.1)

    def test_matches_double_loop(self):
        rng = make_rng(7)
        config = rng.random((200, 2))
        for x in rng.random((20, 2)):
            expected = 0
            for y in config:
                if math.dist(x, y) <= 0.07:
                    expected += 1
            self.assertEqual(neighbour_count(x, config, 0.07), expected)

    def test_grid_matches_naive_scan(self):
        rng = make_rng(11)
        domain = Domain([-1, -1], [1, 1])
        grid = NeighbourGrid(0.15, 2, capacity=4)
        points = domain.sample_uniform(rng, 300)
        for point in points:
            grid.insert(point)
        self.assertEqual(len(grid), 300)
        for x in domain.sample_uniform(rng, 50):
            self.assertEqual(grid.count(x), neighbour_count(x, points, 0.15))

    def test_ball_volume(self):
        self.assertAlmostEqual(ball_volume(2, 0.1), math.pi * 0.01)
        self.assertAlmostEqual(ball_volume(1, 0.1), 0.2)
        self.assertAlmostEqual(ball_volume(3, 1.0), 4 * math.pi / 3)


class PointsCsvTests(SimpleTestCase):
    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.directory.name, "points.csv")

    def tearDown(self):
        self.directory.cleanup()

    def test_write_then_read(self):
        points = make_rng(5).random((10, 2))
        write_points_csv(points, self.path, header_comment={"seed": 5})
        with open(self.path, encoding="utf-8") as handle:
            lines = handle.read().split("\n")
        self.assertEqual(lines[0], '# {"seed": 5}')
        self.assertEqual(lines[1], "x1,x2")
        np.testing.assert_array_equal(read_points_csv(self.path), points)

    def test_header_required(self):
        with open(self.path, "w", encoding="utf-8") as handle:
            handle.write("a,b\n0.1,0.2\n")
        with self.assertRaises(ValueError):
            read_points_csv(self.path)
