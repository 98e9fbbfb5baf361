import numpy as np

from apps.graphs.exceptions import GraphConstructionError
from apps.graphs.knn import knn_exact

from .base_test import BaseGraphTestCase


class KnnExactTests(BaseGraphTestCase):

    def test_nearest_neighbour_on_a_line(self):
        neighbors = knn_exact(self.chain, 1)
        np.testing.assert_array_equal(neighbors.indices[:, 0], [1, 0, 1])

    def test_two_neighbours_with_distances(self):
        neighbors = knn_exact(self.chain, 2)
        np.testing.assert_array_equal(neighbors.indices[0], [1, 2])
        np.testing.assert_array_equal(neighbors.sq_distances[0], [1.0, 9.0])

    def test_ties_go_to_the_lower_index(self):
        data = np.array([[0.0], [-1.0], [1.0], [5.0]])
        neighbors = knn_exact(data, 2)
        np.testing.assert_array_equal(neighbors.indices[0], [1, 2])

    def test_tree_and_brute_force_agree(self):
        data = np.random.default_rng(11).normal(size=(500, 3))
        tree = knn_exact(data, 15, method="tree")
        brute = knn_exact(data, 15, method="brute")
        np.testing.assert_array_equal(tree.indices, brute.indices)
        np.testing.assert_array_equal(tree.sq_distances, brute.sq_distances)

    def test_matches_reference_scan_on_random_instances(self):
        rng = np.random.default_rng(4)
        for _ in range(5):
            n, d, k = int(rng.integers(20, 120)), int(rng.integers(1, 6)), int(rng.integers(1, 10))
            # Integer grid coordinates produce plenty of distance ties.
            data = rng.integers(0, 4, size=(n, d)).astype(float)
            expected, expected_sq = self.brute_force_neighbors(data, k)
            for method in ("brute", "tree"):
                found = knn_exact(data, k, method=method)
                np.testing.assert_array_equal(found.indices, expected)
                np.testing.assert_array_equal(found.sq_distances, expected_sq)

    def test_self_is_excluded_and_distances_ascend(self):
        data = np.random.default_rng(0).uniform(size=(60, 2))
        neighbors = knn_exact(data, 6)
        for i in range(60):
            self.assertNotIn(i, neighbors.indices[i])
        self.assertTrue((np.diff(neighbors.sq_distances, axis=1) >= 0).all())

    def test_parallel_blocks_give_the_same_lists(self):
        data = np.random.default_rng(8).normal(size=(2100, 20))
        serial = knn_exact(data, 10, n_jobs=1)
        threaded = knn_exact(data, 10, n_jobs=2)
        np.testing.assert_array_equal(serial.indices, threaded.indices)

    def test_k_at_least_n_is_clamped(self):
        neighbors = knn_exact(self.chain, 5)
        self.assertEqual(neighbors.k, 2)

    def test_single_point_is_rejected(self):
        with self.assertRaises(GraphConstructionError):
            knn_exact(np.zeros((1, 2)), 1)

    def test_unknown_method(self):
        with self.assertRaises(GraphConstructionError):
            knn_exact(self.chain, 1, method="annoy")
