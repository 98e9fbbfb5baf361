import numpy as np
from scipy import sparse

from apps.solvers.assembly import assemble_system
from apps.solvers.connectivity import check_connectivity
from apps.solvers.exceptions import InterpolationProblemError, UncoveredComponentError
from apps.solvers.problems import InterpolationProblem, one_hot

from .base_test import BaseSolverTestCase


class ProblemValidationTests(BaseSolverTestCase):

    def test_default_mu_is_size_ratio_minus_one(self):
        problem = InterpolationProblem(self.chain_weights(), [0], one_hot([0], 2))
        self.assertEqual(problem.mu, 2.0)

    def test_invalid_templates(self):
        weights = self.chain_weights()
        for ids, labels in (([], np.zeros((0, 2))), ([0, 0], one_hot([0, 1], 2)), ([3], one_hot([0], 2))):
            with self.assertRaises(InterpolationProblemError):
                InterpolationProblem(weights, ids, labels)

    def test_label_rows_must_sum_to_one(self):
        with self.assertRaises(InterpolationProblemError):
            InterpolationProblem(self.chain_weights(), [0], np.array([[0.5, 0.2]]))

    def test_negative_mu(self):
        with self.assertRaises(InterpolationProblemError):
            InterpolationProblem(self.chain_weights(), [0], one_hot([0], 2), mu=-1.0)


class AssemblyTests(BaseSolverTestCase):

    def test_three_node_chain_by_hand(self):
        problem = InterpolationProblem(self.chain_weights(), [0, 2], one_hot([0, 1], 2), mu=0.0)
        system = assemble_system(problem)
        np.testing.assert_array_equal(system.matrix.toarray(), [[4.0]])
        np.testing.assert_array_equal(system.rhs, [[2.0, 2.0]])
        np.testing.assert_array_equal(system.unlabeled_ids, [1])

    def test_mu_adds_template_inflow(self):
        problem = InterpolationProblem(self.chain_weights(), [0, 2], one_hot([0, 1], 2), mu=0.5)
        system = assemble_system(problem)
        np.testing.assert_array_equal(system.matrix.toarray(), [[5.0]])
        np.testing.assert_array_equal(system.rhs, [[2.5, 2.5]])

    def test_matches_dense_reference_assembly(self):
        rng = np.random.default_rng(50)
        for _ in range(10):
            problem = self.random_instance(rng, n_max=50, c_max=10, mu=float(rng.uniform(0, 10)))
            system = assemble_system(problem)
            _, a, b, free = self.dense_reference(problem)
            np.testing.assert_array_equal(system.unlabeled_ids, free)
            np.testing.assert_allclose(system.matrix.toarray(), a, rtol=1e-12, atol=1e-12)
            np.testing.assert_allclose(system.rhs, b, rtol=1e-12, atol=1e-12)

    def test_matrix_is_symmetric_and_diagonally_dominant(self):
        problem = self.random_instance(np.random.default_rng(3), n_max=60)
        matrix = assemble_system(problem).matrix.toarray()
        self.assertEqual(np.abs(matrix - matrix.T).max(), 0.0)
        diagonal = np.diag(matrix)
        off = np.abs(matrix).sum(axis=1) - np.abs(diagonal)
        self.assertTrue((diagonal > 0).all())
        self.assertTrue((diagonal >= off - 1e-12).all())

    def test_everything_labeled_gives_an_empty_system(self):
        problem = InterpolationProblem(self.chain_weights(), [0, 1, 2], one_hot([0, 1, 0], 2))
        system = assemble_system(problem)
        self.assertEqual(system.matrix.shape, (0, 0))
        self.assertEqual(system.rhs.shape, (0, 2))


class ConnectivityTests(BaseSolverTestCase):

    def two_cliques(self):
        dense = np.zeros((6, 6))
        dense[:3, :3] = 1.0
        dense[3:, 3:] = 1.0
        np.fill_diagonal(dense, 0.0)
        return sparse.csr_matrix(dense)

    def test_clique_without_template_is_reported(self):
        report = check_connectivity(self.two_cliques(), [0])
        self.assertEqual(report.n_components, 2)
        self.assertEqual(len(report.uncovered), 1)
        np.testing.assert_array_equal(report.uncovered[0], [3, 4, 5])

    def test_connected_graph_has_no_uncovered_component(self):
        dense = np.ones((5, 5)) - np.eye(5)
        self.assertTrue(check_connectivity(sparse.csr_matrix(dense), [2]).covered)

    def test_one_directional_edge_connects(self):
        dense = np.zeros((2, 2))
        dense[1, 0] = 0.3
        self.assertTrue(check_connectivity(sparse.csr_matrix(dense), [0]).covered)

    def test_assembly_names_uncovered_points(self):
        problem = InterpolationProblem(self.two_cliques(), [0], one_hot([0], 2))
        with self.assertRaises(UncoveredComponentError) as ctx:
            assemble_system(problem)
        self.assertEqual(ctx.exception.components, [[3, 4, 5]])

    def test_uniform_option_leaves_uncovered_points_out(self):
        problem = InterpolationProblem(self.two_cliques(), [0], one_hot([0], 2))
        system = assemble_system(problem, uncovered="uniform")
        np.testing.assert_array_equal(system.unlabeled_ids, [1, 2])
        np.testing.assert_array_equal(system.uniform_ids, [3, 4, 5])
