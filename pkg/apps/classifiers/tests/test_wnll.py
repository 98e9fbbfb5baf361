import csv
import json

import numpy as np

from apps.classifiers.exceptions import ClassifierError
from apps.classifiers.reports import ReportRow, write_report_csv, write_report_json
from apps.classifiers.wnll import accuracy, batched_vote, interpolate_queries, wnll_classify
from apps.datasets.synthetic import gaussian_blobs
from custom_tools.testing import LabTestCase


class WnllClassifyTests(LabTestCase):

    def setUp(self):
        self.train_X, self.train_y = gaussian_blobs(n=300, n_classes=3, seed=0)
        self.test_X, self.test_y = gaussian_blobs(n=90, n_classes=3, seed=1)

    def test_separated_blobs_are_perfect(self):
        predicted = wnll_classify(self.train_X, self.train_y, self.test_X, k=10, r=5)
        self.assertEqual(accuracy(predicted, self.test_y), 1.0)

    def test_duplicate_of_a_training_point(self):
        train_X = np.array([[0.0, 0.0], [1.0, 1.0], [5.0, 5.0], [6.0, 5.0]])
        train_y = np.array([0, 1, 1, 1])
        test_X = np.array([[-0.0, 0.0], [0.0, 0.0]])
        predicted = wnll_classify(train_X, train_y, test_X, k=2, r=1, n_classes=2)
        np.testing.assert_array_equal(predicted, [0, 0])

    def test_all_queries_coincident_skip_the_graph(self):
        template = np.array([[0.0, 1.0], [2.0, 3.0]])
        scores = interpolate_queries(template, [1, 0], template[::-1], n_classes=2)
        np.testing.assert_array_equal(scores, [[1.0, 0.0], [0.0, 1.0]])

    def test_rescaling_changes_nothing(self):
        scaled_train = np.asarray(self.train_X) * 2.0
        scaled_test = np.asarray(self.test_X) * 2.0
        np.testing.assert_array_equal(
            wnll_classify(scaled_train, self.train_y, scaled_test, k=10, r=5),
            wnll_classify(self.train_X, self.train_y, self.test_X, k=10, r=5),
        )

    def test_missing_class(self):
        with self.assertRaisesMessage(ClassifierError, "do not cover classes [2]"):
            wnll_classify(self.train_X[:10], np.zeros(10, dtype=int) + np.arange(10) % 2, self.test_X,
                          k=3, r=2, n_classes=3)

    def test_dimension_mismatch(self):
        with self.assertRaises(ClassifierError):
            interpolate_queries(np.zeros((3, 2)), [0, 1, 0], np.zeros((2, 3)), n_classes=2)


class BatchedVoteTests(LabTestCase):

    def setUp(self):
        self.train_X, self.train_y = gaussian_blobs(n=300, n_classes=3, seed=0)
        self.test_X, self.test_y = gaussian_blobs(n=90, n_classes=3, seed=1)

    def test_one_batch_equals_plain_classifier(self):
        labels, tally = batched_vote(self.train_X, self.train_y, self.test_X, template_batch_size=300, seed=0,
                                     k=10, r=5)
        np.testing.assert_array_equal(labels, wnll_classify(self.train_X, self.train_y, self.test_X, k=10, r=5))
        self.assertEqual(tally.n_batches, 1)

    def test_every_batch_votes_once_per_point(self):
        labels, tally = batched_vote(self.train_X, self.train_y, self.test_X, template_batch_size=100, seed=4,
                                     k=10, r=5, n_jobs=2)
        self.assertEqual(tally.n_batches, 3)
        np.testing.assert_array_equal(tally.votes_per_point, np.full(90, 3))
        self.assertEqual(accuracy(labels, self.test_y), 1.0)

    def test_same_result_for_any_job_count(self):
        one = batched_vote(self.train_X, self.train_y, self.test_X, 100, seed=2, k=10, r=5, n_jobs=1)[1]
        two = batched_vote(self.train_X, self.train_y, self.test_X, 100, seed=2, k=10, r=5, n_jobs=3)[1]
        np.testing.assert_array_equal(one.counts, two.counts)

    def test_batch_smaller_than_class_count(self):
        with self.assertRaises(ClassifierError):
            batched_vote(self.train_X, self.train_y, self.test_X, template_batch_size=2, seed=0)


class AccuracyAndReportTests(LabTestCase):

    def test_accuracy(self):
        self.assertAlmostEqual(accuracy([0, 1, 1], [0, 1, 0]), 2.0 / 3.0)
        self.assertEqual(accuracy([2, 2], [2, 2]), 1.0)
        with self.assertRaises(ClassifierError):
            accuracy([0, 1], [0])
        with self.assertRaises(ClassifierError):
            accuracy([], [])

    def test_report_files(self):
        rows = [ReportRow("moons", "softmax", 300, 100, 15, 8, 0.8712345678),
                ReportRow("moons", "wnll", 300, 100, 15, 8, 1.0)]
        root = self.make_tempdir()
        write_report_csv(rows, root / "table1.csv")
        write_report_json(rows, root / "table1.json")
        with open(root / "table1.csv", newline="") as stream:
            lines = list(csv.reader(stream))
        self.assertEqual(lines[0], ["dataset", "method", "n_train", "n_test", "k", "r", "accuracy", "wall_time_ms"])
        self.assertEqual(lines[1], ["moons", "softmax", "300", "100", "15", "8", "0.871235", "0"])
        payload = json.loads((root / "table1.json").read_text())
        self.assertEqual(payload[1]["accuracy"], 1.0)
        self.assertEqual(payload[0]["accuracy"], 0.871235)
