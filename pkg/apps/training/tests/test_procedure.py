import csv

import numpy as np

from apps.datasets.synthetic import two_moons
from apps.toynet.config import TrainConfig
from apps.toynet.params import init_network
from apps.training.evaluation import evaluate_wnll
from apps.training.procedure import alternate_train, pass_split
from apps.training.reports import LINEAR, WNLL, write_curves, write_stage_reports
from apps.training.stages import train_linear_stage
from custom_tools.factory_boy import TrainConfigFactory
from custom_tools.seeding import named_seed

from .base_test import BaseTrainingTestCase


class AlternateTrainTests(BaseTrainingTestCase):

    def test_two_passes_give_four_stages(self):
        config = TrainConfigFactory(passes=2, linear_epochs=2, wnll_epochs=1, batch_wnll=50, seed=3)
        params = self.positive_network(seed=3)
        _, report = alternate_train(params, self.train_X, self.train_y, config)
        self.assertEqual([(s.pass_index, s.stage) for s in report.stages],
                         [(0, LINEAR), (0, WNLL), (1, LINEAR), (1, WNLL)])
        np.testing.assert_array_equal(report.template_ids, pass_split(self.train_y, config, 1).template)
        self.assertIsNone(report.final_wnll_accuracy)

    def test_without_wnll_epochs_it_is_plain_linear_training(self):
        config = TrainConfigFactory(passes=1, linear_epochs=3, wnll_epochs=0, seed=8)
        alternating, report = alternate_train(init_network((2, 16, 8, 2), seed=8), self.train_X, self.train_y, config)
        plain, _ = train_linear_stage(init_network((2, 16, 8, 2), seed=8), self.train_X, self.train_y, config, 0)
        self.assertEqual(len(report.stages), 1)
        self.assertTrue(alternating.equals(plain))

    def test_same_seed_same_weights(self):
        config = TrainConfigFactory(passes=1, linear_epochs=1, wnll_epochs=1, batch_wnll=50, seed=2)
        first, _ = alternate_train(self.positive_network(), self.train_X, self.train_y, config)
        second, _ = alternate_train(self.positive_network(), self.train_X, self.train_y, config)
        self.assertTrue(first.equals(second))

    def test_final_accuracies_with_eval_data(self):
        config = TrainConfigFactory(passes=1, linear_epochs=2, wnll_epochs=1, batch_wnll=50, track_wnll=False)
        _, report = alternate_train(self.positive_network(), self.train_X, self.train_y, config,
                                    eval_data=(self.test_X, self.test_y))
        self.assertTrue(0.0 <= report.final_linear_accuracy <= 1.0)
        self.assertTrue(0.0 <= report.final_wnll_accuracy <= 1.0)
        self.assertEqual(len(report.stages[0].linear_accuracy), 2)

    def test_report_files(self):
        config = TrainConfigFactory(passes=1, linear_epochs=2, wnll_epochs=1, batch_wnll=50)
        _, report = alternate_train(self.positive_network(), self.train_X, self.train_y, config)
        root = self.make_tempdir()
        with open(write_stage_reports(report, root / "stages.csv"), newline="") as stream:
            stages = list(csv.reader(stream))
        with open(write_curves(report, root / "curves.csv"), newline="") as stream:
            curves = list(csv.reader(stream))
        self.assertEqual(stages[0][:3], ["pass", "stage", "epochs"])
        self.assertEqual([row[1] for row in stages[1:]], [LINEAR, WNLL])
        self.assertEqual([row[0] for row in curves[1:]], ["0", "1", "2"])


class SplitAndEvaluationTests(BaseTrainingTestCase):

    def test_pass_split_is_deterministic(self):
        config = TrainConfigFactory(seed=4)
        first = pass_split(self.train_y, config, 0)
        np.testing.assert_array_equal(first.template, pass_split(self.train_y, config, 0).template)
        self.assertFalse(np.array_equal(first.template, pass_split(self.train_y, config, 1).template))
        self.assertEqual(first.template.size, 150)

    def test_template_equal_to_test_set_is_perfect(self):
        params = self.positive_network(seed=9)
        predictions, score = evaluate_wnll(params, self.test_X, self.test_y, self.test_X, self.test_y, self.config)
        self.assertEqual(score, 1.0)
        np.testing.assert_array_equal(predictions, self.test_y)

    def test_batched_evaluation(self):
        params = self.positive_network(seed=9)
        predictions, score = evaluate_wnll(params, self.test_X, self.test_y, self.train_X, self.train_y,
                                           self.config, template_batch=100)
        self.assertEqual(predictions.shape, (100,))
        self.assertTrue(0.0 <= score <= 1.0)

    def test_without_labels_there_is_no_score(self):
        _, score = evaluate_wnll(self.positive_network(), self.test_X, None, self.train_X, self.train_y, self.config)
        self.assertIsNone(score)


class AlternatingTrainingPropertyTests(BaseTrainingTestCase):

    def run_moons(self, seed):
        train_X, train_y = two_moons(400, 0.1, named_seed(seed, "data", 0))
        test_X, test_y = two_moons(400, 0.1, named_seed(seed, "data", 1))
        config = TrainConfig(seed=seed, track_wnll=False)
        params = init_network(config.layer_spec(2, 2), named_seed(seed, "init"))
        _, report = alternate_train(params, train_X, train_y, config, eval_data=(test_X, test_y.indices))
        return report

    def test_wnll_beats_linear_head_on_two_moons(self):
        final_gaps, jumps = [], []
        for seed in range(5):
            report = self.run_moons(seed)
            first_linear, first_wnll = report.stages[0], report.stages[1]
            self.assertEqual((first_linear.stage, first_wnll.stage), (LINEAR, WNLL))
            final_gaps.append(report.final_wnll_accuracy - report.final_linear_accuracy)
            jumps.append(first_wnll.wnll_accuracy[0] - first_linear.linear_accuracy[-1])
        self.assertGreaterEqual(np.median(final_gaps), 0.0)
        self.assertGreaterEqual(np.median(jumps), 0.0)
