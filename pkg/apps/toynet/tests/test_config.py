from django.test import override_settings

from apps.toynet.config import ConfigError, TrainConfig, parse_bool, parse_widths
from custom_tools.factory_boy import TrainConfigFactory

from .base_test import BaseNetworkTestCase


class ParsingTests(BaseNetworkTestCase):

    def test_booleans(self):
        for text in ("on", "TRUE", "1", "yes"):
            self.assertTrue(parse_bool(text))
        for text in ("off", "false", "0", "No"):
            self.assertFalse(parse_bool(text))
        with self.assertRaises(ConfigError):
            parse_bool("maybe")

    def test_widths(self):
        self.assertEqual(parse_widths("64, 32"), (64, 32))
        self.assertEqual(parse_widths([8]), (8,))
        with self.assertRaises(ConfigError):
            parse_widths("64,wide")


class TrainConfigTests(BaseNetworkTestCase):

    def test_coerce_casts_strings(self):
        values = TrainConfig.coerce({"passes": "3", "lr": "0.1", "proxy_scaling": "off", "hidden": "8,4"})
        self.assertEqual(values, {"passes": 3, "lr": 0.1, "proxy_scaling": False, "hidden": (8, 4)})

    def test_unknown_key(self):
        with self.assertRaisesMessage(ConfigError, "unknown training config key 'epochs'"):
            TrainConfig.coerce({"epochs": "3"})

    @override_settings(WNLL_TRAIN={"passes": "1", "linear_epochs": "2", "hidden": "4"})
    def test_from_settings_with_overrides(self):
        config = TrainConfig.from_settings(lr="0.2")
        self.assertEqual((config.passes, config.linear_epochs, config.hidden, config.lr), (1, 2, (4,), 0.2))
        self.assertEqual(config.wnll_epochs, 5)

    def test_validation_collects_problems(self):
        with self.assertRaises(ConfigError) as ctx:
            TrainConfigFactory(passes=0, momentum=1.0)
        self.assertIn("passes must be at least 1", str(ctx.exception))
        self.assertIn("momentum must lie in [0, 1)", str(ctx.exception))

    def test_sigma_rank_bounded_by_k(self):
        with self.assertRaises(ConfigError):
            TrainConfigFactory(knn_k=4, sigma_rank=5)

    def test_batch_must_hold_every_class(self):
        with self.assertRaises(ConfigError):
            TrainConfigFactory(batch_wnll=5).validate_for(10)
        TrainConfigFactory(batch_wnll=10).validate_for(10)

    def test_learning_rate_schedule(self):
        config = TrainConfigFactory(lr=0.08, lr_half_every=10, second_pass_lr_factor=0.5, wnll_lr=0.001)
        self.assertEqual(config.lr_at(0, 0), 0.08)
        self.assertEqual(config.lr_at(9, 0), 0.08)
        self.assertEqual(config.lr_at(10, 0), 0.04)
        self.assertEqual(config.lr_at(25, 1), 0.08 * 0.5 * 0.25)
        self.assertEqual(config.wnll_lr_at(1), 0.0005)

    def test_layer_spec(self):
        config = TrainConfigFactory(hidden=(16, 12), buffer_width=8)
        self.assertEqual(config.layer_spec(784, 10), (784, 16, 12, 8, 10))

    def test_as_strings(self):
        strings = TrainConfigFactory(hidden=(64, 32), proxy_scaling=False, lr=0.05, seed=7).as_strings()
        self.assertEqual(strings["hidden"], "64,32")
        self.assertEqual(strings["proxy_scaling"], "off")
        self.assertEqual(strings["lr"], "0.05")
        self.assertEqual(strings["seed"], "7")
