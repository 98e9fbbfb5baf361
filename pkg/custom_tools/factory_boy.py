"""
Factories for test fixtures.

Usage:
>>> from custom_tools.factory_boy import TrainConfigFactory, NetworkParamsFactory
>>> config = TrainConfigFactory(passes=2)
>>> params = NetworkParamsFactory(layer_spec=(2, 16, 8, 2))
"""
import factory

from apps.toynet.config import TrainConfig
from apps.toynet.params import init_network


class TrainConfigFactory(factory.Factory):
    """A small, fast alternating-training config."""
    class Meta:
        model = TrainConfig

    passes = 1
    linear_epochs = 3
    wnll_epochs = 1
    lr = 0.05
    lr_half_every = 10
    wnll_lr = 0.0005
    second_pass_lr_factor = 0.2
    momentum = 0.9
    weight_decay = 1e-4
    batch_linear = 32
    batch_wnll = 100
    knn_k = 10
    sigma_rank = 5
    seed = factory.Sequence(lambda n: n)
    template_fraction = 0.5
    proxy_scaling = True
    track_wnll = True
    hidden = (16,)
    buffer_width = 8


class NetworkParamsFactory(factory.Factory):
    class Meta:
        model = init_network

    layer_spec = (2, 16, 8, 2)
    seed = factory.Sequence(lambda n: n)
