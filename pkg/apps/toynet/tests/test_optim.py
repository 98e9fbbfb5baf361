import numpy as np

from apps.toynet.optim import NesterovSGD, sgd_step
from apps.toynet.params import BUFFER, DNN, HEAD
from custom_tools.factory_boy import NetworkParamsFactory

from .base_test import BaseNetworkTestCase


def constant_gradients(params, value=1.0):
    grads = params.zeros_like()
    for _, array in grads.arrays():
        array += value
    return grads


class SgdStepTests(BaseNetworkTestCase):

    def test_plain_step_with_weight_decay(self):
        params = NetworkParamsFactory()
        before = params.copy()
        grads = constant_gradients(params, 0.5)
        sgd_step(params, grads, lr=0.1, weight_decay=0.01)
        for (_, after), (_, old) in zip(params.arrays(), before.arrays()):
            np.testing.assert_allclose(after, old - 0.1 * (0.5 + 0.01 * old), rtol=1e-15, atol=1e-15)

    def test_mask_leaves_other_blocks_bit_equal(self):
        params = NetworkParamsFactory()
        before = params.copy()
        velocity = params.zeros_like()
        sgd_step(params, constant_gradients(params), lr=0.1, momentum=0.9, mask=(BUFFER,), velocity=velocity)
        self.assertTrue(params.equals(before, blocks=(DNN, HEAD)))
        self.assertFalse(params.equals(before, blocks=(BUFFER,)))
        for _, array in velocity.arrays((DNN, HEAD)):
            self.assertFalse(array.any())


class NesterovTests(BaseNetworkTestCase):

    def test_two_steps_on_constant_gradient(self):
        lr, momentum = 0.01, 0.9
        params = NetworkParamsFactory()
        before = params.copy()
        optimizer = NesterovSGD(lr=lr, momentum=momentum)
        grads = constant_gradients(params)
        optimizer.step(params, grads)
        optimizer.step(params, grads)
        self.assertEqual(optimizer.steps, 2)
        for (_, after), (_, old) in zip(params.arrays(), before.arrays()):
            np.testing.assert_allclose(after - old, -2.9 * lr, rtol=1e-12, atol=1e-15)

    def test_lookahead_shifts_by_momentum_times_velocity(self):
        params = NetworkParamsFactory()
        optimizer = NesterovSGD(lr=0.1, momentum=0.5)
        np.testing.assert_array_equal(optimizer.lookahead(params).head.weight, params.head.weight)
        optimizer.step(params, constant_gradients(params))
        shifted = optimizer.lookahead(params)
        np.testing.assert_allclose(shifted.head.weight, params.head.weight - 0.5 * 0.1, rtol=0, atol=1e-15)

    def test_reset_clears_velocity(self):
        params = NetworkParamsFactory()
        optimizer = NesterovSGD(lr=0.1)
        optimizer.step(params, constant_gradients(params))
        optimizer.reset()
        self.assertIsNone(optimizer.velocity)
