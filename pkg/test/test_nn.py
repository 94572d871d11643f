#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import logging
import math
import sys
import unittest

import torch
import torch.nn.functional as F
from quamr import nn
from quamr.common.rng import torch_generator
from quamr.nn import functional
from quamr.nn.init import EMBEDDING_RANGE, fans
from test.util import get_random_test_tensor


class TestNN(unittest.TestCase):
    """
    This class tests the quamr.nn package.
    """

    def _check(self, result, reference, msg, tolerance=1e-6):
        self.assertTrue(result.size() == reference.size(), msg)
        test_passed = torch.allclose(result, reference, rtol=tolerance, atol=tolerance)
        if not test_passed:
            logging.info(msg)
            logging.info("Result %s" % result)
            logging.info("Result - Reference = %s" % (result - reference))
        self.assertTrue(test_passed, msg=msg)

    def _reset(self, module, seed=0):
        module.reset_parameters(generator=torch_generator(seed, "test"))
        return module

    def test_embedding(self):
        module = self._reset(nn.Embedding(10, 4))
        self.assertTrue(module.weight.abs().max().item() <= EMBEDDING_RANGE)
        cells = torch.randint(0, 10, (3, 5, 2))
        self._check(module(cells), module.weight[cells].permute(0, 3, 1, 2), "embedding")
        # a single (H, W) grid is treated as a batch of one:
        self.assertEqual(module(cells[0]).size(), (1, 4, 5, 2))

    def test_conv2d_same(self):
        module = self._reset(nn.Conv2dSame(3, 5, (3, 3)))
        self.assertEqual(module.bias.abs().sum().item(), 0.0)
        bound = math.sqrt(6.0 / (3 * 9 + 5 * 9))
        self.assertTrue(module.weight.abs().max().item() <= bound)
        image = get_random_test_tensor(size=(2, 3, 6, 4), is_float=True).float()
        reference = F.relu(F.conv2d(image, module.weight, module.bias, padding=1))
        self._check(module(image), reference, "conv2d_same with relu")
        linear = self._reset(nn.Conv2dSame(3, 5, (3, 3), activation="none"))
        self.assertTrue(linear(image).lt(0).any().item())
        with self.assertRaises(ValueError):
            functional.conv2d_same(image, module.weight, module.bias, activation="sigmoid")

    def test_pooling(self):
        image = get_random_test_tensor(size=(2, 3, 7, 5), is_float=True)
        self.assertEqual(nn.MaxPool2d((3, 3))(image).size(), (2, 3, 3, 2))
        self._check(nn.GlobalPoolFlatten("max")(image), image.flatten(2).max(2)[0], "max")
        self._check(nn.GlobalPoolFlatten("mean")(image), image.flatten(2).mean(2), "mean")
        with self.assertRaises(ValueError):
            nn.GlobalPoolFlatten("sum")
        with self.assertRaises(ValueError):
            functional.maxpool(image, 0, 2)

    def test_dense(self):
        module = self._reset(nn.Dense(6, 2, activation="sigmoid"))
        x = get_random_test_tensor(size=(4, 6), is_float=True).float()
        self._check(module(x), torch.sigmoid(x.matmul(module.weight) + module.bias), "dense")
        no_bias = self._reset(nn.Dense(6, 2, bias=False))
        self.assertIsNone(no_bias.bias)
        self.assertEqual(len(list(no_bias.parameters())), 1)
        self._check(no_bias(x), x.matmul(no_bias.weight), "dense without bias")
        with self.assertRaises(ValueError):
            functional.dense(x, module.weight, activation="tanh")

    def test_init(self):
        self.assertEqual(fans(torch.empty(6, 2)), (6, 2))
        self.assertEqual(fans(torch.empty(8, 4, 3, 2)), (24, 48))
        with self.assertRaises(ValueError):
            fans(torch.empty(3))
        first = self._reset(nn.Dense(6, 2), seed=5)
        second = self._reset(nn.Dense(6, 2), seed=5)
        self._check(first.weight, second.weight, "seeded initialization")

    def test_mse_loss(self):
        pred = get_random_test_tensor(max_value=1, min_value=0, size=(4, 3), is_float=True)
        target = get_random_test_tensor(max_value=1, min_value=0, size=(4, 3), is_float=True)
        loss = nn.MSELoss()(pred, target)
        self._check(loss, (pred - target).pow(2).sum() / 4, "batch-mean squared error")
        with self.assertRaises(NotImplementedError):
            nn.MSELoss(reduction="sum")


# This code only runs when executing the file outside the test harness
if __name__ == "__main__":
    unittest.main(argv=sys.argv[0])
