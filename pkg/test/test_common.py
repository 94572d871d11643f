#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import collections
import os
import sys
import tempfile
import unittest

import torch
from quamr.common.rng import derive_seed, numpy_generator, torch_generator
from quamr.common.serial import ChecksumMismatch, IoFailure, load, save
from quamr.common.util import ceil_div, f_score, prf
from quamr.metrics.smatch import ConfigManager, config


class TestCommon(unittest.TestCase):
    """
    Test cases for common functionality.
    """

    def test_derive_seed(self):
        seed = derive_seed(7, "s1", "Smatch")
        self.assertEqual(seed, derive_seed(7, "s1", "Smatch"))
        self.assertTrue(0 <= seed < 2 ** 63)
        self.assertNotEqual(seed, derive_seed(8, "s1", "Smatch"))
        self.assertNotEqual(seed, derive_seed(7, "s1", "Concepts"))
        self.assertNotEqual(derive_seed(0, "ab"), derive_seed(0, "a", "b"))
        self.assertEqual(derive_seed(3), derive_seed(3))

    def test_generators(self):
        first = numpy_generator(1, "x").random(5)
        second = numpy_generator(1, "x").random(5)
        self.assertEqual(first.tolist(), second.tolist())
        self.assertNotEqual(first.tolist(), numpy_generator(1, "y").random(5).tolist())
        a = torch.rand(4, generator=torch_generator(2, "init"))
        b = torch.rand(4, generator=torch_generator(2, "init"))
        self.assertTrue(torch.equal(a, b))

    def test_prf(self):
        self.assertEqual(prf(3, 4, 4), (0.75, 0.75, 0.75))
        precision, recall, f1 = prf(2, 2, 4)
        self.assertEqual((precision, recall), (1.0, 0.5))
        self.assertAlmostEqual(f1, 2.0 / 3.0)
        self.assertEqual(prf(0, 0, 0), (0.0, 0.0, 0.0))
        self.assertEqual(prf(0, 3, 5), (0.0, 0.0, 0.0))
        self.assertEqual(f_score(0.0, 0.0), 0.0)
        self.assertEqual(ceil_div(45, 3), 15)
        self.assertEqual(ceil_div(46, 3), 16)

    def test_config_manager(self):
        restarts = config.restarts
        with ConfigManager("restarts", restarts + 3):
            self.assertEqual(config.restarts, restarts + 3)
        self.assertEqual(config.restarts, restarts)

        # values are restored when the body raises:
        with self.assertRaises(KeyError):
            with ConfigManager("restarts", 1):
                raise KeyError("body")
        self.assertEqual(config.restarts, restarts)

        with self.assertRaises(ValueError):
            ConfigManager("no_such_field", 1)


class TestSerial(unittest.TestCase):
    """
    Test cases for the checkpoint container.
    """

    def setUp(self):
        super().setUp()
        self.directory = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.directory.name, "model.ckpt")

    def tearDown(self):
        self.directory.cleanup()
        super().tearDown()

    def _tensors(self):
        tensors = collections.OrderedDict()
        tensors["weight"] = torch.arange(6, dtype=torch.float32).reshape(2, 3)
        tensors["bias"] = torch.tensor([0.5, -1.25])
        tensors["scale"] = torch.tensor(2.0)
        return tensors

    def test_save_load(self):
        tensors = self._tensors()
        save(tensors, {"rows": 45, "pool": (3, 3), "name": "rater"}, self.path)
        metadata, loaded = load(self.path)
        self.assertEqual(metadata, {"name": "rater", "pool": "3,3", "rows": "45"})
        self.assertEqual(list(loaded.keys()), ["weight", "bias", "scale"])
        for name, tensor in tensors.items():
            self.assertEqual(loaded[name].dtype, torch.float32)
            self.assertTrue(torch.equal(loaded[name], tensor), name)

    def test_corruption(self):
        save(self._tensors(), {}, self.path)
        with open(self.path, "rb") as f:
            data = f.read()
        with open(self.path, "wb") as f:
            f.write(data[:-3])
        with self.assertRaises(ChecksumMismatch):
            load(self.path)
        with open(self.path, "wb") as f:
            f.write(data[: len(data) // 4])
        with self.assertRaises(ChecksumMismatch):
            load(self.path)

    def test_missing_file(self):
        with self.assertRaises(IoFailure):
            load(os.path.join(self.directory.name, "absent.ckpt"))
        with self.assertRaises(IoFailure):
            save(self._tensors(), {}, os.path.join(self.directory.name, "no", "x.ckpt"))


# This code only runs when executing the file outside the test harness
if __name__ == "__main__":
    unittest.main(argv=sys.argv[0])
