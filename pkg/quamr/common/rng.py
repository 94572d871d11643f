#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import hashlib

import numpy as np
import torch


def derive_seed(seed, *keys):
    """
    Derives a 63-bit seed from a base seed and any number of keys (record
    ids, metric family names, ...). The result only depends on the values,
    so per-item randomness does not depend on processing order.
    """
    hasher = hashlib.blake2b(digest_size=8)
    hasher.update(repr(int(seed)).encode("utf-8"))
    for key in keys:
        hasher.update(b"\x00")
        hasher.update(str(key).encode("utf-8"))
    return int.from_bytes(hasher.digest(), "little") >> 1


def numpy_generator(seed, *keys):
    """Helper function returning a numpy Generator seeded from seed and keys"""
    return np.random.default_rng(derive_seed(seed, *keys))


def torch_generator(seed, *keys):
    """Helper function returning a CPU torch.Generator seeded from seed and keys"""
    generator = torch.Generator()
    generator.manual_seed(derive_seed(seed, *keys))
    return generator
