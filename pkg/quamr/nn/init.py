#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import math

import torch


__all__ = ["embedding_uniform_", "fans", "scaled_uniform_", "zeros_"]

EMBEDDING_RANGE = 0.05


def fans(tensor):
    """(fan_in, fan_out) of an (n, m) dense weight or a (Cout, Cin, kh, kw) kernel."""
    if tensor.dim() == 2:
        return tensor.size(0), tensor.size(1)
    if tensor.dim() == 4:
        receptive = tensor.size(2) * tensor.size(3)
        return tensor.size(1) * receptive, tensor.size(0) * receptive
    raise ValueError("Cannot compute fans of a {}-d tensor".format(tensor.dim()))


def scaled_uniform_(tensor, generator=None):
    """Fills tensor from U(-b, b) with b = sqrt(6 / (fan_in + fan_out))."""
    fan_in, fan_out = fans(tensor)
    bound = math.sqrt(6.0 / (fan_in + fan_out))
    with torch.no_grad():
        return tensor.uniform_(-bound, bound, generator=generator)


def embedding_uniform_(tensor, generator=None):
    with torch.no_grad():
        return tensor.uniform_(-EMBEDDING_RANGE, EMBEDDING_RANGE, generator=generator)


def zeros_(tensor):
    with torch.no_grad():
        return tensor.zero_()
