#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import torch

from .. import gradients


__all__ = [
    "conv2d_same",
    "dense",
    "embed",
    "fuse",
    "global_pool_flatten",
    "maxpool",
    "mse_loss",
]

ACTIVATIONS = ("relu", "sigmoid", "none", None)


def _activate(x, activation):
    if activation not in ACTIVATIONS:
        raise ValueError("Invalid activation: {}".format(activation))
    if activation == "relu":
        return gradients.apply("relu", x)
    if activation == "sigmoid":
        return gradients.apply("sigmoid", x)
    return x


def embed(cells, table):
    """
    Looks up (N, H, W) vocabulary indices in a |V| x D table and returns an
    (N, D, H, W) image with D latent channels.
    """
    if not torch.is_tensor(cells):
        cells = torch.as_tensor(cells, dtype=torch.long)
    if cells.dim() == 2:
        cells = cells.unsqueeze(0)
    return gradients.apply("embedding", table, cells.long())


def conv2d_same(x, kernel, bias, activation="relu"):
    """Stride-1 zero-padded cross-correlation that keeps H x W, then activation."""
    if activation == "sigmoid":
        raise ValueError("Invalid activation for convolutions: sigmoid")
    return _activate(gradients.apply("conv2d_same", x, kernel, bias), activation)


def maxpool(x, ph, pw):
    """Non-overlapping ph x pw max pooling with clipped edge windows."""
    if ph < 1 or pw < 1:
        raise ValueError("Invalid pooling window: {}x{}".format(ph, pw))
    return gradients.apply("max_pool2d", x, (ph, pw))


def fuse(x, y):
    return gradients.apply("fuse", x, y)


def global_pool_flatten(x, mode="max"):
    return gradients.apply("global_pool", x, mode)


def dense(x, weight, bias=None, activation="none"):
    return _activate(gradients.apply("dense", x, weight, bias), activation)


def mse_loss(pred, target):
    return gradients.apply("mse_loss", pred, target)
