#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

"""
Layers of the rater. Parameters are plain `torch.nn.Parameter`s; every
forward goes through the registered functions in `quamr.gradients`.
"""

import torch

from . import functional as F
from . import init


class Embedding(torch.nn.Module):
    """
    Module that maps (N, H, W) index grids to (N, D, H, W) images.

    Args:
        num_embeddings: vocabulary size
        embedding_dim: number of latent channels
    """

    def __init__(self, num_embeddings, embedding_dim):
        super().__init__()
        self.weight = torch.nn.Parameter(torch.empty(num_embeddings, embedding_dim))

    def reset_parameters(self, generator=None):
        init.embedding_uniform_(self.weight, generator=generator)

    def forward(self, cells):
        return F.embed(cells, self.weight)


class Conv2dSame(torch.nn.Module):
    """
    Stride-1 convolution with "same" zero padding and an optional ReLU.

    Shape:
        - Input: :math:`(N, C_{in}, H, W)`
        - Output: :math:`(N, C_{out}, H, W)`
    """

    def __init__(self, in_channels, out_channels, kernel_size, activation="relu"):
        super().__init__()
        kh, kw = kernel_size
        self.weight = torch.nn.Parameter(torch.empty(out_channels, in_channels, kh, kw))
        self.bias = torch.nn.Parameter(torch.empty(out_channels))
        self.activation = activation

    def reset_parameters(self, generator=None):
        init.scaled_uniform_(self.weight, generator=generator)
        init.zeros_(self.bias)

    def forward(self, x):
        return F.conv2d_same(x, self.weight, self.bias, activation=self.activation)


class MaxPool2d(torch.nn.Module):
    def __init__(self, kernel_size):
        super().__init__()
        self.kernel_size = tuple(kernel_size)

    def forward(self, x):
        return F.maxpool(x, *self.kernel_size)


class GlobalPoolFlatten(torch.nn.Module):
    """Per-channel global pooling over H x W: (N, C, H, W) -> (N, C)."""

    def __init__(self, mode="max"):
        super().__init__()
        if mode not in ("max", "mean"):
            raise ValueError("Invalid global pooling mode: {}".format(mode))
        self.mode = mode

    def forward(self, x):
        return F.global_pool_flatten(x, self.mode)


class Dense(torch.nn.Module):
    """
    Module that computes :math:`y = act(xW + b)` for an (in, out) weight W.

    Args:
        in_features: size of each input sample
        out_features: size of each output sample
        bias: If set to ``False``, the layer will not learn an additive bias.
        activation: one of ``"relu"``, ``"sigmoid"``, ``"none"``
    """

    def __init__(self, in_features, out_features, bias=True, activation="none"):
        super().__init__()
        self.weight = torch.nn.Parameter(torch.empty(in_features, out_features))
        if bias:
            self.bias = torch.nn.Parameter(torch.empty(out_features))
        else:
            self.register_parameter("bias", None)
        self.activation = activation

    def reset_parameters(self, generator=None):
        init.scaled_uniform_(self.weight, generator=generator)
        if self.bias is not None:
            init.zeros_(self.bias)

    def forward(self, x):
        return F.dense(x, self.weight, self.bias, activation=self.activation)
