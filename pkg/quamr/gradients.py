#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

"""
Differentiable operations of the rater with hand-written backward passes.

Every operation is an `AutogradFunction` registered under a name. `apply`
runs one through a thin `torch.autograd.Function` bridge, so torch only
chains the registered backward functions; it never differentiates the
forward computation itself.

Tensors are batch-first: images are (N, C, H, W), vectors are (N, C).
"""

import logging
from dataclasses import dataclass

import torch
import torch.nn.functional as F

from .common.util import ConfigBase, ceil_div


@dataclass
class GradConfig:
    """
    A configuration object for the registered autograd functions.
    """

    # raise when a forward output or a gradient holds NaN or Inf:
    check_finite: bool = True


# Global config
config = GradConfig()


def set_config(new_config):
    global config
    config = new_config


class ConfigManager(ConfigBase):
    r"""
    Use this to temporarily change a value in the `gradients.config` object:

    .. code-block:: python

        with ConfigManager("check_finite", False):
            output = model(amr, dep)
    """

    def __init__(self, *args):
        super().__init__(config, *args)


class ShapeMismatch(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


class NonFiniteError(RuntimeError):
    pass


class NonFiniteGradient(NonFiniteError):
    pass


# rater operations by name; `apply` looks them up here:
FUNCTION_REGISTRY = {}


def register_function(name):
    """Class decorator that makes an AutogradFunction callable as `apply(name, ...)`.

    The rater's layers only reach the hand-written passes through this table,
    so a name can be bound once. Raises ValueError on a second binding or when
    the class does not extend AutogradFunction.
    """

    def bind(cls):
        if name in FUNCTION_REGISTRY:
            raise ValueError("Autograd function {} is already bound".format(name))
        if not issubclass(cls, AutogradFunction):
            raise ValueError(
                "Invalid autograd function for {}: {} does not extend AutogradFunction".format(
                    name, cls.__name__
                )
            )
        cls.name = name
        FUNCTION_REGISTRY[name] = cls
        return cls

    return bind


def get_grad_fn(name):
    """Looks up the forward/backward pair bound to name; None when unbound."""
    return FUNCTION_REGISTRY.get(name, None)


class AutogradContext(object):
    """Carries the tensors a forward pass keeps for its backward pass."""

    def __init__(self):
        self.reset()

    def reset(self):
        self.context = []

    def save_for_backward(self, value):
        self.context.append(value)

    def save_multiple_for_backward(self, values):
        for value in values:
            self.save_for_backward(value)

    @property
    def saved_tensors(self):
        return self.context


class AutogradFunction(object):
    """
    Base implementation of a function that supports autograd.

    `backward` returns one gradient per leading tensor argument of `forward`
    (None for arguments without a gradient); trailing configuration
    arguments need no entry.
    """

    @staticmethod
    def forward(ctx, input):
        raise NotImplementedError("Forward function not implemented")

    @staticmethod
    def backward(ctx, grad_output):
        raise NotImplementedError("Backward function not implemented")

    def __str__(self):
        return self.name


def _check_finite(values, name, error):
    if not config.check_finite:
        return
    for value in values:
        if torch.is_tensor(value) and value.is_floating_point():
            if not torch.isfinite(value).all():
                raise error("{} produced non-finite values".format(name))


class _Bridge(torch.autograd.Function):
    @staticmethod
    def forward(torch_ctx, name, *args):
        function = FUNCTION_REGISTRY[name]
        ctx = AutogradContext()
        output = function.forward(ctx, *args)
        _check_finite([output], name, NonFiniteError)
        torch_ctx.function, torch_ctx.context, torch_ctx.num_args = function, ctx, len(args)
        return output

    @staticmethod
    def backward(torch_ctx, grad_output):
        grads = torch_ctx.function.backward(torch_ctx.context, grad_output)
        if not isinstance(grads, tuple):
            grads = (grads,)
        _check_finite(grads, torch_ctx.function.name, NonFiniteGradient)
        padding = (None,) * (torch_ctx.num_args - len(grads))
        return (None,) + grads + padding


def apply(name, *args):
    """Runs the autograd function registered under name on args."""
    if name not in FUNCTION_REGISTRY:
        raise ValueError("Unknown autograd function: {}".format(name))
    return _Bridge.apply(name, *args)


def _same_padding(size):
    """Zero padding (before, after) that keeps a dimension's size for a kernel size."""
    before = (size - 1) // 2
    return before, size - 1 - before


@register_function("embedding")
class AutogradEmbedding(AutogradFunction):
    @staticmethod
    def forward(ctx, table, indices):
        if indices.numel() > 0 and (
            indices.min().item() < 0 or indices.max().item() >= table.size(0)
        ):
            raise IndexOutOfRange(
                "grid holds indices outside [0, {})".format(table.size(0))
            )
        ctx.save_multiple_for_backward([table.size(), indices])
        # (N, H, W) indices -> (N, D, H, W) image:
        return table[indices].permute(0, 3, 1, 2).contiguous()

    @staticmethod
    def backward(ctx, grad_output):
        table_size, indices = ctx.saved_tensors
        grad = grad_output.permute(0, 2, 3, 1).reshape(-1, table_size[1])
        grad_table = grad_output.new_zeros(table_size)
        grad_table.index_add_(0, indices.reshape(-1), grad)
        return grad_table, None


@register_function("conv2d_same")
class AutogradConv2DSame(AutogradFunction):
    @staticmethod
    def forward(ctx, input, kernel, bias):
        if input.dim() != 4 or kernel.dim() != 4:
            raise ShapeMismatch("conv2d_same expects (N, C, H, W) input and 4-d kernel")
        if input.size(1) != kernel.size(1):
            raise ShapeMismatch(
                "input has {} channels, kernel expects {}".format(input.size(1), kernel.size(1))
            )
        if bias.size() != (kernel.size(0),):
            raise ShapeMismatch("bias must have one entry per output channel")
        top, bottom = _same_padding(kernel.size(2))
        left, right = _same_padding(kernel.size(3))
        padded = F.pad(input, (left, right, top, bottom))
        ctx.save_multiple_for_backward([padded, kernel, input.size(), (top, left)])
        return F.conv2d(padded, kernel, bias)

    @staticmethod
    def backward(ctx, grad_output):
        padded, kernel, input_size, (top, left) = ctx.saved_tensors
        grad_padded = torch.nn.grad.conv2d_input(padded.size(), kernel, grad_output)
        grad_input = grad_padded[
            :, :, top : top + input_size[2], left : left + input_size[3]
        ].contiguous()
        grad_kernel = torch.nn.grad.conv2d_weight(padded, kernel.size(), grad_output)
        grad_bias = grad_output.sum(dim=(0, 2, 3))
        return grad_input, grad_kernel, grad_bias


@register_function("max_pool2d")
class AutogradMaxPool2D(AutogradFunction):
    """
    Non-overlapping max pooling with stride equal to the window. Edge windows
    are clipped, so the output has ceil(H / ph) x ceil(W / pw) cells. The
    gradient goes to the first maximal cell of each window.
    """

    @staticmethod
    def forward(ctx, input, kernel_size):
        ph, pw = kernel_size
        height, width = input.size(2), input.size(3)
        pad_h = ceil_div(height, ph) * ph - height
        pad_w = ceil_div(width, pw) * pw - width
        padded = F.pad(input, (0, pad_w, 0, pad_h), value=float("-inf"))
        output, indices = F.max_pool2d(
            padded, (ph, pw), stride=(ph, pw), return_indices=True
        )
        ctx.save_multiple_for_backward([input.size(), padded.size(), indices])
        return output

    @staticmethod
    def backward(ctx, grad_output):
        input_size, padded_size, indices = ctx.saved_tensors
        grad_padded = grad_output.new_zeros(
            padded_size[0], padded_size[1], padded_size[2] * padded_size[3]
        )
        grad_padded.scatter_add_(2, indices.flatten(2), grad_output.flatten(2))
        grad_padded = grad_padded.view(padded_size)
        return grad_padded[:, :, : input_size[2], : input_size[3]].contiguous()


@register_function("global_pool")
class AutogradGlobalPool(AutogradFunction):
    """Per-channel global max (or mean) over H x W, flattened to (N, C)."""

    @staticmethod
    def forward(ctx, input, mode="max"):
        if input.dim() != 4:
            raise ShapeMismatch("global pooling expects an (N, C, H, W) input")
        flat = input.flatten(2)
        if mode == "max":
            output, indices = flat.max(dim=2)
        elif mode == "mean":
            output, indices = flat.mean(dim=2), None
        else:
            raise ValueError("Invalid global pooling mode: {}".format(mode))
        ctx.save_multiple_for_backward([input.size(), indices])
        return output

    @staticmethod
    def backward(ctx, grad_output):
        input_size, indices = ctx.saved_tensors
        cells = input_size[2] * input_size[3]
        if indices is None:
            grad = grad_output.unsqueeze(2).expand(-1, -1, cells).div(cells)
            return grad.reshape(input_size).contiguous()
        grad = grad_output.new_zeros(input_size[0], input_size[1], cells)
        grad.scatter_(2, indices.unsqueeze(2), grad_output.unsqueeze(2))
        return grad.view(input_size)


@register_function("fuse")
class AutogradFuse(AutogradFunction):
    """Concatenates x * y and x - y along the channel axis."""

    @staticmethod
    def forward(ctx, x, y):
        if x.size() != y.size():
            raise ShapeMismatch(
                "cannot fuse tensors of size {} and {}".format(tuple(x.size()), tuple(y.size()))
            )
        ctx.save_multiple_for_backward([x, y])
        return torch.cat([x.mul(y), x.sub(y)], dim=1)

    @staticmethod
    def backward(ctx, grad_output):
        x, y = ctx.saved_tensors
        grad_product, grad_difference = grad_output.chunk(2, dim=1)
        grad_x = grad_product.mul(y).add(grad_difference)
        grad_y = grad_product.mul(x).sub(grad_difference)
        return grad_x, grad_y


@register_function("dense")
class AutogradDense(AutogradFunction):
    """x W (+ b) for (N, n) inputs and an (n, m) weight."""

    @staticmethod
    def forward(ctx, input, weight, bias=None):
        if input.dim() != 2 or weight.dim() != 2 or input.size(1) != weight.size(0):
            raise ShapeMismatch(
                "cannot multiply input {} with weight {}".format(
                    tuple(input.size()), tuple(weight.size())
                )
            )
        ctx.save_multiple_for_backward([input, weight, bias is not None])
        output = input.matmul(weight)
        if bias is not None:
            output = output.add(bias)
        return output

    @staticmethod
    def backward(ctx, grad_output):
        input, weight, has_bias = ctx.saved_tensors
        grad_input = grad_output.matmul(weight.t())
        grad_weight = input.t().matmul(grad_output)
        grad_bias = grad_output.sum(dim=0) if has_bias else None
        return grad_input, grad_weight, grad_bias


@register_function("relu")
class AutogradReLU(AutogradFunction):
    @staticmethod
    def forward(ctx, input):
        mask = input.gt(0.0)
        ctx.save_for_backward(mask)
        return input.mul(mask)

    @staticmethod
    def backward(ctx, grad_output):
        (mask,) = ctx.saved_tensors
        return grad_output.mul(mask)


@register_function("sigmoid")
class AutogradSigmoid(AutogradFunction):
    @staticmethod
    def forward(ctx, input):
        probs = input.sigmoid()
        ctx.save_for_backward(probs)
        return probs

    @staticmethod
    def backward(ctx, grad_output):
        (probs,) = ctx.saved_tensors
        return grad_output.mul(probs).mul_(probs.neg().add_(1.0))


@register_function("mse_loss")
class AutogradMSELoss(AutogradFunction):
    """Squared error summed over output dimensions and averaged over the batch."""

    @staticmethod
    def forward(ctx, pred, target):
        if pred.size() != target.size():
            raise ShapeMismatch(
                "prediction {} and target {} differ in size".format(
                    tuple(pred.size()), tuple(target.size())
                )
            )
        difference = pred.sub(target)
        ctx.save_for_backward(difference)
        batch_size = pred.size(0) if pred.dim() > 1 else 1
        loss = difference.double().pow(2).sum().div(batch_size)
        return loss.to(pred.dtype)

    @staticmethod
    def backward(ctx, grad_output):
        (difference,) = ctx.saved_tensors
        batch_size = difference.size(0) if difference.dim() > 1 else 1
        return difference.mul(2.0 / batch_size).mul(grad_output), None


logging.debug("Registered autograd functions: %s" % ", ".join(sorted(FUNCTION_REGISTRY)))
