#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

"""
The dual-branch rater. Each side (AMR and dependency) has its own tower:

    embed -> conv1 (same, relu) = L1 -> pool1 = L2 -> conv2 (same, relu)
          -> pool2 -> flatten = g

The towers meet twice: j_res pools the fused L1 images globally and j_glob
fuses the two g vectors. The head maps j = [j_res; j_glob] through a ReLU
layer A and a sigmoid layer B.
"""

import collections
import dataclasses
import logging
from dataclasses import dataclass

import numpy as np
import torch

from .. import nn
from ..common import serial
from ..common.rng import torch_generator
from ..common.util import ConfigBase, ceil_div
from ..gradients import ShapeMismatch
from ..nn import functional as F


__all__ = [
    "ModelConfig",
    "RaterModel",
    "load_checkpoint",
    "predict",
    "save_checkpoint",
]


@dataclass
class ModelConfig:
    """
    Architecture of a `RaterModel`. Every field is written into checkpoints.
    """

    rows: int = 45
    cols: int = 15
    embed_dim: int = 128
    conv1_filters: int = 256
    conv1_size: tuple = (3, 3)
    pool1: tuple = (3, 3)
    conv2_filters: int = 128
    conv2_size: tuple = (10, 5)
    pool2: tuple = (5, 5)
    hidden: int = 512
    out_dims: int = 3

    # use the dependency rendering (False: sentence-only dep grid):
    use_dependency: bool = True
    share_vocab: bool = False

    # global pooling of the fused L1 images, "max" or "mean":
    global_pool: str = "max"
    head_bias: bool = True
    amr_vocab_size: int = 3
    dep_vocab_size: int = 3
    seed: int = 0
    torch_threads: int = 1

    @property
    def pooled1(self):
        return ceil_div(self.rows, self.pool1[0]), ceil_div(self.cols, self.pool1[1])

    @property
    def pooled2(self):
        h, w = self.pooled1
        return ceil_div(h, self.pool2[0]), ceil_div(w, self.pool2[1])

    @property
    def global_dim(self):
        """Length of g, the flattened output of one tower."""
        h, w = self.pooled2
        return self.conv2_filters * h * w

    @property
    def residual_dim(self):
        return 2 * self.conv1_filters

    @property
    def joint_dim(self):
        return self.residual_dim + 2 * self.global_dim

    def validate(self):
        if self.out_dims not in (3, 33):
            raise ValueError("Invalid number of output dimensions: {}".format(self.out_dims))
        if self.global_pool not in ("max", "mean"):
            raise ValueError("Invalid global pooling mode: {}".format(self.global_pool))
        for name in ("conv1_size", "pool1", "conv2_size", "pool2"):
            value = tuple(getattr(self, name))
            if len(value) != 2 or min(value) < 1:
                raise ValueError("Invalid {}: {}".format(name, value))
        for name in ("rows", "cols", "embed_dim", "conv1_filters", "conv2_filters", "hidden"):
            if getattr(self, name) < 1:
                raise ValueError("Invalid {}: {}".format(name, getattr(self, name)))
        if self.amr_vocab_size < 3 or self.dep_vocab_size < 3:
            raise ValueError("vocabularies must hold the three reserved tokens")
        if self.share_vocab and self.amr_vocab_size != self.dep_vocab_size:
            raise ValueError("a shared vocabulary needs equal vocabulary sizes")
        return self


# Global config
config = ModelConfig()


def set_config(new_config):
    global config
    config = new_config


class ConfigManager(ConfigBase):
    r"""
    Use this to temporarily change a value in the `rater.config` object:

    .. code-block:: python

        with ConfigManager("hidden", 64):
            model = RaterModel()
    """

    def __init__(self, *args):
        super().__init__(config, *args)


class _Tower(torch.nn.Module):
    """One branch of the rater, without its embedding table."""

    def __init__(self, cfg):
        super().__init__()
        self.conv1 = nn.Conv2dSame(cfg.embed_dim, cfg.conv1_filters, cfg.conv1_size)
        self.pool1 = nn.MaxPool2d(cfg.pool1)
        self.conv2 = nn.Conv2dSame(cfg.conv1_filters, cfg.conv2_filters, cfg.conv2_size)
        self.pool2 = nn.MaxPool2d(cfg.pool2)

    def forward(self, image):
        l1 = self.conv1(image)
        l2 = self.pool1(l1)
        g = self.pool2(self.conv2(l2)).flatten(1)
        return l1, l2, g


class RaterModel(torch.nn.Module):
    """
    Dual-branch convolutional rater mapping (AMR grid, dependency grid)
    pairs to out_dims quality scores in (0, 1).

    Args:
        model_config (ModelConfig): architecture (default: a copy of `config`)
    """

    def __init__(self, model_config=None):
        super().__init__()
        cfg = dataclasses.replace(config if model_config is None else model_config)
        self.config = cfg.validate()

        self.amr_embedding = nn.Embedding(cfg.amr_vocab_size, cfg.embed_dim)
        if cfg.share_vocab:
            self.dep_embedding = self.amr_embedding
        else:
            self.dep_embedding = nn.Embedding(cfg.dep_vocab_size, cfg.embed_dim)
        self.amr_tower = _Tower(cfg)
        self.dep_tower = _Tower(cfg)
        self.global_pool = nn.GlobalPoolFlatten(cfg.global_pool)
        self.hidden = nn.Dense(cfg.joint_dim, cfg.hidden, bias=cfg.head_bias, activation="relu")
        self.output = nn.Dense(cfg.hidden, cfg.out_dims, bias=False, activation="sigmoid")
        self.reset_parameters()

    def reset_parameters(self, seed=None):
        """Initializes all parameters from one generator, in module order."""
        generator = torch_generator(self.config.seed if seed is None else seed, "init")
        seen = set()
        for module in self.modules():
            if id(module) in seen or module is self:
                continue
            seen.add(id(module))
            if hasattr(module, "reset_parameters"):
                module.reset_parameters(generator=generator)

    def _check_grid(self, cells, side):
        expected = (self.config.rows, self.config.cols)
        if cells.dim() != 3 or tuple(cells.shape[1:]) != expected:
            raise ShapeMismatch(
                "{} grid has shape {}, model expects (N, {}, {})".format(
                    side, tuple(cells.shape), *expected
                )
            )

    def forward_trace(self, amr_cells, dep_cells):
        """Runs forward and returns every intermediate representation by name."""
        amr_cells = torch.as_tensor(amr_cells, dtype=torch.long)
        dep_cells = torch.as_tensor(dep_cells, dtype=torch.long)
        self._check_grid(amr_cells, "AMR")
        self._check_grid(dep_cells, "dependency")
        if amr_cells.size(0) != dep_cells.size(0):
            raise ShapeMismatch("AMR and dependency batches differ in size")

        trace = collections.OrderedDict()
        amr_l1, trace["l2_amr"], amr_g = self.amr_tower(self.amr_embedding(amr_cells))
        dep_l1, trace["l2_dep"], dep_g = self.dep_tower(self.dep_embedding(dep_cells))
        trace["l1_amr"], trace["l1_dep"] = amr_l1, dep_l1
        trace["g_amr"], trace["g_dep"] = amr_g, dep_g
        trace["j_res"] = self.global_pool(F.fuse(amr_l1, dep_l1))
        trace["j_glob"] = F.fuse(amr_g, dep_g)
        trace["j"] = torch.cat([trace["j_res"], trace["j_glob"]], dim=1)
        trace["output"] = self.output(self.hidden(trace["j"]))
        return trace

    def forward(self, amr_cells, dep_cells):
        return self.forward_trace(amr_cells, dep_cells)["output"]


def stack_cells(grids):
    return torch.from_numpy(np.stack([g.cells for g in grids]).astype(np.int64))


def predict(model, pairs, batch_size=64):
    """
    Scores (amr_grid, dep_grid) pairs in order.

    Returns:
        list of float64 arrays of length out_dims
    """
    pairs = list(pairs)
    if batch_size < 1:
        raise ValueError("Invalid batch size: {}".format(batch_size))
    torch.set_num_threads(model.config.torch_threads)
    was_training = model.training
    model.eval()
    rows = []
    with torch.no_grad():
        for start in range(0, len(pairs), batch_size):
            batch = pairs[start : start + batch_size]
            amr, dep = stack_cells([a for a, _ in batch]), stack_cells([d for _, d in batch])
            output = model(amr, dep)
            rows.extend(output.double().numpy())
    model.train(was_training)
    return rows


def _config_metadata(cfg):
    return {"config." + f.name: getattr(cfg, f.name) for f in dataclasses.fields(cfg)}


def _parse_field(field, text):
    default = field.default
    if isinstance(default, bool):
        if text not in ("True", "False"):
            raise serial.CheckpointError("bad boolean for {}: {}".format(field.name, text))
        return text == "True"
    if isinstance(default, int):
        return int(text)
    if isinstance(default, tuple):
        return tuple(int(v) for v in text.split(","))
    return text


def _config_from_metadata(metadata):
    values = {}
    for field in dataclasses.fields(ModelConfig):
        key = "config." + field.name
        if key not in metadata:
            raise serial.VersionMismatch("checkpoint lacks config field {}".format(field.name))
        values[field.name] = _parse_field(field, metadata[key])
    return ModelConfig(**values)


def save_checkpoint(model, path, amr_vocab=None, dep_vocab=None):
    """Writes parameters, config and vocabulary checksums of model to path."""
    metadata = _config_metadata(model.config)
    if amr_vocab is not None:
        metadata["vocab.amr"] = amr_vocab.checksum()
    if dep_vocab is not None:
        metadata["vocab.dep"] = dep_vocab.checksum()
    serial.save(model.state_dict(), metadata, path)
    logging.info("Saved rater checkpoint to %s" % path)


def _check_vocab(metadata, key, vocab, size):
    if vocab is None:
        return
    if len(vocab) != size:
        raise serial.VersionMismatch(
            "vocabulary has {} tokens, checkpoint expects {}".format(len(vocab), size)
        )
    stored = metadata.get(key)
    if stored is not None and stored != vocab.checksum():
        raise serial.VersionMismatch("vocabulary checksum does not match checkpoint")


def load_checkpoint(path, amr_vocab=None, dep_vocab=None):
    """
    Reads a checkpoint written by `save_checkpoint`. Vocabularies, when
    given, must be the ones the model was trained with.
    """
    metadata, tensors = serial.load(path)
    cfg = _config_from_metadata(metadata)
    _check_vocab(metadata, "vocab.amr", amr_vocab, cfg.amr_vocab_size)
    _check_vocab(metadata, "vocab.dep", dep_vocab, cfg.dep_vocab_size)
    model = RaterModel(cfg)
    expected = model.state_dict()
    if list(expected.keys()) != list(tensors.keys()):
        raise serial.VersionMismatch("checkpoint tensors do not match the model layout")
    for name, tensor in tensors.items():
        if tensor.size() != expected[name].size():
            raise serial.VersionMismatch(
                "tensor {} has shape {}, expected {}".format(
                    name, tuple(tensor.size()), tuple(expected[name].size())
                )
            )
    model.load_state_dict(tensors)
    return model
