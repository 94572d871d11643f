#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

"""
Checkpoint container.

A checkpoint file has three parts:

1. a UTF-8 text manifest of ``key = value`` lines and one
   ``tensor <name> <shape> <offset> <length>`` line per tensor, closed by an
   ``end-manifest`` line;
2. one blob of little-endian 32-bit floats holding the tensors in manifest
   order (offsets and lengths count floats);
3. an 8-byte blake2b checksum of the blob.
"""

import collections
import hashlib
import logging

import numpy as np
import torch


FORMAT_VERSION = 1
MAGIC = "quamr-checkpoint"
END_MANIFEST = "end-manifest"
CHECKSUM_BYTES = 8


class IoFailure(IOError):
    """Raised when a file cannot be read or written."""


class CheckpointError(ValueError):
    pass


class VersionMismatch(CheckpointError):
    """Raised when a checkpoint does not match the expected format or vocabulary."""


class ChecksumMismatch(CheckpointError):
    """Raised when a checkpoint is truncated or corrupted."""


def checksum(data):
    return hashlib.blake2b(data, digest_size=CHECKSUM_BYTES).digest()


def _format_value(value):
    if isinstance(value, (tuple, list)):
        return ",".join(str(v) for v in value)
    return str(value)


def save(tensors, metadata, path):
    """
    Writes an ordered mapping of float tensors plus string metadata to path.

    Args:
        tensors (OrderedDict): name -> torch.Tensor, written in iteration order
        metadata (dict): key -> value; tuples and lists are comma-joined
        path (str): destination file
    """
    lines = [MAGIC, "format-version = {}".format(FORMAT_VERSION)]
    for key in sorted(metadata.keys()):
        value = _format_value(metadata[key])
        assert "\n" not in value, "metadata values must be single-line"
        lines.append("{} = {}".format(key, value))

    blobs, offset = [], 0
    for name, tensor in tensors.items():
        array = tensor.detach().cpu().numpy().astype("<f4", copy=False)
        shape = "x".join(str(s) for s in array.shape) or "scalar"
        lines.append("tensor {} {} {} {}".format(name, shape, offset, array.size))
        blobs.append(np.ascontiguousarray(array).tobytes())
        offset += array.size
    lines.append(END_MANIFEST)

    blob = b"".join(blobs)
    try:
        with open(path, "wb") as f:
            f.write(("\n".join(lines) + "\n").encode("utf-8"))
            f.write(blob)
            f.write(checksum(blob))
    except OSError as e:
        raise IoFailure("cannot write checkpoint {}: {}".format(path, e)) from e
    logging.info("Wrote checkpoint with %d tensors to %s" % (len(tensors), path))


def _parse_shape(text):
    if text == "scalar":
        return ()
    return tuple(int(s) for s in text.split("x"))


def load(path):
    """
    Reads a checkpoint written by `save`.

    Returns:
        (metadata, tensors): metadata maps keys to strings; tensors is an
        OrderedDict of float32 torch tensors in manifest order.
    """
    try:
        with open(path, "rb") as f:
            data = f.read()
    except OSError as e:
        raise IoFailure("cannot read checkpoint {}: {}".format(path, e)) from e

    marker = ("\n" + END_MANIFEST + "\n").encode("utf-8")
    end = data.find(marker)
    if end < 0:
        raise ChecksumMismatch("checkpoint manifest is truncated: {}".format(path))
    manifest = data[:end].decode("utf-8").split("\n")
    body = data[end + len(marker) :]

    if not manifest or manifest[0] != MAGIC:
        raise VersionMismatch("not a quamr checkpoint: {}".format(path))

    metadata, entries = {}, []
    for line in manifest[1:]:
        if line.startswith("tensor "):
            _, name, shape, offset, length = line.split(" ")
            entries.append((name, _parse_shape(shape), int(offset), int(length)))
        else:
            key, _, value = line.partition(" = ")
            metadata[key] = value

    version = metadata.pop("format-version", None)
    if version != str(FORMAT_VERSION):
        raise VersionMismatch(
            "checkpoint format version {} is not supported (expected {})".format(
                version, FORMAT_VERSION
            )
        )

    num_floats = sum(length for _, _, _, length in entries)
    if len(body) != 4 * num_floats + CHECKSUM_BYTES:
        raise ChecksumMismatch(
            "checkpoint {} has {} payload bytes, expected {}".format(
                path, len(body), 4 * num_floats + CHECKSUM_BYTES
            )
        )
    blob, stored = body[:-CHECKSUM_BYTES], body[-CHECKSUM_BYTES:]
    if checksum(blob) != stored:
        raise ChecksumMismatch("checkpoint checksum does not match: {}".format(path))

    values = np.frombuffer(blob, dtype="<f4")
    tensors = collections.OrderedDict()
    for name, shape, offset, length in entries:
        array = values[offset : offset + length].astype(np.float32).reshape(shape)
        tensors[name] = torch.from_numpy(array.copy())
    return metadata, tensors
