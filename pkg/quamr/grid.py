#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import collections
import hashlib
import logging
from dataclasses import dataclass

import numpy as np

from .amr.simplify import SimplifiedAmr
from .common.serial import IoFailure
from .common.util import ConfigBase


__all__ = [
    "GridConfig",
    "TokenGrid",
    "Vocabulary",
    "build_vocab",
    "coverage",
    "project",
    "unproject",
]

PAD, UNK, TAB = "<pad>", "<unk>", "<tab>"
RESERVED = (PAD, UNK, TAB)
PAD_INDEX, UNK_INDEX, TAB_INDEX = 0, 1, 2


@dataclass
class GridConfig:
    """
    A configuration object for grid projection.
    """

    rows: int = 45
    cols: int = 15

    # minimum training-split frequency for a token to get its own index:
    min_freq: int = 5

    # build one vocabulary for both the AMR and the dependency side:
    share_vocab: bool = False


# Global config
config = GridConfig()


def set_config(new_config):
    global config
    config = new_config


class ConfigManager(ConfigBase):
    r"""
    Use this to temporarily change a value in the `grid.config` object:

    .. code-block:: python

        with ConfigManager("rows", 9, "cols", 6):
            grid = project(lines, vocab)
    """

    def __init__(self, *args):
        super().__init__(config, *args)


class Vocabulary(object):
    """
    Token to index map. Indices 0, 1, 2 are reserved for `<pad>`, `<unk>` and
    `<tab>`; the rest follow (count desc, token) order of the corpus the
    vocabulary was built from.
    """

    def __init__(self, tokens, min_freq):
        tokens = list(tokens)
        assert tuple(tokens[: len(RESERVED)]) == RESERVED, "reserved tokens come first"
        self.tokens = tokens
        self.min_freq = min_freq
        self.index = {token: idx for idx, token in enumerate(tokens)}
        assert len(self.index) == len(tokens), "vocabulary tokens must be unique"

    def lookup(self, token):
        return self.index.get(token, UNK_INDEX)

    def __len__(self):
        return len(self.tokens)

    def __contains__(self, token):
        return token in self.index

    def to_text(self):
        return "minfreq={}\n".format(self.min_freq) + "".join(t + "\n" for t in self.tokens)

    @classmethod
    def from_text(cls, text):
        lines = text.split("\n")
        header = lines[0]
        if not header.startswith("minfreq="):
            raise ValueError("vocabulary header must read minfreq=<k>, got {}".format(header))
        tokens = lines[1:]
        if tokens and tokens[-1] == "":
            tokens = tokens[:-1]
        return cls(tokens, int(header[len("minfreq=") :]))

    def checksum(self):
        return hashlib.blake2b(self.to_text().encode("utf-8"), digest_size=8).hexdigest()

    def save(self, path):
        try:
            with open(path, "w", encoding="utf-8") as f:
                f.write(self.to_text())
        except OSError as e:
            raise IoFailure("cannot write vocabulary {}: {}".format(path, e)) from e

    @classmethod
    def load(cls, path):
        try:
            with open(path, encoding="utf-8") as f:
                return cls.from_text(f.read())
        except OSError as e:
            raise IoFailure("cannot read vocabulary {}: {}".format(path, e)) from e

    def __eq__(self, other):
        return (
            isinstance(other, Vocabulary)
            and self.tokens == other.tokens
            and self.min_freq == other.min_freq
        )

    def __repr__(self):
        return "Vocabulary(size={}, min_freq={})".format(len(self), self.min_freq)


def build_vocab(corpus, min_freq=None):
    """
    Builds a `Vocabulary` from the training split's simplified lines. Tokens
    seen at least min_freq times get an index; the rest map to `<unk>`.
    """
    min_freq = config.min_freq if min_freq is None else min_freq
    if min_freq < 1:
        raise ValueError("Invalid min_freq: {}".format(min_freq))
    counts = collections.Counter()
    for lines in corpus:
        counts.update(lines.tokens())
    for token in RESERVED:
        counts.pop(token, None)
    kept = sorted((t for t, c in counts.items() if c >= min_freq), key=lambda t: (-counts[t], t))
    logging.info(
        "Vocabulary keeps %d of %d token types (min_freq=%d)" % (len(kept), len(counts), min_freq)
    )
    return Vocabulary(list(RESERVED) + kept, min_freq)


@dataclass(frozen=True, eq=False)
class TokenGrid:
    """A rows x cols matrix of vocabulary indices with truncation flags."""

    cells: np.ndarray
    side: str = "amr"
    rows_truncated: bool = False
    cols_truncated: bool = False

    @property
    def truncated(self):
        return self.rows_truncated or self.cols_truncated

    @property
    def shape(self):
        return self.cells.shape


def project(lines, vocab, side="amr", rows=None, cols=None):
    """
    Projects simplified lines onto a grid: line i fills row i with depth-many
    `<tab>` cells followed by its token indices, padded with `<pad>`. Lines
    and tokens beyond the grid are dropped and reported by the grid's
    truncation flags.
    """
    rows = config.rows if rows is None else rows
    cols = config.cols if cols is None else cols
    cells = np.full((rows, cols), PAD_INDEX, dtype=np.int64)
    cols_truncated = False
    for r, line in enumerate(lines.lines[:rows]):
        content = [TAB_INDEX] * line.depth + [vocab.lookup(t) for t in line.tokens]
        cols_truncated = cols_truncated or len(content) > cols
        content = content[:cols]
        cells[r, : len(content)] = content
    return TokenGrid(
        cells, side=side, rows_truncated=len(lines) > rows, cols_truncated=cols_truncated
    )


def unproject(grid, vocab):
    """Reads lines back from a grid that was projected without truncation."""
    lines = []
    for row in grid.cells:
        row = [int(c) for c in row]
        while row and row[-1] == PAD_INDEX:
            row.pop()
        if not row:
            break
        depth = 0
        while depth < len(row) and row[depth] == TAB_INDEX:
            depth += 1
        lines.append((depth, [vocab.tokens[c] for c in row[depth:]]))
    return SimplifiedAmr(lines)


def coverage(grids):
    """Fraction of grids that hold their input without truncation."""
    grids = list(grids)
    if not grids:
        return 1.0
    return sum(not g.truncated for g in grids) / len(grids)
