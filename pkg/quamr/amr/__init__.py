#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

from .graph import (
    AmrGraph,
    DanglingReference,
    DuplicateVariableBinding,
    Edge,
    EmptyGraph,
    Node,
    PenmanError,
    Triple,
    UnbalancedParens,
    extract_triples,
    isomorphic,
    parse_penman,
    randomize_surface,
    read_sembank,
    serialize_penman,
    write_sembank,
)
from .simplify import LineTokens, SimplifiedAmr, clean_token, simplify


__all__ = [
    "AmrGraph",
    "DanglingReference",
    "DuplicateVariableBinding",
    "Edge",
    "EmptyGraph",
    "LineTokens",
    "Node",
    "PenmanError",
    "SimplifiedAmr",
    "Triple",
    "UnbalancedParens",
    "clean_token",
    "extract_triples",
    "isomorphic",
    "parse_penman",
    "randomize_surface",
    "read_sembank",
    "serialize_penman",
    "simplify",
    "write_sembank",
]
