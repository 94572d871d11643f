#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import collections
import re


__all__ = ["LineTokens", "SimplifiedAmr", "clean_token", "simplify"]

_REMOVED_CHARACTERS = str.maketrans("", "", "\"()/")
_OP_ROLE = re.compile(r"^:op(\d+)$", re.IGNORECASE)


LineTokens = collections.namedtuple("LineTokens", "depth tokens")


def clean_token(token):
    """
    Lowercases a token, drops quotes, parentheses and slashes, and joins
    inner whitespace with underscores so the token stays a single cell.
    """
    cleaned = "_".join(token.lower().translate(_REMOVED_CHARACTERS).split())
    return cleaned if cleaned else "_"


def pointer(k):
    return "*{}*".format(k)


class SimplifiedAmr(object):
    """
    Indented token lines: one `LineTokens` (depth, tokens) per rendered line.
    Structure is carried by depth alone.
    """

    def __init__(self, lines=()):
        self.lines = tuple(LineTokens(int(d), tuple(t)) for d, t in lines)
        for idx, line in enumerate(self.lines):
            previous = self.lines[idx - 1].depth if idx > 0 else -1
            assert 0 <= line.depth <= previous + 1, "line %d skips a depth level" % idx

    def tokens(self):
        for line in self.lines:
            yield from line.tokens

    def to_text(self):
        """One row per line: depth-many tabs, then space-separated tokens."""
        return "\n".join(
            "\t" * line.depth + " ".join(line.tokens) for line in self.lines
        )

    @classmethod
    def from_text(cls, text):
        lines = []
        for row in text.split("\n"):
            if not row.strip():
                continue
            content = row.lstrip("\t")
            lines.append((len(row) - len(content), content.split()))
        return cls(lines)

    def __len__(self):
        return len(self.lines)

    def __eq__(self, other):
        return isinstance(other, SimplifiedAmr) and self.lines == other.lines

    def __hash__(self):
        return hash(self.lines)

    def __repr__(self):
        return "SimplifiedAmr({})".format(
            [(line.depth, list(line.tokens)) for line in self.lines]
        )


def _name_constituents(g, name_node):
    """Ordered :opN strings of a name node, plus its remaining out-edges."""
    ops, rest = [], []
    for edge in g.out_edges(name_node):
        match = _OP_ROLE.match(edge.role)
        if match and not g.nodes[edge.target].is_variable:
            ops.append((int(match.group(1)), edge.index, g.nodes[edge.target].value))
        else:
            rest.append(edge)
    return [value for _, _, value in sorted(ops)], rest


def simplify(g):
    """
    Converts g into a `SimplifiedAmr`.

    The depth-first walk follows the stored edge order, like
    `serialize_penman`. Variables are replaced by their concepts. A
    re-entrant variable gets a ``*k*`` pointer placed before its concept
    where it is defined and alone where it is referenced again; k counts
    re-entrant variables in order of first mention. A ``:name`` edge to a
    ``name`` node collapses into one line holding its ``:opN`` strings.
    """
    reentrant = set(g.reentrant_variables())
    pointers, seen, lines = {}, set(), []

    def pointer_tokens(node_id):
        if node_id not in reentrant:
            return []
        if node_id not in pointers:
            pointers[node_id] = len(pointers)
        return [pointer(pointers[node_id])]

    def visit(node_id, depth, role):
        node = g.nodes[node_id]
        tokens = [] if role is None else [role]
        if not node.is_variable:
            lines.append((depth, tokens + [node.value]))
            return
        if node_id in seen:
            lines.append((depth, tokens + pointer_tokens(node_id)))
            return
        seen.add(node_id)

        children = g.out_edges(node_id)
        if role is not None and role.lower() == ":name" and node.concept.lower() == "name":
            ops, children = _name_constituents(g, node_id)
            lines.append((depth, tokens + pointer_tokens(node_id) + ops))
        else:
            lines.append((depth, tokens + pointer_tokens(node_id) + [node.concept]))
        for edge in children:
            visit(edge.target, depth + 1, edge.role)

    visit(g.root, 0, None)
    return SimplifiedAmr(
        (depth, [clean_token(t) for t in tokens]) for depth, tokens in lines
    )
