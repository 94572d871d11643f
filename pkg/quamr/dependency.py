#!/usr/bin/env python3

# Copyright (c) quamr contributors.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

"""
CoNLL-U ingestion and rendering of dependency trees as indented token lines.

quamr does not parse sentences. Produce a pre-tokenized CoNLL-U file with
any Universal Dependencies parser and keep a ``# sent_id = <id>`` comment on
every sentence so trees can be joined with graphs by sentence id.
"""

import collections
import logging

from .amr.simplify import SimplifiedAmr, clean_token


__all__ = [
    "ConllError",
    "CyclicHeads",
    "DepToken",
    "DepTree",
    "MalformedLine",
    "MultipleRoots",
    "read_conllu",
    "render_dep_lines",
    "render_sentence_only",
    "write_conllu",
]

NUM_COLUMNS = 10


class ConllError(ValueError):
    pass


class MalformedLine(ConllError):
    pass


class CyclicHeads(ConllError):
    pass


class MultipleRoots(ConllError):
    pass


# head is a 0-based token index, or None for the root:
DepToken = collections.namedtuple("DepToken", "form lemma deprel head")


class DepTree(object):
    """A validated dependency tree over the tokens of one sentence."""

    def __init__(self, tokens, sentence_id, text=None):
        self.tokens = tuple(DepToken(*t) for t in tokens)
        self.sentence_id = sentence_id
        self.text = text
        self._validate()

    def _validate(self):
        if not self.tokens:
            raise MalformedLine("sentence {} has no tokens".format(self.sentence_id))
        roots = [i for i, t in enumerate(self.tokens) if t.head is None]
        for i, token in enumerate(self.tokens):
            if token.head is not None and not 0 <= token.head < len(self.tokens):
                raise MalformedLine(
                    "token {} of sentence {} has head out of range".format(
                        i + 1, self.sentence_id
                    )
                )
        if len(roots) > 1:
            raise MultipleRoots(
                "sentence {} has {} root tokens".format(self.sentence_id, len(roots))
            )
        for i in range(len(self.tokens)):
            node, steps = i, 0
            while self.tokens[node].head is not None:
                node = self.tokens[node].head
                steps += 1
                if steps > len(self.tokens):
                    raise CyclicHeads(
                        "heads of sentence {} contain a cycle".format(self.sentence_id)
                    )
        assert len(roots) == 1, "acyclic head structure must have a root"

    @property
    def root(self):
        return next(i for i, t in enumerate(self.tokens) if t.head is None)

    def children(self, index):
        return [i for i, t in enumerate(self.tokens) if t.head == index]

    def forms(self):
        return [t.form for t in self.tokens]

    def lemmas(self):
        return [t.lemma for t in self.tokens]

    def __len__(self):
        return len(self.tokens)

    def __repr__(self):
        return "DepTree(sentence_id={}, tokens={})".format(
            self.sentence_id, len(self.tokens)
        )


def _parse_block(lines, position):
    sentence_id, text, tokens = str(position), None, []
    for number, line in lines:
        if line.startswith("#"):
            key, _, value = line.lstrip("#").partition("=")
            if key.strip() == "sent_id":
                sentence_id = value.strip()
            elif key.strip() == "text":
                text = value.strip()
            continue
        columns = line.split("\t")
        if len(columns) != NUM_COLUMNS:
            raise MalformedLine(
                "line {} has {} columns, expected {}".format(
                    number, len(columns), NUM_COLUMNS
                )
            )
        token_id, form, lemma, _, _, _, head, deprel = columns[:8]
        # multiword tokens and empty nodes:
        if "-" in token_id or "." in token_id:
            continue
        try:
            head = int(head)
        except ValueError:
            raise MalformedLine("line {} has a non-integer head".format(number))
        tokens.append((form, lemma, deprel, None if head == 0 else head - 1))
    if not tokens:
        return None
    return DepTree(tokens, sentence_id, text=text)


def read_conllu(text, strict=True):
    """
    Reads CoNLL-U text into a list of `DepTree`, one per sentence block.

    With ``strict=False`` malformed blocks are logged and skipped instead of
    raising `MalformedLine`, `CyclicHeads` or `MultipleRoots`.
    """
    trees, block = [], []
    lines = text.splitlines() + [""]
    for number, line in enumerate(lines, 1):
        if line.strip():
            block.append((number, line.rstrip("\n")))
            continue
        if not block:
            continue
        try:
            tree = _parse_block(block, len(trees))
            if tree is not None:
                trees.append(tree)
        except ConllError as e:
            if strict:
                raise
            logging.warning("Skipping malformed dependency block: %s" % e)
        block = []
    return trees


def write_conllu(trees):
    """Renders trees as CoNLL-U with sent_id and text comments."""
    blocks = []
    for tree in trees:
        lines = ["# sent_id = {}".format(tree.sentence_id)]
        lines.append("# text = {}".format(tree.text or " ".join(tree.forms())))
        for i, token in enumerate(tree.tokens):
            head = 0 if token.head is None else token.head + 1
            lines.append(
                "\t".join(
                    [str(i + 1), token.form, token.lemma, "_", "_", "_"]
                    + [str(head), token.deprel, "_", "_"]
                )
            )
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n\n" if blocks else "")


def render_dep_lines(tree):
    """
    Renders a tree like a simplified AMR: the root form on line 0, every
    dependent on its own line as [":deprel", form] at its tree depth.
    Children are visited in surface order.
    """
    lines = []

    def visit(index, depth):
        token = tree.tokens[index]
        if token.head is None:
            lines.append((depth, [clean_token(token.form)]))
        else:
            lines.append((depth, [clean_token(":" + token.deprel), clean_token(token.form)]))
        for child in tree.children(index):
            visit(child, depth + 1)

    visit(tree.root, 0)
    return SimplifiedAmr(lines)


def render_sentence_only(tree):
    """All token forms on one line at depth 0."""
    return SimplifiedAmr([(0, [clean_token(form) for form in tree.forms()])])
