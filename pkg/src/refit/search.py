"""Keyword search over corpus method names and docs.

A small TF-IDF index produces the initial candidate ranking that the
type-based re-ranker then reorders.  Tokens are lowercased; camelCase and
snake_case identifiers split into their words.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .typemodel import CorpusEntry

_CAMEL_BOUNDARY = re.compile(r"(?<=[a-z0-9])(?=[A-Z])|(?<=[A-Z])(?=[A-Z][a-z])")
_NON_WORD = re.compile(r"[^A-Za-z0-9]+")


def tokenize(text: str) -> list[str]:
    spaced = _CAMEL_BOUNDARY.sub(" ", text)
    return [tok.lower() for tok in _NON_WORD.split(spaced) if tok]


@dataclass
class SearchIndex:
    vocabulary: dict[str, int]  # token -> document frequency
    postings: dict[str, dict[str, int]]  # entry id -> token -> term frequency
    entry_order: list[str]


def build_index(entries: list[CorpusEntry]) -> SearchIndex:
    """Index each entry's method name plus doc string."""
    vocabulary: dict[str, int] = {}
    postings: dict[str, dict[str, int]] = {}
    order: list[str] = []
    for entry in entries:
        tf: dict[str, int] = {}
        for tok in tokenize(entry.signature.name + " " + entry.doc):
            tf[tok] = tf.get(tok, 0) + 1
        postings[entry.id] = tf
        order.append(entry.id)
        for tok in tf:
            vocabulary[tok] = vocabulary.get(tok, 0) + 1
    return SearchIndex(vocabulary, postings, order)


def _idf(index: SearchIndex, tok: str) -> float:
    n_docs = len(index.entry_order)
    df = index.vocabulary.get(tok, 0)
    return math.log((1 + n_docs) / (1 + df)) + 1.0


def _weights(index: SearchIndex, tf: dict[str, int]) -> dict[str, float]:
    return {tok: (1.0 + math.log(n)) * _idf(index, tok) for tok, n in tf.items()}


def keyword_search(
    index: SearchIndex, query: str, k: int = 10
) -> list[tuple[str, float]]:
    """Top-k entries by TF-IDF cosine similarity to the query text.

    Zero-score entries are dropped; ties keep corpus order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    q_tf: dict[str, int] = {}
    for tok in tokenize(query):
        q_tf[tok] = q_tf.get(tok, 0) + 1
    q_vec = _weights(index, q_tf)
    q_norm = math.sqrt(sum(w * w for w in q_vec.values()))
    if q_norm == 0.0:
        return []
    scored: list[tuple[float, int, str]] = []
    for pos, entry_id in enumerate(index.entry_order):
        d_vec = _weights(index, index.postings[entry_id])
        dot = sum(w * d_vec[tok] for tok, w in q_vec.items() if tok in d_vec)
        if dot <= 0.0:
            continue
        d_norm = math.sqrt(sum(w * w for w in d_vec.values()))
        scored.append((dot / (q_norm * d_norm), pos, entry_id))
    scored.sort(key=lambda t: (-t[0], t[1]))
    return [(entry_id, score) for score, _, entry_id in scored[:k]]
