"""Sentence-graph construction over the kept sentences.

An edge appears when any of four linkers fires: deverbal-noun reference,
same-entity continuation, a discourse marker opening the later sentence, or
plain embedding similarity above a threshold.  Linguistic evidence pins the
edge weight to 1.0; similarity-only edges carry the cosine value.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .embedding import EmbeddingMatrix, cosine
from .ingest import SentenceRecord, is_punctuation, tokenize_preserve_case
from .stopwords import STOPWORDS

# Connectives that tie a sentence to its predecessor.  Stored as token
# tuples; a sentence matches when its token sequence starts with one.
DISCOURSE_MARKERS: tuple[tuple[str, ...], ...] = (
    ("however",),
    ("therefore",),
    ("thus",),
    ("hence",),
    ("moreover",),
    ("furthermore",),
    ("besides",),
    ("nevertheless",),
    ("consequently",),
    ("but",),
    ("also",),
    ("in", "addition"),
    ("in", "contrast"),
    ("as", "a", "result"),
    ("on", "the", "other", "hand"),
)

# Noun endings that can close a verb nominalization ("propose"/"proposal").
_NOMINAL_SUFFIXES = ("tion", "sion", "ion", "ment", "ance", "ence", "ing", "al")

_MIN_STEM = 3


def _nominalizes(noun: str, verb: str) -> bool:
    """True when `noun` = verb stem + nominal suffix, tolerating a stripped
    final -e on the verb and a doubled final consonant on the stem."""
    if noun == verb:
        return False
    for suffix in _NOMINAL_SUFFIXES:
        if not noun.endswith(suffix):
            continue
        stem = noun[: -len(suffix)]
        if len(stem) < _MIN_STEM:
            continue
        if stem == verb:
            return True
        if verb.endswith("e") and stem == verb[:-1]:
            return True
        if len(stem) >= 2 and stem[-1] == stem[-2] and stem[:-1] == verb:
            return True
    return False


def link_deverbal(a: SentenceRecord, b: SentenceRecord) -> bool:
    """True when some token of `b` is a nominalization of a token of `a`.

    No POS tagging: every alphabetic non-stopword token is tried in both
    the verb and the noun role.
    """
    verbs = [t for t in a.tokens if t.isalpha() and t not in STOPWORDS]
    nouns = [t for t in b.tokens if t.isalpha() and t not in STOPWORDS]
    return any(_nominalizes(noun, verb) for verb in verbs for noun in nouns)


def _capitalized_noninitial(record: SentenceRecord) -> set[str]:
    """Lowercase forms of original-case tokens that are capitalized and not
    the sentence-initial token."""
    tokens = tokenize_preserve_case(record.text)
    out: set[str] = set()
    for pos, tok in enumerate(tokens):
        if pos == 0 or not tok[0].isupper() or len(tok) < 2:
            continue
        low = tok.lower()
        if low in STOPWORDS or is_punctuation(tok):
            continue
        out.add(low)
    return out


def document_frequencies(sentences: Iterable[SentenceRecord]) -> Counter:
    """Number of sentences each (lowercase) token appears in."""
    df: Counter = Counter()
    for sent in sentences:
        df.update(set(sent.tokens))
    return df


def link_entity_continuation(
    a: SentenceRecord,
    b: SentenceRecord,
    doc_freq: Mapping[str, int] | None = None,
) -> bool:
    """True when the sentences share a proper-noun surrogate.

    A surrogate is a token that is capitalized mid-sentence in both, or (when
    document frequencies are supplied) a shared non-stopword token appearing
    in at most two sentences of the whole document.
    """
    shared = {
        t
        for t in set(a.tokens) & set(b.tokens)
        if t.isalpha() and t not in STOPWORDS and len(t) >= 3
    }
    if not shared:
        return False
    caps = _capitalized_noninitial(a) & _capitalized_noninitial(b)
    if shared & caps:
        return True
    if doc_freq is not None:
        return any(doc_freq.get(t, 0) <= 2 for t in shared)
    return False


def link_discourse_marker(b: SentenceRecord) -> bool:
    """True when the sentence opens with a marker from the fixed list."""
    for marker in DISCOURSE_MARKERS:
        if b.tokens[: len(marker)] == marker:
            return True
    return False


@dataclass(frozen=True)
class Edge:
    """Undirected edge between kept sentences i < j with its provenance."""

    i: int
    j: int
    weight: float
    reasons: frozenset[str]

    def __post_init__(self) -> None:
        if self.i >= self.j:
            raise ValueError("edges are stored with i < j")
        if not self.reasons:
            raise ValueError("an edge needs at least one reason")
        if not 0.0 < self.weight <= 1.0:
            raise ValueError("edge weight must lie in (0, 1]")


@dataclass(frozen=True)
class SentenceGraph:
    """Weighted undirected graph over the kept sentence indices."""

    nodes: tuple[int, ...]
    edges: tuple[Edge, ...]

    def adjacency(self) -> np.ndarray:
        """Dense adjacency over `nodes` order."""
        pos = {node: k for k, node in enumerate(self.nodes)}
        adj = np.zeros((len(self.nodes), len(self.nodes)))
        for edge in self.edges:
            a, b = pos[edge.i], pos[edge.j]
            adj[a, b] = adj[b, a] = edge.weight
        return adj

    def dump(self) -> str:
        """Debug edge list: `i j weight reason,reason` per line, sorted."""
        lines = []
        for edge in sorted(self.edges, key=lambda e: (e.i, e.j)):
            reasons = ",".join(sorted(edge.reasons))
            lines.append(f"{edge.i} {edge.j} {edge.weight:.6f} {reasons}")
        return "\n".join(lines)


def build_sentence_graph(
    sentences: Sequence[SentenceRecord],
    embeddings: EmbeddingMatrix,
    kept: Sequence[int],
    tau: float = 0.6,
    window: int = 3,
) -> SentenceGraph:
    """Connect kept sentences whenever any linker fires.

    The similarity linker (cosine >= tau) is window-free; deverbal and
    entity linkers only look at pairs within `window` kept positions; the
    discourse linker ties a marker-initial sentence to the kept sentence
    right before it.  Sentences flagged all-OOV never receive similarity
    edges (their cosine is 0 by definition).
    """
    if not 0.0 < tau < 1.0:
        raise ValueError("tau must lie in (0, 1)")
    kept = sorted(kept)
    if any(i < 0 or i >= len(sentences) for i in kept):
        raise ValueError("kept indices out of range")
    df = document_frequencies(sentences)
    reasons: dict[tuple[int, int], set[str]] = {}
    weights: dict[tuple[int, int], float] = {}

    def add(i: int, j: int, reason: str, weight: float) -> None:
        key = (min(i, j), max(i, j))
        reasons.setdefault(key, set()).add(reason)
        weights[key] = max(weights.get(key, 0.0), weight)

    for p in range(len(kept)):
        for q in range(p + 1, len(kept)):
            i, j = kept[p], kept[q]
            sim = cosine(embeddings.vectors[i], embeddings.vectors[j])
            if sim >= tau:
                add(i, j, "similarity", sim)
            if q - p <= window:
                a, b = sentences[i], sentences[j]
                if link_deverbal(a, b) or link_deverbal(b, a):
                    add(i, j, "deverbal", 1.0)
                if link_entity_continuation(a, b, df):
                    add(i, j, "entity", 1.0)
            if q - p == 1 and link_discourse_marker(sentences[j]):
                add(i, j, "discourse", 1.0)

    edges = []
    for (i, j), why in sorted(reasons.items()):
        linguistic = why - {"similarity"}
        weight = 1.0 if linguistic else weights[(i, j)]
        edges.append(Edge(i=i, j=j, weight=weight, reasons=frozenset(why)))
    return SentenceGraph(nodes=tuple(kept), edges=tuple(edges))
