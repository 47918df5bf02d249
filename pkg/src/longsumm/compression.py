"""Cluster-to-sentence compression through a shared word graph.

Every sentence of a cluster is threaded through a directed token graph
(Filippova-style mapping, without POS tags); low-cost START-to-END paths are
enumerated with Yen's algorithm and reranked by keyphrase salience.  The
best path becomes the cluster's summary sentence; clusters that yield no
path in bounds fall back to their highest-ranked member sentence.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .ingest import SentenceRecord, is_punctuation
from .stopwords import STOPWORDS

START = 0
END = 1

_START_TOKEN = "-start-"
_END_TOKEN = "-end-"


def _eligible(token: str) -> bool:
    return token not in STOPWORDS and not is_punctuation(token)


def extract_keyphrases(sentences: Sequence[SentenceRecord]) -> dict[str, float]:
    """Token salience from PageRank over a word co-occurrence graph.

    Stopwords and punctuation are excluded; the remaining tokens of each
    sentence are linked when adjacent in that filtered sequence (window 2).
    Scores are nonnegative and sum to 1; an all-stopword cluster yields an
    empty map.
    """
    if not sentences:
        raise ValueError("need at least one sentence")
    weights: Counter = Counter()
    vocab: dict[str, int] = {}
    for sent in sentences:
        filtered = [t for t in sent.tokens if _eligible(t)]
        for tok in filtered:
            vocab.setdefault(tok, len(vocab))
        for a, b in zip(filtered, filtered[1:]):
            if a == b:
                continue
            key = (min(a, b), max(a, b))
            weights[key] += 1.0
    if not vocab:
        return {}
    n = len(vocab)
    adj = np.zeros((n, n))
    for (a, b), w in weights.items():
        ia, ib = vocab[a], vocab[b]
        adj[ia, ib] = adj[ib, ia] = w
    row_sums = adj.sum(axis=1)
    transition = np.where(
        row_sums[:, None] > 0,
        adj / np.where(row_sums[:, None] > 0, row_sums[:, None], 1.0),
        1.0 / n,
    )
    scores = np.full(n, 1.0 / n)
    damping = 0.85
    for _ in range(200):
        updated = (1.0 - damping) / n + damping * (transition.T @ scores)
        if np.abs(updated - scores).sum() < 1e-10:
            scores = updated
            break
        scores = updated
    return {tok: float(scores[idx]) for tok, idx in vocab.items()}


@dataclass
class WordGraph:
    """Directed token graph shared by a sentence cluster.

    Node 0 is START, node 1 is END.  `occupants[node]` maps sentence id to
    the (1-based) token position that node holds in that sentence; a node
    never holds two positions of the same sentence.
    """

    tokens: list[str] = field(default_factory=lambda: [_START_TOKEN, _END_TOKEN])
    occupants: list[dict[int, int]] = field(default_factory=lambda: [{}, {}])
    sentence_paths: list[list[int]] = field(default_factory=list)
    successors: dict[int, dict[int, float]] = field(default_factory=dict)
    edge_sentences: dict[tuple[int, int], set[int]] = field(default_factory=dict)

    def frequency(self, node: int) -> int:
        return len(self.occupants[node])

    def path_tokens(self, path: Sequence[int]) -> list[str]:
        return [self.tokens[node] for node in path[1:-1]]

    def is_valid_path(self, path: Sequence[int]) -> bool:
        if not path or path[0] != START or path[-1] != END:
            return False
        return all(v in self.successors.get(u, {}) for u, v in zip(path, path[1:]))


def _context_overlap(
    graph: WordGraph,
    node: int,
    left: int | None,
    right: int | None,
    pos_maps: list[dict[int, int]],
) -> int:
    """How often the candidate node's in-graph neighbors match the current
    token's already-mapped neighbors."""
    score = 0
    for sid, pos in graph.occupants[node].items():
        if left is not None and pos_maps[sid].get(pos - 1) == left:
            score += 1
        if right is not None and pos_maps[sid].get(pos + 1) == right:
            score += 1
    return score


def build_word_graph(sentences: Sequence[SentenceRecord]) -> WordGraph:
    """Thread cluster sentences through a shared token graph.

    Mapping runs in three passes per sentence: content words with an
    unambiguous same-form node, then ambiguous content words resolved by
    context overlap and node frequency, then stopwords and punctuation,
    which merge only on context overlap.  A node accepts at most one token
    per sentence, so every sentence stays reconstructible as a path.
    """
    if not sentences or all(not s.tokens for s in sentences):
        raise ValueError("need at least one sentence with tokens")
    graph = WordGraph()
    by_form: dict[str, list[int]] = defaultdict(list)
    # pos_maps[sid][position] = node occupying that position (1-based tokens;
    # 0 is START, len+1 is END).
    pos_maps: list[dict[int, int]] = []

    def new_node(token: str, sid: int, pos: int) -> int:
        node = len(graph.tokens)
        graph.tokens.append(token)
        graph.occupants.append({sid: pos})
        by_form[token].append(node)
        return node

    def occupy(node: int, sid: int, pos: int) -> None:
        graph.occupants[node][sid] = pos

    for sid, sent in enumerate(sentences):
        tokens = list(sent.tokens)
        m = len(tokens)
        mapping: list[int | None] = [None] * (m + 2)
        mapping[0] = START
        mapping[m + 1] = END
        occupy(START, sid, 0)
        occupy(END, sid, m + 1)
        pos_map: dict[int, int] = {0: START, m + 1: END}
        pos_maps.append(pos_map)

        def candidates(token: str) -> list[int]:
            return [nid for nid in by_form[token] if sid not in graph.occupants[nid]]

        deferred: list[int] = []
        # Pass 1: content words that are new or unambiguous.
        for j, token in enumerate(tokens, start=1):
            if not _eligible(token):
                continue
            cands = candidates(token)
            if not by_form[token] or not cands:
                mapping[j] = new_node(token, sid, j)
            elif len(cands) == 1 and len(by_form[token]) == 1:
                mapping[j] = cands[0]
                occupy(cands[0], sid, j)
            else:
                deferred.append(j)
                continue
            pos_map[j] = mapping[j]

        # Pass 2: ambiguous content words, by context overlap then frequency.
        for j in deferred:
            token = tokens[j - 1]
            cands = candidates(token)
            if not cands:
                node = new_node(token, sid, j)
            else:
                left = mapping[j - 1]
                right = mapping[j + 1]
                ranked = sorted(
                    cands,
                    key=lambda nid: (
                        -_context_overlap(graph, nid, left, right, pos_maps),
                        -graph.frequency(nid),
                        nid,
                    ),
                )
                node = ranked[0]
                occupy(node, sid, j)
            mapping[j] = node
            pos_map[j] = node

        # Pass 3: stopwords and punctuation merge only on context overlap.
        for j, token in enumerate(tokens, start=1):
            if _eligible(token):
                continue
            cands = candidates(token)
            left = mapping[j - 1]
            right = mapping[j + 1]
            node = None
            if cands:
                ranked = sorted(
                    cands,
                    key=lambda nid: (
                        -_context_overlap(graph, nid, left, right, pos_maps),
                        -graph.frequency(nid),
                        nid,
                    ),
                )
                best = ranked[0]
                if _context_overlap(graph, best, left, right, pos_maps) >= 1:
                    node = best
                    occupy(node, sid, j)
            if node is None:
                node = new_node(token, sid, j)
            mapping[j] = node
            pos_map[j] = node

        path = [mapping[p] for p in range(m + 2)]
        assert all(node is not None for node in path)
        graph.sentence_paths.append(path)  # type: ignore[arg-type]
        for u, v in zip(path, path[1:]):
            graph.edge_sentences.setdefault((u, v), set()).add(sid)  # type: ignore[arg-type]

    _assign_edge_weights(graph)
    return graph


def _assign_edge_weights(graph: WordGraph) -> None:
    """Filippova-style weights: w'(i,j) = (f(i)+f(j)) / sum_s 1/dist_s(i,j),
    normalized by f(i)*f(j).  Lower weight means a stronger, more canonical
    transition, so path search minimizes total weight."""
    for (u, v), _sids in graph.edge_sentences.items():
        fu, fv = graph.frequency(u), graph.frequency(v)
        inv_dist = 0.0
        occ_u, occ_v = graph.occupants[u], graph.occupants[v]
        for sid, pos_u in occ_u.items():
            pos_v = occ_v.get(sid)
            if pos_v is not None and pos_u < pos_v:
                inv_dist += 1.0 / (pos_v - pos_u)
        weight = ((fu + fv) / inv_dist) / (fu * fv)
        graph.successors.setdefault(u, {})[v] = weight


def _dijkstra(
    graph: WordGraph,
    source: int,
    banned_nodes: frozenset[int],
    banned_edges: frozenset[tuple[int, int]],
) -> tuple[float, list[int]] | None:
    """Cheapest source-to-END path avoiding the banned sets; ties resolved by
    node-id order through the heap."""
    dist: dict[int, float] = {source: 0.0}
    prev: dict[int, int] = {}
    heap: list[tuple[float, int]] = [(0.0, source)]
    done: set[int] = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == END:
            path = [u]
            while path[-1] != source:
                path.append(prev[path[-1]])
            return d, path[::-1]
        for v, w in sorted(graph.successors.get(u, {}).items()):
            if v in banned_nodes or (u, v) in banned_edges:
                continue
            nd = d + w
            if nd < dist.get(v, math.inf) - 1e-15:
                dist[v] = nd
                prev[v] = u
                heapq.heappush(heap, (nd, v))
    return None


@dataclass(frozen=True)
class PathCandidate:
    """One START-to-END path with its cost and surface tokens."""

    nodes: tuple[int, ...]
    tokens: tuple[str, ...]
    cost: float

    @property
    def n_words(self) -> int:
        return len(self.tokens)


def k_shortest_paths(
    graph: WordGraph,
    k: int = 100,
    min_words: int = 8,
    max_words: int = 26,
) -> list[PathCandidate]:
    """Up to `k` loopless minimum-cost START-to-END paths (Yen's algorithm)
    filtered to the word-length window.  Returns [] when nothing qualifies."""
    best = _dijkstra(graph, START, frozenset(), frozenset())
    if best is None:
        return []
    accepted: list[tuple[float, list[int]]] = [best]
    candidates: list[tuple[float, tuple[int, ...]]] = []
    seen: set[tuple[int, ...]] = {tuple(best[1])}
    while len(accepted) < k:
        _, last_path = accepted[-1]
        for i in range(len(last_path) - 1):
            spur = last_path[i]
            root = last_path[: i + 1]
            root_cost = _path_cost(graph, root)
            banned_edges = set()
            for _, path in accepted:
                if path[: i + 1] == root and len(path) > i + 1:
                    banned_edges.add((path[i], path[i + 1]))
            banned_nodes = frozenset(root[:-1])
            spur_result = _dijkstra(graph, spur, banned_nodes, frozenset(banned_edges))
            if spur_result is None:
                continue
            spur_cost, spur_path = spur_result
            total = tuple(root[:-1] + spur_path)
            if total in seen:
                continue
            seen.add(total)
            heapq.heappush(candidates, (root_cost + spur_cost, total))
        if not candidates:
            break
        cost, path = heapq.heappop(candidates)
        accepted.append((cost, list(path)))

    out = []
    for cost, path in accepted:
        tokens = tuple(graph.path_tokens(path))
        if min_words <= len(tokens) <= max_words:
            out.append(PathCandidate(nodes=tuple(path), tokens=tokens, cost=cost))
    return out


def _path_cost(graph: WordGraph, path: Sequence[int]) -> float:
    return sum(graph.successors[u][v] for u, v in zip(path, path[1:]))


def score_path(
    tokens: Sequence[str],
    path_cost: float,
    keyphrases: Mapping[str, float],
) -> float:
    """Keyphrase-aware rerank score (lower is better):
    cost / (len(path) * (1 + sum of keyphrase scores over path tokens))."""
    if not tokens:
        raise ValueError("empty path")
    bonus = sum(keyphrases.get(tok, 0.0) for tok in tokens)
    return path_cost / (len(tokens) * (1.0 + bonus))


def detokenize(tokens: Sequence[str]) -> str:
    """Join tokens with spaces, attach punctuation to the preceding token,
    and capitalize the first character."""
    if not tokens:
        return ""
    parts = [tokens[0]]
    for tok in tokens[1:]:
        if is_punctuation(tok):
            parts[-1] = parts[-1] + tok
        else:
            parts.append(tok)
    text = " ".join(parts)
    return text[0].upper() + text[1:] if text else text


@dataclass(frozen=True)
class CompressionResult:
    """One summary sentence generated from a cluster."""

    cluster_id: int
    text: str
    tokens: tuple[str, ...]
    score: float
    fallback_used: bool
    order_key: int
    truncated: bool = False

    @property
    def n_words(self) -> int:
        return len(self.tokens)


def _fallback_sentence(
    sentences: Sequence[SentenceRecord],
    scores: Mapping[int, float] | None,
    max_words: int,
    cluster_id: int,
    order_key: int,
) -> CompressionResult:
    """The member sentence with the highest rank score (lowest index on
    ties, or simply the first member when no scores are available)."""
    if scores:
        best = max(sentences, key=lambda s: (scores.get(s.index, 0.0), -s.index))
        rank_score = scores.get(best.index, 0.0)
    else:
        best = sentences[0]
        rank_score = 0.0
    truncated = best.word_count > max_words
    tokens = tuple(best.tokens[:max_words])
    text = best.text if not truncated else detokenize(tokens)
    return CompressionResult(
        cluster_id=cluster_id,
        text=text,
        tokens=tokens,
        score=rank_score,
        fallback_used=True,
        order_key=order_key,
        truncated=truncated,
    )


def compress_cluster(
    sentences: Sequence[SentenceRecord],
    cluster_id: int = 0,
    min_words: int = 8,
    max_words: int = 26,
    k_paths: int = 100,
    scores: Mapping[int, float] | None = None,
) -> CompressionResult:
    """Fuse a sentence cluster into one sentence.

    Singletons are returned verbatim (truncated to `max_words`).  Otherwise
    the best-scoring word-graph path in bounds wins; ties break on the token
    sequence so reruns and oracles agree.  When no path survives the length
    filter the highest-ranked member sentence is used instead.
    """
    if not sentences:
        raise ValueError("empty cluster")
    order_key = min(s.index for s in sentences)
    if len(sentences) == 1:
        return _fallback_sentence(sentences, scores, max_words, cluster_id, order_key)
    graph = build_word_graph(sentences)
    keyphrases = extract_keyphrases(sentences)
    paths = k_shortest_paths(graph, k=k_paths, min_words=min_words, max_words=max_words)
    if not paths:
        return _fallback_sentence(sentences, scores, max_words, cluster_id, order_key)
    scored = sorted(
        paths, key=lambda p: (score_path(p.tokens, p.cost, keyphrases), p.tokens)
    )
    best = scored[0]
    return CompressionResult(
        cluster_id=cluster_id,
        text=detokenize(best.tokens),
        tokens=best.tokens,
        score=score_path(best.tokens, best.cost, keyphrases),
        fallback_used=False,
        order_key=order_key,
    )


@dataclass(frozen=True)
class SummarySentence:
    """One line of the final summary with its provenance."""

    text: str
    word_count: int
    cluster_id: int | None
    source_index: int | None
    fallback_used: bool
    truncated: bool
    score: float

    def as_dict(self) -> dict:
        return {
            "text": self.text,
            "word_count": self.word_count,
            "cluster": self.cluster_id,
            "source_index": self.source_index,
            "fallback": self.fallback_used,
            "truncated": self.truncated,
            "score": self.score,
        }


@dataclass(frozen=True)
class SummaryResult:
    """Ordered summary sentences and the total word count."""

    sentences: tuple[SummarySentence, ...]
    total_words: int
    cap_words: int

    def __post_init__(self) -> None:
        if not self.sentences:
            raise ValueError("a summary needs at least one sentence")
        if self.total_words > self.cap_words:
            raise ValueError("summary exceeds the word cap")

    def to_text(self) -> str:
        return "\n".join(s.text for s in self.sentences) + "\n"

    def as_report(self) -> dict:
        return {
            "sentences": [s.as_dict() for s in self.sentences],
            "total_words": self.total_words,
            "cap_words": self.cap_words,
        }


def assemble_summary(
    results: Sequence[CompressionResult],
    scores: Mapping[int, float] | None = None,
    cap_words: int = 600,
) -> SummaryResult:
    """Order cluster sentences by their smallest source index and append
    greedily until the next one would exceed the cap.  The first sentence is
    always included, truncated to the cap if it alone is too long."""
    if not results:
        raise ValueError("nothing to assemble")
    ordered = sorted(results, key=lambda r: r.order_key)
    picked: list[SummarySentence] = []
    total = 0
    for res in ordered:
        tokens = res.tokens
        truncated = res.truncated
        if not picked and len(tokens) > cap_words:
            tokens = tokens[:cap_words]
            truncated = True
        elif picked and total + len(tokens) > cap_words:
            break
        picked.append(
            SummarySentence(
                text=detokenize(tokens) if truncated else res.text,
                word_count=len(tokens),
                cluster_id=res.cluster_id,
                source_index=res.order_key,
                fallback_used=res.fallback_used,
                truncated=truncated,
                score=res.score,
            )
        )
        total += len(tokens)
    return SummaryResult(sentences=tuple(picked), total_words=total, cap_words=cap_words)
