"""End-to-end orchestration: ingest, embed, rank, link, cluster, compress.

`summarize` is a pure function of (document, config): abstractive mode runs
the full graph pipeline, extractive mode emits top-ranked sentences in
document order.  `summarize_with_trace` additionally returns the stage trace
(kept set, edges, cluster assignment, per-cluster outcomes) used by the
debugging dumps and the regression fixtures.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .compression import (
    CompressionResult,
    SummaryResult,
    SummarySentence,
    assemble_summary,
    compress_cluster,
    detokenize,
)
from .embedding import (
    EmbeddingMatrix,
    ProviderConfig,
    make_provider,
)
from .ingest import Document, SentenceRecord
from .ranking import MmrConfig, mmr_select, pagerank, select_content, similarity_matrix
from .sentgraph import build_sentence_graph
from .spectral import spectral_cluster

ENV_PREFIX = "LONGSUMM_"

STRATEGIES = ("pagerank", "mmr")
MODES = ("abstractive", "extractive")

# Extractive output aims for at least this many words when the document has
# them; the word budget range is min..cap.
MIN_SUMMARY_WORDS = 60


@dataclass(frozen=True)
class PipelineConfig:
    """All tunables of one summarization run."""

    provider: ProviderConfig
    strategy: str = "pagerank"
    mode: str = "abstractive"
    cutoff_ratio: float = 0.25
    mmr_lambda: float = 0.5
    extended_ratio: float = 0.3
    tau: float = 0.6
    linker_window: int = 3
    min_sentence_words: int = 8
    max_sentence_words: int = 26
    cap_words: int = 600
    k_paths: int = 100
    damping: float = 0.85
    pagerank_tol: float = 1e-6
    pagerank_max_iter: int = 100
    seed: int = 13

    def __post_init__(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not 0.0 <= self.cutoff_ratio < 1.0:
            raise ValueError("cutoff_ratio must lie in [0, 1)")
        if not 0.0 <= self.mmr_lambda <= 1.0:
            raise ValueError("mmr_lambda must lie in [0, 1]")
        if not 0.0 < self.extended_ratio <= 1.0:
            raise ValueError("extended_ratio must lie in (0, 1]")
        if not 0.0 < self.tau < 1.0:
            raise ValueError("tau must lie in (0, 1)")
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie in (0, 1)")
        if self.min_sentence_words < 1 or self.max_sentence_words < self.min_sentence_words:
            raise ValueError("need 1 <= min_sentence_words <= max_sentence_words")
        if self.cap_words < 1:
            raise ValueError("cap_words must be positive")

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, ProviderConfig):
                value = {"kind": value.kind, "source": value.source}
            out[f.name] = value
        return out

    @classmethod
    def from_mapping(cls, data: Mapping[str, object]) -> "PipelineConfig":
        """Build a config from a flat mapping (JSON object or key=value file).

        Accepts `lambda` as an alias for `mmr_lambda` and a provider given
        either as {"kind", "source"} or as the "kind:source" string form.
        """
        values: dict[str, object] = dict(data)
        if "lambda" in values:
            values["mmr_lambda"] = values.pop("lambda")
        raw_provider = values.pop("provider", None)
        if raw_provider is None:
            raise ValueError("config needs a provider")
        if isinstance(raw_provider, str):
            provider = ProviderConfig.parse(raw_provider)
        elif isinstance(raw_provider, Mapping):
            provider = ProviderConfig(**raw_provider)
        elif isinstance(raw_provider, ProviderConfig):
            provider = raw_provider
        else:
            raise ValueError("provider must be a mapping or kind:source string")
        known = {f.name: f.type for f in fields(cls) if f.name != "provider"}
        kwargs: dict[str, object] = {}
        for key, value in values.items():
            if key not in known:
                raise ValueError(f"unknown config key: {key}")
            kwargs[key] = value
        for key in ("cutoff_ratio", "mmr_lambda", "extended_ratio", "tau",
                    "damping", "pagerank_tol"):
            if key in kwargs:
                kwargs[key] = float(kwargs[key])  # type: ignore[arg-type]
        for key in ("linker_window", "min_sentence_words", "max_sentence_words",
                    "cap_words", "k_paths", "pagerank_max_iter", "seed"):
            if key in kwargs:
                kwargs[key] = int(kwargs[key])  # type: ignore[arg-type]
        return cls(provider=provider, **kwargs)  # type: ignore[arg-type]

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        """Load a config from JSON or from `key=value` lines (# comments)."""
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        stripped = text.lstrip()
        if path.suffix.lower() == ".json" or stripped.startswith("{"):
            return cls.from_mapping(json.loads(text))
        data: dict[str, str] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            data[key.strip()] = value.strip()
        return cls.from_mapping(data)

    def with_env_overrides(
        self, environ: Mapping[str, str] | None = None
    ) -> "PipelineConfig":
        """Apply LONGSUMM_PROVIDER_URL and LONGSUMM_SEED when set."""
        env = os.environ if environ is None else environ
        cfg = self
        url = env.get(f"{ENV_PREFIX}PROVIDER_URL")
        if url:
            cfg = replace(
                cfg, provider=ProviderConfig(kind="external-service", source=url)
            )
        seed = env.get(f"{ENV_PREFIX}SEED")
        if seed:
            cfg = replace(cfg, seed=int(seed))
        return cfg


@dataclass(frozen=True)
class StageTrace:
    """What each stage produced, for debugging and regression fixtures."""

    strategy: str
    scores: tuple[float, ...]
    kept: tuple[int, ...]
    edges: tuple[tuple[int, int, float, str], ...]
    k: int
    clusters: dict[int, int]
    fallbacks: tuple[bool, ...]
    pagerank_converged: bool = True

    def as_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "kept": list(self.kept),
            "edges": [list(e) for e in self.edges],
            "k": self.k,
            "clusters": {str(node): cid for node, cid in sorted(self.clusters.items())},
            "fallbacks": list(self.fallbacks),
        }


def _single_sentence_summary(
    sentence: SentenceRecord, config: PipelineConfig
) -> SummaryResult:
    tokens = sentence.tokens[: config.cap_words]
    truncated = len(tokens) < sentence.word_count
    text = detokenize(tokens) if truncated else sentence.text
    line = SummarySentence(
        text=text,
        word_count=len(tokens),
        cluster_id=0,
        source_index=sentence.index,
        fallback_used=True,
        truncated=truncated,
        score=1.0,
    )
    return SummaryResult(
        sentences=(line,), total_words=len(tokens), cap_words=config.cap_words
    )


def _rank_scores(
    matrix_values, config: PipelineConfig
) -> tuple[np.ndarray, bool]:
    result = pagerank(
        matrix_values,
        damping=config.damping,
        tol=config.pagerank_tol,
        max_iter=config.pagerank_max_iter,
    )
    return result.scores, result.converged


def _mmr_order(
    document: Document,
    embeddings: EmbeddingMatrix,
    provider,
    config: PipelineConfig,
) -> list[int]:
    """Full MMR ordering with the document title as the query."""
    query = provider.embed_text(document.title or document.id)
    mmr_cfg = MmrConfig(
        lambda_=config.mmr_lambda, budget_words=config.cap_words, query=query
    )
    return mmr_select(embeddings, mmr_cfg, word_counts=None)


def _extractive(
    document: Document,
    order: Sequence[int],
    scores: np.ndarray,
    config: PipelineConfig,
) -> SummaryResult:
    """Greedy fill in ranking order; each sentence is kept only if it fits
    under the cap.  If the result still misses the minimum-word floor the
    next ranked sentence is added truncated to the remaining budget."""
    sentences = document.sentences
    floor = min(MIN_SUMMARY_WORDS, document.word_count, config.cap_words)
    chosen: list[int] = []
    total = 0
    for idx in order:
        wc = sentences[idx].word_count
        if total + wc <= config.cap_words:
            chosen.append(idx)
            total += wc
    truncated_idx: tuple[int, int] | None = None
    if total < floor:
        remaining = config.cap_words - total
        for idx in order:
            if idx in chosen:
                continue
            truncated_idx = (idx, remaining)
            break
    lines = []
    members = sorted(chosen)
    if truncated_idx is not None:
        members = sorted(chosen + [truncated_idx[0]])
    for idx in members:
        sent = sentences[idx]
        if truncated_idx is not None and idx == truncated_idx[0]:
            tokens = sent.tokens[: truncated_idx[1]]
            lines.append(
                SummarySentence(
                    text=detokenize(tokens),
                    word_count=len(tokens),
                    cluster_id=None,
                    source_index=idx,
                    fallback_used=False,
                    truncated=True,
                    score=float(scores[idx]),
                )
            )
            total += len(tokens)
        else:
            lines.append(
                SummarySentence(
                    text=sent.text,
                    word_count=sent.word_count,
                    cluster_id=None,
                    source_index=idx,
                    fallback_used=False,
                    truncated=False,
                    score=float(scores[idx]),
                )
            )
    return SummaryResult(
        sentences=tuple(lines), total_words=total, cap_words=config.cap_words
    )


def run_generation_stages(
    document: Document,
    embeddings: EmbeddingMatrix,
    scores: np.ndarray,
    kept: Sequence[int],
    config: PipelineConfig,
) -> tuple[SummaryResult, dict]:
    """Everything downstream of content selection: sentence graph, spectral
    clustering, per-cluster compression, assembly, and the minimum-length
    top-up.  Identical (kept, scores, embeddings) give identical output no
    matter which selection strategy produced them."""
    sentences = document.sentences
    graph = build_sentence_graph(
        sentences, embeddings, kept, tau=config.tau, window=config.linker_window
    )
    clusters = spectral_cluster(
        graph, extended_ratio=config.extended_ratio, seed=config.seed
    )
    score_map = {i: float(scores[i]) for i in range(len(sentences))}
    results: list[CompressionResult] = []
    for cid, members in enumerate(clusters.clusters()):
        cluster_sentences = [sentences[i] for i in members]
        results.append(
            compress_cluster(
                cluster_sentences,
                cluster_id=cid,
                min_words=config.min_sentence_words,
                max_words=config.max_sentence_words,
                k_paths=config.k_paths,
                scores=score_map,
            )
        )
    summary = assemble_summary(results, scores=score_map, cap_words=config.cap_words)

    floor = min(MIN_SUMMARY_WORDS, document.word_count, config.cap_words)
    if summary.total_words < floor:
        member_lists = clusters.clusters()
        covered = {
            idx
            for line in summary.sentences
            if line.cluster_id is not None
            for idx in member_lists[line.cluster_id]
        }
        summary = _top_up(summary, document, covered, scores, config)

    stage_info = {
        "edges": tuple(
            (e.i, e.j, round(e.weight, 9), ",".join(sorted(e.reasons)))
            for e in graph.edges
        ),
        "k": clusters.k,
        "clusters": dict(clusters.assignment),
        "fallbacks": tuple(r.fallback_used for r in results),
    }
    return summary, stage_info


def _top_up(
    summary: SummaryResult,
    document: Document,
    covered: set[int],
    scores: np.ndarray,
    config: PipelineConfig,
) -> SummaryResult:
    """Pad a too-short summary with ranked sentences, merged back in document
    order.  Sentences whose cluster is already represented are used only when
    nothing else remains (tiny documents)."""
    emitted = {s.source_index for s in summary.sentences}
    floor = min(MIN_SUMMARY_WORDS, document.word_count, config.cap_words)
    extras: list[SummarySentence] = []
    total = summary.total_words
    order = sorted(
        range(len(document.sentences)), key=lambda i: (-scores[i], i)
    )
    fresh = [i for i in order if i not in covered and i not in emitted]
    reused = [i for i in order if i in covered and i not in emitted]
    for idx in fresh + reused:
        if total >= floor:
            break
        sent = document.sentences[idx]
        budget = config.cap_words - total
        if budget <= 0:
            break
        tokens = sent.tokens[:budget]
        truncated = len(tokens) < sent.word_count
        extras.append(
            SummarySentence(
                text=detokenize(tokens) if truncated else sent.text,
                word_count=len(tokens),
                cluster_id=None,
                source_index=idx,
                fallback_used=True,
                truncated=truncated,
                score=float(scores[idx]),
            )
        )
        emitted.add(idx)
        total += len(tokens)
    merged = sorted(
        list(summary.sentences) + extras,
        key=lambda s: s.source_index if s.source_index is not None else 0,
    )
    return SummaryResult(
        sentences=tuple(merged), total_words=total, cap_words=config.cap_words
    )


def summarize_with_trace(
    document: Document, config: PipelineConfig
) -> tuple[SummaryResult, StageTrace]:
    """Run the pipeline and return the summary plus its stage trace."""
    sentences = document.sentences
    if not sentences:
        raise ValueError(f"document {document.id!r} has no sentences")
    if len(sentences) == 1:
        summary = _single_sentence_summary(sentences[0], config)
        trace = StageTrace(
            strategy=config.strategy,
            scores=(1.0,),
            kept=(0,),
            edges=(),
            k=1,
            clusters={0: 0},
            fallbacks=(True,),
        )
        return summary, trace

    provider = make_provider(config.provider)
    embeddings = provider.embed_sentences(sentences)
    sims = similarity_matrix(embeddings)
    scores, converged = _rank_scores(sims, config)

    n = len(sentences)
    n_keep = n - math.floor(config.cutoff_ratio * n)
    if config.strategy == "pagerank":
        kept = select_content(scores, config.cutoff_ratio).kept
        order = sorted(range(n), key=lambda i: (-scores[i], i))
    else:
        order = _mmr_order(document, embeddings, provider, config)
        kept = tuple(sorted(order[:n_keep]))

    if config.mode == "extractive":
        summary = _extractive(document, order, scores, config)
        trace = StageTrace(
            strategy=config.strategy,
            scores=tuple(float(s) for s in scores),
            kept=tuple(s.source_index for s in summary.sentences),
            edges=(),
            k=len(summary.sentences),
            clusters={s.source_index: i for i, s in enumerate(summary.sentences)},
            fallbacks=tuple(False for _ in summary.sentences),
            pagerank_converged=converged,
        )
        return summary, trace

    summary, stage_info = run_generation_stages(
        document, embeddings, scores, kept, config
    )
    trace = StageTrace(
        strategy=config.strategy,
        scores=tuple(float(s) for s in scores),
        kept=tuple(kept),
        edges=stage_info["edges"],
        k=stage_info["k"],
        clusters=stage_info["clusters"],
        fallbacks=stage_info["fallbacks"],
        pagerank_converged=converged,
    )
    return summary, trace


def summarize(document: Document, config: PipelineConfig) -> SummaryResult:
    """Summarize one document; see `summarize_with_trace` for the debug view."""
    summary, _ = summarize_with_trace(document, config)
    return summary
