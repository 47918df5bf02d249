"""Summary evaluation: ROUGE-1/2/L, embedding BERTScore, and corpus reports.

ROUGE uses the package tokenizer with no stemming or stopword removal;
ROUGE-L runs on the full flattened token sequences.  BERTScore greedily
matches token vectors by cosine, clamping negatives to zero.  Corpus reports
carry per-document scores, arithmetic means, and an F1 histogram with a
fixed 0.005 bin width.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .ingest import tokenize

TokenEmbedder = Callable[[str], tuple[list[str], np.ndarray, bool]]

HISTOGRAM_BIN_WIDTH = 0.005


@dataclass(frozen=True)
class MetricScore:
    """Precision / recall / F1 triple in [0, 1]."""

    precision: float
    recall: float
    f1: float

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> "MetricScore":
        total = precision + recall
        f1 = 2.0 * precision * recall / total if total > 0 else 0.0
        return cls(precision=precision, recall=recall, f1=f1)

    @classmethod
    def zero(cls) -> "MetricScore":
        return cls(0.0, 0.0, 0.0)

    def as_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(
    candidate: Sequence[str], reference: Sequence[str], n: int
) -> MetricScore:
    """Clipped n-gram overlap: precision over candidate n-grams, recall over
    reference n-grams."""
    if n not in (1, 2):
        raise ValueError("n must be 1 or 2")
    if len(reference) < n:
        warnings.warn(f"reference shorter than n={n}; score is zero", stacklevel=2)
        return MetricScore.zero()
    cand = _ngrams(candidate, n)
    ref = _ngrams(reference, n)
    if not cand:
        return MetricScore.zero()
    overlap = sum((cand & ref).values())
    precision = overlap / sum(cand.values())
    recall = overlap / sum(ref.values())
    return MetricScore.from_pr(precision, recall)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Longest-common-subsequence length via the standard DP recurrence."""
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                curr.append(prev[j - 1] + 1)
            else:
                curr.append(max(prev[j], curr[j - 1]))
        prev = curr
    return prev[-1]


def rouge_l(candidate: Sequence[str], reference: Sequence[str]) -> MetricScore:
    """LCS-based: P = LCS/|candidate|, R = LCS/|reference|, F harmonic."""
    if not candidate or not reference:
        return MetricScore.zero()
    lcs = lcs_length(candidate, reference)
    return MetricScore.from_pr(lcs / len(candidate), lcs / len(reference))


def bertscore(
    candidate_vectors: np.ndarray, reference_vectors: np.ndarray
) -> MetricScore:
    """Greedy token matching over cosine similarity.

    Recall averages, over reference tokens, the best match against the
    candidate side; precision is the mirror image.  Negative similarities
    are clamped to zero, and zero vectors match nothing.
    """
    cand = np.asarray(candidate_vectors, dtype=float)
    ref = np.asarray(reference_vectors, dtype=float)
    if cand.ndim != 2 or ref.ndim != 2:
        raise ValueError("token vectors must be 2-D arrays")
    if cand.shape[0] == 0 or ref.shape[0] == 0:
        return MetricScore.zero()
    if cand.shape[1] != ref.shape[1]:
        raise ValueError(
            f"dimension mismatch: {cand.shape[1]} vs {ref.shape[1]}"
        )
    cn = np.linalg.norm(cand, axis=1)
    rn = np.linalg.norm(ref, axis=1)
    cu = cand / np.where(cn > 0, cn, 1.0)[:, None]
    ru = ref / np.where(rn > 0, rn, 1.0)[:, None]
    sims = np.clip(cu @ ru.T, 0.0, 1.0)
    precision = float(sims.max(axis=1).mean())
    recall = float(sims.max(axis=0).mean())
    return MetricScore.from_pr(precision, recall)


@dataclass(frozen=True)
class Histogram:
    """Fixed-width histogram: bins = floor(range / width) + 1, so a
    degenerate range still gets one bin and the counts always sum to N."""

    bin_width: float
    start: float
    counts: tuple[int, ...]

    @classmethod
    def from_values(
        cls, values: Sequence[float], bin_width: float = HISTOGRAM_BIN_WIDTH
    ) -> "Histogram":
        if not values:
            raise ValueError("cannot histogram zero values")
        vmin = min(values)
        vmax = max(values)
        n_bins = math.floor((vmax - vmin) / bin_width) + 1
        counts = [0] * n_bins
        for v in values:
            idx = min(math.floor((v - vmin) / bin_width), n_bins - 1)
            counts[idx] += 1
        return cls(bin_width=bin_width, start=vmin, counts=tuple(counts))

    def to_csv(self) -> str:
        lines = ["bin_start,count"]
        for i, count in enumerate(self.counts):
            lines.append(f"{self.start + i * self.bin_width:.6f},{count}")
        return "\n".join(lines) + "\n"


ROUGE_METRICS = ("rouge_1", "rouge_2", "rouge_l")


@dataclass(frozen=True)
class EvalReport:
    """Per-document scores, corpus means, F1 histograms, and exclusions."""

    per_document: dict[str, dict[str, MetricScore]]
    means: dict[str, MetricScore]
    histograms: dict[str, Histogram]
    unmatched_candidates: tuple[str, ...] = ()
    unmatched_references: tuple[str, ...] = ()
    truncated_ids: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "per_document": {
                doc_id: {m: s.as_dict() for m, s in metrics.items()}
                for doc_id, metrics in self.per_document.items()
            },
            "means": {m: s.as_dict() for m, s in self.means.items()},
            "unmatched_candidates": list(self.unmatched_candidates),
            "unmatched_references": list(self.unmatched_references),
            "truncated": list(self.truncated_ids),
        }

    def format_table(self) -> str:
        """Plain-text table with F and R columns per ROUGE order."""
        metrics = [m for m in (*ROUGE_METRICS, "bertscore") if m in self.means]
        header = ["document"] + [
            f"{_short(m)}_{col}" for m in metrics for col in ("F", "R")
        ]
        rows = [header]
        for doc_id in sorted(self.per_document):
            scores = self.per_document[doc_id]
            row = [doc_id]
            for m in metrics:
                row.append(f"{scores[m].f1 * 100:.2f}")
                row.append(f"{scores[m].recall * 100:.2f}")
            rows.append(row)
        mean_row = ["MEAN"]
        for m in metrics:
            mean_row.append(f"{self.means[m].f1 * 100:.2f}")
            mean_row.append(f"{self.means[m].recall * 100:.2f}")
        rows.append(mean_row)
        widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
        lines = [
            "  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row))
            for row in rows
        ]
        if self.unmatched_candidates or self.unmatched_references:
            lines.append("")
            lines.append(
                "excluded (no counterpart): "
                + ", ".join(
                    sorted(self.unmatched_candidates + self.unmatched_references)
                )
            )
        return "\n".join(lines) + "\n"


def _short(metric: str) -> str:
    return {"rouge_1": "R1", "rouge_2": "R2", "rouge_l": "RL", "bertscore": "BS"}[
        metric
    ]


def score_pair(
    candidate_text: str,
    reference_text: str,
    token_embedder: TokenEmbedder | None = None,
) -> tuple[dict[str, MetricScore], bool]:
    """All metrics for one candidate/reference pair.  Returns the scores and
    whether the token embedder truncated either side."""
    cand_tokens = tokenize(candidate_text)
    ref_tokens = tokenize(reference_text)
    scores = {
        "rouge_1": rouge_n(cand_tokens, ref_tokens, 1),
        "rouge_2": rouge_n(cand_tokens, ref_tokens, 2),
        "rouge_l": rouge_l(cand_tokens, ref_tokens),
    }
    truncated = False
    if token_embedder is not None:
        _, cand_vecs, trunc_c = token_embedder(candidate_text)
        _, ref_vecs, trunc_r = token_embedder(reference_text)
        scores["bertscore"] = bertscore(cand_vecs, ref_vecs)
        truncated = trunc_c or trunc_r
    return scores, truncated


def evaluate_corpus(
    candidates: Mapping[str, str],
    references: Mapping[str, str],
    token_embedder: TokenEmbedder | None = None,
) -> EvalReport:
    """Score all id-matched candidate/reference pairs.

    Ids present on only one side are excluded and listed in the report.
    Corpus means are plain arithmetic means of the per-document scores.
    """
    shared = sorted(set(candidates) & set(references))
    if not shared:
        raise ValueError("no candidate/reference ids in common")
    unmatched_cands = tuple(sorted(set(candidates) - set(references)))
    unmatched_refs = tuple(sorted(set(references) - set(candidates)))

    per_document: dict[str, dict[str, MetricScore]] = {}
    truncated_ids: list[str] = []
    for doc_id in shared:
        scores, truncated = score_pair(
            candidates[doc_id], references[doc_id], token_embedder
        )
        per_document[doc_id] = scores
        if truncated:
            truncated_ids.append(doc_id)

    metric_names = list(next(iter(per_document.values())).keys())
    means = {}
    histograms = {}
    for metric in metric_names:
        precision = float(np.mean([per_document[d][metric].precision for d in shared]))
        recall = float(np.mean([per_document[d][metric].recall for d in shared]))
        f1 = float(np.mean([per_document[d][metric].f1 for d in shared]))
        means[metric] = MetricScore(precision=precision, recall=recall, f1=f1)
        histograms[metric] = Histogram.from_values(
            [per_document[d][metric].f1 for d in shared]
        )
    return EvalReport(
        per_document=per_document,
        means=means,
        histograms=histograms,
        unmatched_candidates=unmatched_cands,
        unmatched_references=unmatched_refs,
        truncated_ids=tuple(truncated_ids),
    )


GNUPLOT_TEMPLATE = """set datafile separator ','
set style fill solid 0.7
set boxwidth {width}
set xlabel 'F1'
set ylabel 'frequency'
plot '{csv}' every ::1 using 1:2 with boxes notitle
"""


def gnuplot_script(csv_name: str, bin_width: float = HISTOGRAM_BIN_WIDTH) -> str:
    """A minimal gnuplot script that renders a histogram CSV."""
    return GNUPLOT_TEMPLATE.format(csv=csv_name, width=bin_width)
