"""Parsed-paper ingestion: structured records to documents, plus corpus statistics.

A document arrives as a JSON record with a title, an optional abstract, and a
list of sections.  Section bodies are concatenated into one text, segmented
into sentences with a deterministic rule set, and tokenized.  Plain-text files
are accepted too (the whole file becomes a single section).
"""

from __future__ import annotations

import json
import re
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence


class ParseError(ValueError):
    """A record field is missing or has the wrong shape."""


class EmptyDocumentError(ValueError):
    """The record has no title and no non-empty section."""


_WS_RE = re.compile(r"\s+")

# Words (with internal hyphens/apostrophes kept), decimal numbers, or a single
# punctuation character.
_TOKEN_RE = re.compile(r"\d+(?:\.\d+)+|\w+(?:[-'’]\w+)*|[^\w\s]")

# Candidate split: sentence-final punctuation, whitespace, then an uppercase
# letter or digit.
_BOUNDARY_RE = re.compile(r"([.?!])\s+(?=[A-Z0-9])")

# Abbreviations that suppress a split after ".".
_ABBREVIATIONS = ("et al.", "e.g.", "i.e.", "fig.", "eq.")
# A single-letter initial suppresses the split only in a name context (the
# preceding word is itself capitalized, as in "Smith J. Smith" or "J. K."),
# so a sentence-final variable name like "... X." still ends the sentence.
_INITIAL_RE = re.compile(r"[A-Z][\w.'’-]*,?\s+[A-Z]\.$")

_PUNCT_RE = re.compile(r"^\W+$")


def normalize_whitespace(text: str) -> str:
    """Collapse whitespace runs to single spaces and strip the ends."""
    return _WS_RE.sub(" ", text).strip()


def tokenize(sentence: str) -> list[str]:
    """Lowercase tokens with punctuation split off; internal hyphens kept."""
    return _TOKEN_RE.findall(sentence.lower())


def tokenize_preserve_case(sentence: str) -> list[str]:
    """Same token boundaries as `tokenize` but with original casing."""
    return _TOKEN_RE.findall(sentence)


def is_punctuation(token: str) -> bool:
    return bool(_PUNCT_RE.match(token))


def _suppress_split(prefix: str) -> bool:
    """True when `prefix` (text up to and including the '.') ends in an
    abbreviation or a single-letter initial."""
    if not prefix.endswith("."):
        return False
    low = prefix.lower()
    if any(low.endswith(abbr) for abbr in _ABBREVIATIONS):
        return True
    return bool(_INITIAL_RE.search(prefix))


def segment_sentences(text: str) -> list[str]:
    """Split text into sentences.

    Splits after [.?!] followed by whitespace and an uppercase letter or
    digit; splits are suppressed after a fixed abbreviation list ("et al.",
    "e.g.", "i.e.", "Fig.", "Eq.") and after single-letter initials.  Joining
    the output with single spaces reproduces the whitespace-normalized input.
    """
    text = normalize_whitespace(text)
    if not text:
        return []
    sentences: list[str] = []
    start = 0
    for match in _BOUNDARY_RE.finditer(text):
        end = match.end(1)
        if _suppress_split(text[start:end]):
            continue
        sentences.append(text[start:end])
        start = match.end()
    if start < len(text):
        sentences.append(text[start:])
    return sentences


@dataclass(frozen=True)
class SentenceRecord:
    """One sentence of a document, with its lowercase token sequence."""

    index: int
    text: str
    tokens: tuple[str, ...]
    word_count: int

    @classmethod
    def make(cls, index: int, text: str) -> "SentenceRecord":
        tokens = tuple(tokenize(text))
        return cls(index=index, text=text, tokens=tokens, word_count=len(tokens))


@dataclass(frozen=True)
class Document:
    """A parsed paper: title, ordered sections, and segmented sentences."""

    id: str
    title: str
    abstract: str | None
    sections: tuple[tuple[str, str], ...]
    sentences: tuple[SentenceRecord, ...]

    @property
    def text(self) -> str:
        """Whitespace-normalized concatenation of all section bodies."""
        return normalize_whitespace(" ".join(body for _, body in self.sections))

    @property
    def word_count(self) -> int:
        return sum(s.word_count for s in self.sentences)


def build_document(
    doc_id: str,
    title: str,
    abstract: str | None,
    sections: Sequence[tuple[str, str]],
) -> Document:
    """Assemble a Document: prepend the abstract as a section, concatenate,
    segment, and tokenize.  Sentences that yield no tokens are dropped."""
    all_sections: list[tuple[str, str]] = []
    if abstract and abstract.strip():
        all_sections.append(("Abstract", abstract))
    else:
        abstract = None
    all_sections.extend(sections)
    text = normalize_whitespace(" ".join(body for _, body in all_sections))
    records: list[SentenceRecord] = []
    for raw in segment_sentences(text):
        rec = SentenceRecord.make(len(records), raw)
        if rec.word_count == 0:
            continue
        records.append(rec)
    return Document(
        id=doc_id,
        title=title,
        abstract=abstract,
        sections=tuple(all_sections),
        sentences=tuple(records),
    )


def parse_document(raw: dict) -> Document:
    """Parse one JSON paper record.

    Expected shape: {"id", "title", "abstractText" (optional),
    "sections": [{"heading", "text"}]}.  Raises ParseError naming the bad
    field, or EmptyDocumentError when there is neither a title nor a
    non-empty section.
    """
    if not isinstance(raw, dict):
        raise ParseError("record must be a JSON object")
    doc_id = raw.get("id", "")
    if not isinstance(doc_id, str):
        raise ParseError("id")
    title = raw.get("title", "")
    if not isinstance(title, str):
        raise ParseError("title")
    abstract = raw.get("abstractText")
    if abstract is not None and not isinstance(abstract, str):
        raise ParseError("abstractText")
    raw_sections = raw.get("sections", [])
    if not isinstance(raw_sections, list):
        raise ParseError("sections")
    sections: list[tuple[str, str]] = []
    for i, sec in enumerate(raw_sections):
        if not isinstance(sec, dict):
            raise ParseError(f"sections[{i}]")
        heading = sec.get("heading", "")
        if not isinstance(heading, str):
            raise ParseError(f"sections[{i}].heading")
        body = sec.get("text", "")
        if not isinstance(body, str):
            raise ParseError(f"sections[{i}].text")
        sections.append((heading, body))

    has_body = (abstract or "").strip() or any(body.strip() for _, body in sections)
    if not title.strip() and not has_body:
        raise EmptyDocumentError("record has no title and no non-empty section")
    return build_document(doc_id, title.strip(), abstract, sections)


def load_document(path: str | Path) -> Document:
    """Load a document from a .json record or a plain-text file.

    A plain-text file becomes a single untitled section; the file stem is
    used as the document id when the record does not carry one.
    """
    path = Path(path)
    if path.suffix.lower() == ".json":
        with path.open(encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}: invalid JSON ({exc})") from exc
        if isinstance(raw, dict) and not raw.get("id"):
            raw = dict(raw, id=path.stem)
        return parse_document(raw)
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        raise EmptyDocumentError(f"{path} is empty")
    return build_document(path.stem, "", None, [("", text)])


@dataclass(frozen=True)
class RangeSummary:
    """Min / median / max of one per-document statistic."""

    min: float
    median: float
    max: float

    @classmethod
    def of(cls, values: Sequence[float]) -> "RangeSummary":
        return cls(min=min(values), median=statistics.median(values), max=max(values))

    def as_dict(self) -> dict:
        return {"min": self.min, "median": self.median, "max": self.max}


@dataclass(frozen=True)
class GroupStats:
    """Statistics for one group of documents (papers or reference summaries)."""

    n_documents: int
    sentence_counts: tuple[int, ...]
    doc_median_sentence_words: tuple[float, ...]
    corpus_size: RangeSummary
    sentence_words_per_doc_median: RangeSummary
    sentence_words_pooled: RangeSummary

    def as_dict(self) -> dict:
        return {
            "n_documents": self.n_documents,
            "corpus_size_sentences": self.corpus_size.as_dict(),
            "sentence_length_doc_median_words": self.sentence_words_per_doc_median.as_dict(),
            "sentence_length_pooled_words": self.sentence_words_pooled.as_dict(),
        }


@dataclass(frozen=True)
class StatsReport:
    """Corpus statistics for papers and, optionally, reference summaries.

    Sentence length is reported two ways, since either aggregation is
    defensible: the range/median of per-document median lengths, and the
    range/median over all sentences pooled.
    """

    papers: GroupStats
    references: GroupStats | None = None

    def as_dict(self) -> dict:
        out = {"papers": self.papers.as_dict()}
        if self.references is not None:
            out["references"] = self.references.as_dict()
        return out

    def format_table(self) -> str:
        rows = [("papers", self.papers)]
        if self.references is not None:
            rows.append(("references", self.references))
        lines = []
        for label, grp in rows:
            lines.append(f"[{label}] documents: {grp.n_documents}")
            cs = grp.corpus_size
            lines.append(
                f"  corpus size (sentences): range [{cs.min:g}, {cs.max:g}], median {cs.median:g}"
            )
            dm = grp.sentence_words_per_doc_median
            lines.append(
                f"  sentence length, per-doc median (words): range [{dm.min:g}, {dm.max:g}], median {dm.median:g}"
            )
            pl = grp.sentence_words_pooled
            lines.append(
                f"  sentence length, pooled (words): range [{pl.min:g}, {pl.max:g}], median {pl.median:g}"
            )
        return "\n".join(lines)


def _group_stats(documents: Iterable[Document]) -> GroupStats:
    counts: list[int] = []
    doc_medians: list[float] = []
    pooled: list[int] = []
    for doc in documents:
        if not doc.sentences:
            continue
        lengths = [s.word_count for s in doc.sentences]
        counts.append(len(lengths))
        doc_medians.append(statistics.median(lengths))
        pooled.extend(lengths)
    if not counts:
        raise ValueError("no non-empty documents in corpus")
    return GroupStats(
        n_documents=len(counts),
        sentence_counts=tuple(counts),
        doc_median_sentence_words=tuple(doc_medians),
        corpus_size=RangeSummary.of(counts),
        sentence_words_per_doc_median=RangeSummary.of(doc_medians),
        sentence_words_pooled=RangeSummary.of(pooled),
    )


def corpus_stats(
    documents: Sequence[Document],
    reference_summaries: Sequence[Document] | None = None,
) -> StatsReport:
    """Range and median of per-document sentence counts and sentence lengths,
    for papers and (when given) reference summaries."""
    if not documents:
        raise ValueError("empty corpus")
    papers = _group_stats(documents)
    refs = _group_stats(reference_summaries) if reference_summaries else None
    return StatsReport(papers=papers, references=refs)
