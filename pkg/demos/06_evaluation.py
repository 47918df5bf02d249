"""Score generated summaries against references: ROUGE, BERTScore over
static token vectors, per-document table, and the F1 histogram.

Run from the repository root:  python3 demos/06_evaluation.py
"""

from pathlib import Path

from longsumm import (
    PipelineConfig,
    evaluate_corpus,
    load_document,
    rouge_l,
    rouge_n,
    summarize,
    tokenize,
)
from longsumm.embedding import (
    ProviderConfig,
    StaticWordVectorProvider,
    token_embedder_from_static,
)

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

# Single-pair scoring first.
cand = tokenize("the cat sat on the mat")
ref = tokenize("the cat lay on a mat")
print("R1:", rouge_n(cand, ref, 1))
print("R2:", rouge_n(cand, ref, 2))
print("RL:", rouge_l(cand, ref))

# Corpus evaluation: summarize the bundled records, score against the
# bundled references, with BERTScore backed by the static vectors.
config = PipelineConfig(
    provider=ProviderConfig(
        kind="static-word-vectors", source=str(FIXTURES / "vectors.txt")
    )
)
candidates = {}
for path in sorted((FIXTURES / "corpus").glob("*.json")):
    doc = load_document(path)
    candidates[doc.id] = summarize(doc, config).to_text()
references = {
    path.stem: path.read_text(encoding="utf-8")
    for path in sorted((FIXTURES / "refs").glob("*.txt"))
}

embedder = token_embedder_from_static(
    StaticWordVectorProvider(FIXTURES / "vectors.txt")
)
report = evaluate_corpus(candidates, references, token_embedder=embedder)
print()
print(report.format_table())

hist = report.histograms["rouge_1"]
print(f"rouge_1 F1 histogram: {len(hist.counts)} bins of width {hist.bin_width}")
print(hist.to_csv())
