"""Run the whole pipeline on a bundled record, in both modes, and show the
stage trace that the regression suite freezes.

Run from the repository root:  python3 demos/05_full_pipeline.py
"""

from pathlib import Path

from longsumm import PipelineConfig, load_document, summarize, summarize_with_trace
from longsumm.embedding import ProviderConfig

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

config = PipelineConfig(
    provider=ProviderConfig(
        kind="static-word-vectors", source=str(FIXTURES / "vectors.txt")
    )
)
doc = load_document(FIXTURES / "corpus" / "wordfuse.json")

summary, trace = summarize_with_trace(doc, config)
print(f"abstractive summary ({summary.total_words} words, "
      f"k={trace.k} clusters from {len(trace.kept)} kept sentences):\n")
print(summary.to_text())

print("stage trace:")
print("  kept:", trace.kept)
print("  edges:", len(trace.edges), "first three:", trace.edges[:3])
print("  fallbacks:", trace.fallbacks)

extractive = PipelineConfig.from_mapping(
    {**config.to_dict(), "mode": "extractive", "cap_words": 120}
)
print("\nextractive mode (120-word budget):\n")
print(summarize(doc, extractive).to_text())
