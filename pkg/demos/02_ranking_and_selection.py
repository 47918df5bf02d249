"""Rank sentences with PageRank over cosine similarities, drop the weakest
quarter, and compare with MMR selection against the title query.

Run from the repository root:  python3 demos/02_ranking_and_selection.py
"""

from pathlib import Path

import numpy as np

from longsumm import (
    MmrConfig,
    load_document,
    make_provider,
    mmr_select,
    pagerank,
    select_content,
    similarity_matrix,
)
from longsumm.embedding import ProviderConfig

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

doc = load_document(FIXTURES / "corpus" / "graphrank.json")
provider = make_provider(
    ProviderConfig(kind="static-word-vectors", source=str(FIXTURES / "vectors.txt"))
)
embeddings = provider.embed_sentences(doc.sentences)

sims = similarity_matrix(embeddings)
print(f"similarity matrix: {sims.n}x{sims.n}, mean off-diagonal "
      f"{sims.values.sum() / (sims.n * (sims.n - 1)):.3f}")

result = pagerank(sims)
print(f"pagerank converged in {result.iterations} iterations; score sum "
      f"{result.scores.sum():.6f}")

top = np.argsort(-result.scores)[:3]
for idx in top:
    print(f"  top sentence {idx} ({result.scores[idx]:.4f}): "
          f"{doc.sentences[idx].text}")

# Cutoff ratio 0.25 removes the lowest-ranked quarter.
rank = select_content(result.scores, 0.25)
print(f"\nkept {len(rank.kept)} of {sims.n} sentences after the 0.25 cutoff")

# MMR uses the document title as the query; lambda trades relevance against
# redundancy to the already-selected set.
query = provider.embed_text(doc.title)
for lam in (0.2, 0.5, 0.8):
    order = mmr_select(
        embeddings, MmrConfig(lambda_=lam, budget_words=600, query=query)
    )
    print(f"mmr lambda={lam}: first picks {order[:5]}")
