"""Fuse a small sentence cluster through the word graph, step by step:
build the graph, extract keyphrases, enumerate candidate paths, rerank.

Run from the repository root:  python3 demos/04_word_graph_compression.py
"""

from longsumm import (
    build_word_graph,
    compress_cluster,
    extract_keyphrases,
    k_shortest_paths,
    score_path,
)
from longsumm.ingest import SentenceRecord

cluster = [
    SentenceRecord.make(0, "the ranking stage removes the weakest quarter of all sentences"),
    SentenceRecord.make(1, "the ranking stage removes noisy sentences before clustering"),
    SentenceRecord.make(2, "a ranking stage drops the weakest sentences before clustering"),
]

graph = build_word_graph(cluster)
print(f"word graph: {len(graph.tokens)} nodes "
      f"(START, END and {len(graph.tokens) - 2} token nodes)")
for sid, path in enumerate(graph.sentence_paths):
    print(f"  sentence {sid} walks {len(path)} nodes")

keyphrases = extract_keyphrases(cluster)
ranked = sorted(keyphrases.items(), key=lambda kv: -kv[1])
print("\nkeyphrases:", [(w, round(s, 3)) for w, s in ranked[:5]])

candidates = k_shortest_paths(graph, k=50, min_words=6, max_words=26)
print(f"\n{len(candidates)} candidate paths inside the length window:")
for cand in candidates[:5]:
    score = score_path(cand.tokens, cand.cost, keyphrases)
    print(f"  cost={cand.cost:.3f} score={score:.4f}: {' '.join(cand.tokens)}")

result = compress_cluster(cluster, min_words=6, max_words=26)
print(f"\nchosen ({'fallback' if result.fallback_used else 'path'}):", result.text)
