"""Link kept sentences with the four linkers, then split the graph into
clusters whose count tracks the extension ratio.

Run from the repository root:  python3 demos/03_graph_and_clustering.py
"""

from collections import Counter
from pathlib import Path

from longsumm import (
    build_sentence_graph,
    load_document,
    make_provider,
    num_clusters,
    pagerank,
    select_content,
    similarity_matrix,
    spectral_cluster,
)
from longsumm.embedding import ProviderConfig

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

doc = load_document(FIXTURES / "corpus" / "speccluster.json")
provider = make_provider(
    ProviderConfig(kind="static-word-vectors", source=str(FIXTURES / "vectors.txt"))
)
embeddings = provider.embed_sentences(doc.sentences)
scores = pagerank(similarity_matrix(embeddings)).scores
kept = select_content(scores, 0.25).kept

graph = build_sentence_graph(doc.sentences, embeddings, kept, tau=0.6)
reasons = Counter(reason for edge in graph.edges for reason in edge.reasons)
print(f"{len(graph.nodes)} nodes, {len(graph.edges)} edges; reasons: {dict(reasons)}")
print("\nedge dump (i j weight reasons):")
print(graph.dump())

# The cluster budget is extension_ratio * kept count, round half up.
print(f"\ntarget clusters for {len(kept)} kept at ratio 0.3:",
      num_clusters(len(kept), 0.3))

clusters = spectral_cluster(graph, extended_ratio=0.3, seed=13)
print(f"spectral clustering produced k={clusters.k}:")
for cid, members in enumerate(clusters.clusters()):
    print(f"  cluster {cid}: sentences {members}")
