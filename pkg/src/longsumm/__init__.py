"""Unsupervised long-document summarization.

Pipeline: parse structured paper records, embed sentences, rank them with
PageRank (or MMR against the title), drop the lowest-ranked fraction, link
the survivors into a sentence graph, partition it by spectral clustering,
and compress each cluster through a word graph into one summary sentence.
Evaluation covers ROUGE-1/2/L and embedding BERTScore with corpus reports.
"""

__version__ = "0.1.0"

from .compression import (
    CompressionResult,
    SummaryResult,
    WordGraph,
    assemble_summary,
    build_word_graph,
    compress_cluster,
    detokenize,
    extract_keyphrases,
    k_shortest_paths,
    score_path,
)
from .embedding import (
    EmbeddingMatrix,
    ProviderConfig,
    cosine,
    embed_sentences,
    make_provider,
)
from .evaluation import (
    EvalReport,
    Histogram,
    MetricScore,
    bertscore,
    evaluate_corpus,
    rouge_l,
    rouge_n,
)
from .ingest import (
    Document,
    SentenceRecord,
    StatsReport,
    corpus_stats,
    load_document,
    parse_document,
    segment_sentences,
    tokenize,
)
from .pipeline import PipelineConfig, StageTrace, summarize, summarize_with_trace
from .ranking import (
    MmrConfig,
    RankResult,
    SimilarityMatrix,
    mmr_select,
    pagerank,
    select_content,
    similarity_matrix,
)
from .sentgraph import (
    SentenceGraph,
    build_sentence_graph,
    link_deverbal,
    link_discourse_marker,
    link_entity_continuation,
)
from .spectral import (
    ClusterSet,
    eig_sym,
    normalized_laplacian,
    num_clusters,
    spectral_cluster,
)
