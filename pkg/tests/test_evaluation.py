import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from longsumm.evaluation import (
    EvalReport,
    Histogram,
    MetricScore,
    bertscore,
    evaluate_corpus,
    gnuplot_script,
    lcs_length,
    rouge_l,
    rouge_n,
    score_pair,
)


def brute_force_lcs(a, b):
    """Enumerate every subsequence of the shorter side and keep the longest
    one that is also a subsequence of the other side."""
    short, long_ = (a, b) if len(a) <= len(b) else (b, a)

    def is_subsequence(needle, haystack):
        it = iter(haystack)
        return all(tok in it for tok in needle)

    best = 0
    for size in range(len(short), 0, -1):
        for combo in itertools.combinations(short, size):
            if is_subsequence(combo, long_):
                return size
    return best


class TestRougeN:
    def test_identical(self):
        score = rouge_n(["a", "b", "c"], ["a", "b", "c"], 1)
        assert (score.precision, score.recall, score.f1) == (1.0, 1.0, 1.0)

    def test_hand_oracle_unigram(self):
        score = rouge_n("the cat sat".split(), "the cat".split(), 1)
        assert score.precision == pytest.approx(2 / 3)
        assert score.recall == pytest.approx(1.0)
        assert score.f1 == pytest.approx(0.8)

    def test_disjoint(self):
        score = rouge_n(["a"], ["b"], 1)
        assert score.f1 == 0.0

    def test_reference_shorter_than_n_warns(self):
        with pytest.warns(UserWarning):
            score = rouge_n(["a", "b"], ["a"], 2)
        assert score == MetricScore.zero()

    def test_clipped_counts(self):
        # "the the the" vs "the": precision clips to 1/3, recall 1/1
        score = rouge_n(["the", "the", "the"], ["the"], 1)
        assert score.precision == pytest.approx(1 / 3)
        assert score.recall == pytest.approx(1.0)

    def test_swap_swaps_precision_recall(self):
        rng = np.random.default_rng(61)
        vocab = list("abcdef")
        for _ in range(50):
            cand = [vocab[i] for i in rng.integers(0, 6, size=rng.integers(1, 9))]
            ref = [vocab[i] for i in rng.integers(0, 6, size=rng.integers(1, 9))]
            fwd = rouge_n(cand, ref, 1)
            rev = rouge_n(ref, cand, 1)
            assert fwd.precision == pytest.approx(rev.recall)
            assert fwd.recall == pytest.approx(rev.precision)

    def test_bigram_case(self):
        score = rouge_n("a b c".split(), "a b d".split(), 2)
        assert score.precision == pytest.approx(1 / 2)
        assert score.recall == pytest.approx(1 / 2)


class TestRougeL:
    def test_identical(self):
        assert rouge_l(["x", "y"], ["x", "y"]).f1 == 1.0

    def test_hand_oracle(self):
        score = rouge_l("a b c d".split(), "a c d b".split())
        assert lcs_length("a b c d".split(), "a c d b".split()) == 3
        assert score.precision == pytest.approx(0.75)
        assert score.recall == pytest.approx(0.75)
        assert score.f1 == pytest.approx(0.75)

    def test_empty_sides(self):
        assert rouge_l([], ["a"]) == MetricScore.zero()
        assert rouge_l(["a"], []) == MetricScore.zero()

    def test_disjoint(self):
        assert rouge_l(["a"], ["b"]).f1 == 0.0

    @given(
        st.lists(st.sampled_from("abc"), max_size=8),
        st.lists(st.sampled_from("abc"), max_size=8),
    )
    def test_lcs_matches_brute_force(self, a, b):
        assert lcs_length(a, b) == brute_force_lcs(a, b)


class TestBertScore:
    def test_identical_sets(self):
        vectors = np.array([[1.0, 0.0], [0.5, 0.5]])
        score = bertscore(vectors, vectors)
        assert score.f1 == pytest.approx(1.0)

    def test_orthogonal_sets(self):
        score = bertscore(np.array([[1.0, 0.0]]), np.array([[0.0, 1.0]]))
        assert score == MetricScore.zero()

    def test_hand_oracle(self):
        cand = np.array([[1.0, 0.0], [0.0, 1.0]])
        ref = np.array([[1.0, 0.0]])
        score = bertscore(cand, ref)
        assert score.recall == pytest.approx(1.0)
        assert score.precision == pytest.approx(0.5)
        assert score.f1 == pytest.approx(2 / 3)

    def test_negative_similarities_clamped(self):
        score = bertscore(np.array([[1.0, 0.0]]), np.array([[-1.0, 0.0]]))
        assert score == MetricScore.zero()

    def test_self_score_is_one_property(self):
        rng = np.random.default_rng(62)
        for _ in range(20):
            vectors = rng.normal(size=(int(rng.integers(1, 6)), 4))
            assert bertscore(vectors, vectors).f1 == pytest.approx(1.0)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            bertscore(np.ones((1, 2)), np.ones((1, 3)))


class TestMetricScore:
    def test_f1_harmonic(self):
        score = MetricScore.from_pr(0.5, 1.0)
        assert score.f1 == pytest.approx(2 / 3)

    def test_f1_zero_when_empty(self):
        assert MetricScore.from_pr(0.0, 0.0).f1 == 0.0

    def test_f1_between_p_and_r(self):
        rng = np.random.default_rng(63)
        for _ in range(100):
            p, r = rng.uniform(0.01, 1.0, size=2)
            score = MetricScore.from_pr(p, r)
            assert min(p, r) - 1e-12 <= score.f1 <= max(p, r) + 1e-12


class TestHistogram:
    def test_bin_count_rule(self):
        values = [0.80, 0.81, 0.815]
        hist = Histogram.from_values(values)
        expected_bins = math.floor((max(values) - min(values)) / 0.005) + 1
        assert len(hist.counts) == expected_bins

    def test_counts_sum_to_n(self):
        rng = np.random.default_rng(64)
        for _ in range(30):
            values = rng.uniform(0.0, 1.0, size=int(rng.integers(1, 40))).tolist()
            hist = Histogram.from_values(values)
            assert sum(hist.counts) == len(values)

    def test_degenerate_range_single_bin(self):
        hist = Histogram.from_values([0.5, 0.5, 0.5])
        assert hist.counts == (3,)

    def test_csv_shape(self):
        hist = Histogram.from_values([0.1, 0.102, 0.11])
        lines = hist.to_csv().strip().splitlines()
        assert lines[0] == "bin_start,count"
        assert len(lines) == len(hist.counts) + 1

    def test_gnuplot_script_references_csv(self):
        assert "histogram.csv" in gnuplot_script("histogram.csv")


class TestEvaluateCorpus:
    def test_identical_pair(self):
        report = evaluate_corpus({"d": "same text here"}, {"d": "same text here"})
        for metric in ("rouge_1", "rouge_2", "rouge_l"):
            assert report.means[metric].f1 == pytest.approx(1.0)

    def test_means_are_arithmetic(self):
        candidates = {
            "a": "the cat sat",
            "b": "a dog runs quickly",
            "c": "graphs rank sentences",
        }
        references = {
            "a": "the cat",
            "b": "a dog walks",
            "c": "graphs rank words",
        }
        report = evaluate_corpus(candidates, references)
        for metric in ("rouge_1", "rouge_l"):
            per_doc = [report.per_document[d][metric].f1 for d in candidates]
            assert report.means[metric].f1 == pytest.approx(float(np.mean(per_doc)))

    def test_unmatched_ids_listed_and_excluded(self):
        report = evaluate_corpus(
            {"a": "x q", "b": "y q"}, {"a": "x q", "c": "z q"}
        )
        assert report.unmatched_candidates == ("b",)
        assert report.unmatched_references == ("c",)
        assert set(report.per_document) == {"a"}

    def test_no_overlap_errors(self):
        with pytest.raises(ValueError):
            evaluate_corpus({"a": "x"}, {"b": "y"})

    def test_bertscore_via_token_embedder(self, static_provider):
        from longsumm.embedding import token_embedder_from_static

        embedder = token_embedder_from_static(static_provider)
        report = evaluate_corpus(
            {"d": "graphs cluster sentences"},
            {"d": "graphs cluster sentences"},
            token_embedder=embedder,
        )
        assert report.means["bertscore"].f1 == pytest.approx(1.0)

    def test_histogram_per_metric(self):
        report = evaluate_corpus(
            {"a": "one two", "b": "three four"},
            {"a": "one two", "b": "three five"},
        )
        assert set(report.histograms) == {"rouge_1", "rouge_2", "rouge_l"}
        for hist in report.histograms.values():
            assert sum(hist.counts) == 2

    def test_table_render(self):
        report = evaluate_corpus({"a": "x y"}, {"a": "x y"})
        table = report.format_table()
        assert "R1_F" in table and "RL_R" in table and "MEAN" in table

    def test_truncation_flag_recorded(self):
        def embedder(text):
            return text.split(), np.ones((len(text.split()), 2)), True

        report = evaluate_corpus(
            {"a": "x q"}, {"a": "x q"}, token_embedder=embedder
        )
        assert report.truncated_ids == ("a",)


def test_score_pair_returns_all_metrics():
    scores, truncated = score_pair("a b c", "a b")
    assert set(scores) == {"rouge_1", "rouge_2", "rouge_l"}
    assert truncated is False
