import statistics

import pytest
from hypothesis import given, strategies as st

from longsumm.ingest import (
    Document,
    EmptyDocumentError,
    ParseError,
    SentenceRecord,
    build_document,
    corpus_stats,
    load_document,
    normalize_whitespace,
    parse_document,
    segment_sentences,
    tokenize,
    tokenize_preserve_case,
)


class TestParseDocument:
    def test_sections_concatenated_in_order(self):
        doc = parse_document(
            {
                "id": "t",
                "title": "T",
                "sections": [
                    {"heading": "1 Intro", "text": "A b."},
                    {"heading": "2 Method", "text": "C d."},
                ],
            }
        )
        assert doc.text == "A b. C d."
        assert [s.text for s in doc.sentences] == ["A b.", "C d."]

    def test_missing_abstract_is_fine(self):
        doc = parse_document({"title": "T", "sections": [{"text": "A b."}]})
        assert doc.abstract is None
        assert doc.sections[0][0] == ""

    def test_abstract_prepended_as_first_section(self):
        doc = parse_document(
            {
                "title": "T",
                "abstractText": "First point.",
                "sections": [{"heading": "S", "text": "Second point."}],
            }
        )
        assert doc.sections[0] == ("Abstract", "First point.")
        assert doc.sentences[0].text == "First point."

    def test_empty_document_error(self):
        with pytest.raises(EmptyDocumentError):
            parse_document(
                {"title": "", "sections": [{"heading": "S", "text": "  "}]}
            )

    def test_malformed_record_names_field(self):
        with pytest.raises(ParseError, match="sections"):
            parse_document({"title": "T", "sections": "oops"})
        with pytest.raises(ParseError, match=r"sections\[0\].text"):
            parse_document({"title": "T", "sections": [{"text": 3}]})
        with pytest.raises(ParseError, match="title"):
            parse_document({"title": 5, "sections": []})

    def test_title_only_document_allowed(self):
        doc = parse_document({"title": "Just a title", "sections": []})
        assert doc.sentences == ()

    def test_sentence_indices_contiguous(self, corpus):
        for doc in corpus.values():
            assert [s.index for s in doc.sentences] == list(range(len(doc.sentences)))

    def test_sentence_text_substring_of_body(self, corpus):
        for doc in corpus.values():
            body = doc.text
            for sent in doc.sentences:
                assert normalize_whitespace(sent.text) in body


class TestSegmentation:
    def test_two_sentences(self):
        assert segment_sentences("We propose X. It works.") == [
            "We propose X.",
            "It works.",
        ]

    def test_abbreviation_guard(self):
        assert segment_sentences("See Smith et al. (2019) for details.") == [
            "See Smith et al. (2019) for details."
        ]

    def test_et_al_before_capital(self):
        assert segment_sentences("Proposed by Smith et al. The idea is old.") == [
            "Proposed by Smith et al. The idea is old."
        ]

    def test_fig_eq_eg_ie(self):
        text = "As in Fig. 2, losses fall. Using Eq. 3 gives e.g. faster runs. Done."
        assert segment_sentences(text) == [
            "As in Fig. 2, losses fall.",
            "Using Eq. 3 gives e.g. faster runs.",
            "Done.",
        ]

    def test_name_initials_suppressed(self):
        assert segment_sentences("Written by Smith J. Smith. It holds.") == [
            "Written by Smith J. Smith.",
            "It holds.",
        ]

    def test_empty_input(self):
        assert segment_sentences("") == []
        assert segment_sentences("   \n\t ") == []

    def test_question_and_exclamation(self):
        assert segment_sentences("Why does it work? Nobody knows! We check.") == [
            "Why does it work?",
            "Nobody knows!",
            "We check.",
        ]

    def test_digit_starts_sentence(self):
        assert segment_sentences("We test twice. 42 runs follow.") == [
            "We test twice.",
            "42 runs follow.",
        ]

    @given(
        st.lists(
            st.sampled_from(
                ["We run tests.", "It works!", "Why not?", "Results are stable."]
            ),
            min_size=1,
            max_size=8,
        )
    )
    def test_round_trip(self, sentences):
        text = "  ".join(sentences)
        segments = segment_sentences(text)
        assert " ".join(segments) == normalize_whitespace(text)
        assert all(segments)


class TestTokenize:
    def test_punctuation_split(self):
        assert tokenize("The cat sat.") == ["the", "cat", "sat", "."]

    def test_internal_hyphen_kept(self):
        assert tokenize("state-of-the-art") == ["state-of-the-art"]

    def test_empty(self):
        assert tokenize("") == []

    def test_decimal_number(self):
        assert tokenize("a gain of 3.5 points") == ["a", "gain", "of", "3.5", "points"]

    def test_preserve_case(self):
        assert tokenize_preserve_case("We use BERT.") == ["We", "use", "BERT", "."]

    @given(
        st.lists(
            st.sampled_from(["alpha", "beta-set", "gamma", "42", "delta"]),
            min_size=1,
            max_size=10,
        )
    )
    def test_idempotent_on_plain_words(self, tokens):
        assert tokenize(" ".join(tokens)) == tokens

    def test_word_count_matches_tokens(self):
        rec = SentenceRecord.make(0, "The cat sat.")
        assert rec.word_count == len(rec.tokens) == 4


class TestCorpusStats:
    @staticmethod
    def _doc(doc_id, sentence_words):
        body = " ".join(
            "Go " + " ".join(f"w{k}" for k in range(n - 1)) + "." if n > 1 else "Go."
            for n in sentence_words
        )
        return build_document(doc_id, doc_id, None, [("", body)])

    def test_sentence_count_range_and_median(self):
        docs = [self._doc("a", [2] * 3), self._doc("b", [2] * 5)]
        report = corpus_stats(docs)
        assert report.papers.corpus_size.min == 3
        assert report.papers.corpus_size.max == 5
        assert report.papers.corpus_size.median == 4

    def test_median_sentence_length(self):
        # tokens per sentence are words + the final period
        docs = [self._doc("a", [2, 4, 6])]
        report = corpus_stats(docs)
        assert report.papers.sentence_words_per_doc_median.median == 5

    def test_empty_corpus_errors(self):
        with pytest.raises(ValueError):
            corpus_stats([])

    def test_references_reported_separately(self):
        report = corpus_stats([self._doc("a", [3, 3])], [self._doc("r", [2])])
        assert report.references is not None
        assert report.references.corpus_size.median == 1

    def test_adding_document_widens_or_preserves_ranges(self):
        docs = [self._doc("a", [4, 4, 4])]
        before = corpus_stats(docs).papers.corpus_size
        docs.append(self._doc("b", [4] * 10))
        after = corpus_stats(docs).papers.corpus_size
        assert after.min <= before.min
        assert after.max >= before.max

    def test_table_render(self):
        report = corpus_stats([self._doc("a", [2, 3])])
        table = report.format_table()
        assert "corpus size" in table and "sentence length" in table


class TestLoadDocument:
    def test_json_uses_stem_when_no_id(self, tmp_path):
        path = tmp_path / "mydoc.json"
        path.write_text('{"title": "T", "sections": [{"text": "A b."}]}')
        assert load_document(path).id == "mydoc"

    def test_plain_text_single_section(self, tmp_path):
        path = tmp_path / "note.txt"
        path.write_text("One sentence here. And another one.")
        doc = load_document(path)
        assert doc.id == "note"
        assert len(doc.sections) == 1
        assert len(doc.sentences) == 2

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{nope")
        with pytest.raises(ParseError):
            load_document(path)
