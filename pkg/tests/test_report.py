from __future__ import annotations

import math

import pytest

from tabletalk.errors import InputError
from tabletalk.ingest import read_plain
from tabletalk.lexical import VocdParams
from tabletalk.report import (
    METRIC_ORDER,
    ComparisonReport,
    CorpusSummary,
    aggregate_corpus,
    analyze_document,
    compare,
    comparison_rows,
    parse_markdown_table,
    render_rows,
    render_table,
)

# hand-computed expectations for the golden fixture with tiny_lexicons:
# 30 word tokens; band-1 hits: the x6, who, i, that, we, are, now, give, me,
# of -> 15; band-2 hits: gate, king, army, enemy, map -> 5; academic: think,
# army -> 2; concreteness: wizard 500 + gate 600 + army 450 + map 550 +
# mountain 610 = 2710; deictics: that, now -> 2 over 6 articles;
# "the" gaps 5,10,5,5,3 -> 9 repetition hits; "old" is the one adjective;
# "because" is the one connective (causal, weight 2)
GOLDEN_LR = (15 / 30, 5 / 30, 2 / 30)
GOLDEN_CONCRETENESS = 2710 / 3000
GOLDEN_DEICTIC_RATIO = 2 / 6
GOLDEN_REPETITION = 9 * 1000.0 / 30
GOLDEN_ADJ_RATE = 1000.0 / 30
GOLDEN_CAUSAL_RATE = 1000.0 / 30
GOLDEN_WEIGHTED_SUM = 2.0 * GOLDEN_CAUSAL_RATE


class TestAnalyzeDocument:
    def test_golden_full_report(self, golden_doc, tiny_lexicons):
        report = analyze_document(golden_doc, tiny_lexicons)
        assert report.token_count == 35
        assert report.sentence_count == 4
        assert report.word_count == 30

        lex = report.lexical
        assert lex.d_value is None
        assert "d_value" in report.skipped
        assert (lex.lr1, lex.lr2, lex.lr3) == pytest.approx(GOLDEN_LR, abs=1e-9)
        assert lex.concreteness == pytest.approx(GOLDEN_CONCRETENESS, abs=1e-9)
        assert lex.deictic_article_ratio == pytest.approx(GOLDEN_DEICTIC_RATIO, abs=1e-9)
        assert lex.repetition_per_1000 == pytest.approx(GOLDEN_REPETITION, abs=1e-9)
        assert lex.attributive_adj_per_1000 == pytest.approx(GOLDEN_ADJ_RATE, abs=1e-9)
        assert lex.emphatic_per_1000 == 0.0

        syn = report.syntax
        assert syn.mean_sentence_length == pytest.approx(35 / 4, abs=1e-9)
        assert syn.subordinate_per_sentence == pytest.approx(3 / 4, abs=1e-9)
        assert syn.relative_per_sentence == pytest.approx(1 / 4, abs=1e-9)
        assert syn.mean_root_distance == pytest.approx(
            (29 / 8 + 22 / 7 + 25 / 9 + 4.0) / 4, abs=1e-9
        )
        assert syn.mean_graph_depth == pytest.approx(3.0, abs=1e-9)
        assert syn.nmod_per_sentence == pytest.approx(2 / 4, abs=1e-9)

        verbs = report.verbs
        assert verbs.present_ratio == pytest.approx(3 / 8, abs=1e-9)
        assert verbs.past_ratio == pytest.approx(4 / 8, abs=1e-9)
        assert verbs.participle_ratio == pytest.approx(1 / 8, abs=1e-9)
        assert verbs.first_person_ratio == pytest.approx(2 / 3, abs=1e-9)

        cohesion = report.cohesion
        assert cohesion.freq_per_1000["causal"] == pytest.approx(GOLDEN_CAUSAL_RATE, abs=1e-9)
        assert cohesion.weighted_sum == pytest.approx(GOLDEN_WEIGHTED_SUM, abs=1e-9)

    def test_plain_document_has_no_syntax_or_verbs(self, tiny_lexicons):
        doc = read_plain("The army marched because the enemy attacked. Give me the map now.")
        report = analyze_document(doc, tiny_lexicons)
        assert report.syntax is None
        assert report.verbs is None
        assert report.skipped["syntax"] == "requires dependency parse"
        assert report.lexical is not None

    def test_short_document_skips_d_value_with_reason(self, tiny_lexicons):
        doc = read_plain("the cave is dark and full of gold")
        report = analyze_document(doc, tiny_lexicons)
        assert report.lexical.d_value is None
        assert "too short" in report.skipped["d_value"]

    def test_deterministic_given_seed(self, tiny_lexicons):
        words = " ".join(
            ["the", "old", "cave", "holds", "gold", "and", "bones"] * 20
        )
        doc = read_plain(words + ".")
        params = VocdParams(rng_seed=7)
        first = analyze_document(doc, tiny_lexicons, params)
        second = analyze_document(doc, tiny_lexicons, params)
        assert first == second

    def test_values_vector_covers_metric_order(self, golden_doc, tiny_lexicons):
        values = analyze_document(golden_doc, tiny_lexicons).values()
        assert set(values) == set(METRIC_ORDER)


class TestAggregateCorpus:
    def _reports(self, tiny_lexicons):
        docs = [
            read_plain("The army marched because the enemy attacked. " * 3, doc_id="a"),
            read_plain("Give me the map of the mountain now. " * 5 + "Because so.", doc_id="b"),
        ]
        return [analyze_document(d, tiny_lexicons) for d in docs]

    def test_mean_and_sample_std(self, tiny_lexicons):
        reports = self._reports(tiny_lexicons)
        summary = aggregate_corpus("demo", reports)
        counts = [r.values()["token_count"] for r in reports]
        expected_mean = sum(counts) / 2
        expected_std = math.sqrt(
            sum((x - expected_mean) ** 2 for x in counts) / (len(counts) - 1)
        )
        assert summary.means["token_count"] == pytest.approx(expected_mean)
        assert summary.stds["token_count"] == pytest.approx(expected_std)
        assert summary.document_count == 2

    @pytest.mark.filterwarnings("ignore::UserWarning")
    def test_sentence_lengths_four_and_six_average_to_five(self, tiny_lexicons):
        def parsed(n_tokens, doc_id):
            rows = ["1\tGo\t_\tVERB\tVB\t_\t0\troot\t_\t_"]
            rows += [
                f"{i}\tword\t_\tNOUN\tNN\t_\t1\tdep\t_\t_" for i in range(2, n_tokens + 1)
            ]
            from tabletalk.ingest import read_conllu

            return read_conllu("\n".join(rows) + "\n", doc_id=doc_id)

        reports = [
            analyze_document(parsed(4, "four"), tiny_lexicons),
            analyze_document(parsed(6, "six"), tiny_lexicons),
        ]
        summary = aggregate_corpus("demo", reports)
        assert summary.means["mean_sentence_length"] == pytest.approx(5.0)
        assert summary.stds["mean_sentence_length"] == pytest.approx(math.sqrt(2))

    def test_single_report_has_no_stds(self, tiny_lexicons):
        summary = aggregate_corpus("demo", self._reports(tiny_lexicons)[:1])
        assert summary.stds == {}
        assert summary.means["token_count"] > 0
        assert any("two documents" in note for note in summary.notes)

    def test_absent_values_are_skipped_per_metric(self, tiny_lexicons):
        reports = self._reports(tiny_lexicons)
        summary = aggregate_corpus("demo", reports)
        # both docs are too short for the diversity fit
        assert "d_value" not in summary.means
        assert summary.counts["d_value"] == 0
        assert summary.counts["mean_sentence_length"] == 0  # plain docs
        assert summary.counts["token_count"] == 2

    def test_corpus_cohesion_matches_direct_computation(self, tiny_lexicons):
        from tabletalk.cohesion import corpus_cohesion

        docs = [
            read_plain(" ".join(["because"] * 5 + ["pad"] * 995), doc_id="a"),
            read_plain(" ".join(["because"] * 6 + ["pad"] * 994), doc_id="b"),
        ]
        reports = [analyze_document(d, tiny_lexicons) for d in docs]
        summary = aggregate_corpus("demo", reports)
        direct = corpus_cohesion(docs, tiny_lexicons.connectives)
        assert summary.corpus_weighted_sum == pytest.approx(direct.aggregate.weighted_sum)
        assert summary.cohesion_std == pytest.approx(direct.std_dev)
        assert summary.cohesion_value == pytest.approx(direct.cohesion_value)

    def test_empty_input_rejected(self):
        with pytest.raises(InputError):
            aggregate_corpus("demo", [])


def summary_from_freqs(name, freqs):
    """A minimal corpus summary carrying only aggregate connective data."""
    from tabletalk.cohesion import weighted_sum

    return CorpusSummary(
        name=name,
        document_count=8,
        means={},
        stds={},
        counts={},
        aggregate_freqs=freqs,
        corpus_weighted_sum=weighted_sum(freqs),
        cohesion_std=None,
        cohesion_value=None,
    )


class TestCompare:
    FREQS_A = {"additive": 2.38, "causal": 4.66, "temporal": 3.50, "logical": 1.12}
    FREQS_B = {"additive": 2.31, "causal": 4.78, "temporal": 5.58, "logical": 0.91}

    def test_identical_corpora_correlate_at_one(self):
        report = compare(
            [summary_from_freqs("x", self.FREQS_A), summary_from_freqs("y", self.FREQS_A)],
            correlate=True,
        )
        assert report.correlations[("x", "y")] == pytest.approx(1.0)

    def test_reference_frequency_columns(self):
        report = compare(
            [summary_from_freqs("bnc", self.FREQS_A), summary_from_freqs("books", self.FREQS_B)],
            correlate=True,
        )
        assert report.summaries[0].corpus_weighted_sum == pytest.approx(18.10, abs=0.05)
        assert report.summaries[1].corpus_weighted_sum == pytest.approx(19.98, abs=0.05)
        assert report.correlations[("bnc", "books")] == pytest.approx(
            0.8877187430828399, abs=1e-9
        )

    def test_needs_two_corpora(self):
        with pytest.raises(InputError, match="at least two"):
            compare([summary_from_freqs("only", self.FREQS_A)])

    def test_schema_mismatch_detected(self):
        bad = CorpusSummary(
            name="bad", document_count=1, means={"made_up_metric": 1.0}, stds={},
            counts={}, aggregate_freqs=None, corpus_weighted_sum=None,
            cohesion_std=None, cohesion_value=None,
        )
        with pytest.raises(InputError, match="schema mismatch"):
            compare([bad, summary_from_freqs("ok", self.FREQS_A)])

    def test_permutation_equivariance(self, tiny_lexicons, golden_doc):
        report_a = analyze_document(golden_doc, tiny_lexicons)
        doc_b = read_plain("Give me the map of the mountain now. Because so. And then.")
        report_b = analyze_document(doc_b, tiny_lexicons)
        x = aggregate_corpus("x", [report_a])
        y = aggregate_corpus("y", [report_b])
        forward = compare([x, y], correlate=False)
        backward = compare([y, x], correlate=False)
        assert [s.name for s in forward.summaries] == ["x", "y"]
        assert [s.name for s in backward.summaries] == ["y", "x"]
        assert forward.summaries[0] == backward.summaries[1]


class TestRendering:
    def _report(self):
        return compare(
            [
                summary_from_freqs("bnc", TestCompare.FREQS_A),
                summary_from_freqs("books", TestCompare.FREQS_B),
            ],
            correlate=True,
        )

    def test_csv_shape(self):
        payload = render_table(self._report(), "csv").decode("utf-8")
        lines = [l for l in payload.splitlines() if l]
        assert lines[0] == "metric,bnc,books"
        assert all(line.count(",") == 2 for line in lines)

    def test_rounding_rule(self):
        header, rows = ["metric", "x"], [["v", f"{0.02655:.4f}"]]
        payload = render_rows(header, rows, "csv").decode("utf-8")
        assert "0.0266" in payload

    def test_markdown_round_trip(self):
        report = self._report()
        rendered = render_table(report, "markdown").decode("utf-8")
        header, rows = parse_markdown_table(rendered)
        direct_header, direct_rows = comparison_rows(report)
        assert header == direct_header
        assert rows == direct_rows

    def test_correlation_rows_present(self):
        rendered = render_table(self._report(), "markdown").decode("utf-8")
        header, rows = parse_markdown_table(rendered)
        labels = [row[0] for row in rows]
        assert "pearson~bnc" in labels and "pearson~books" in labels
        by_label = {row[0]: row for row in rows}
        assert by_label["pearson~bnc"][1] == "1.0000"
        assert by_label["pearson~bnc"][2] == "0.8877"

    def test_unknown_format_rejected(self):
        with pytest.raises(InputError, match="unknown table format"):
            render_table(self._report(), "html")

    def test_empty_report_rejected(self):
        with pytest.raises(InputError, match="empty report"):
            render_table(ComparisonReport(summaries=()), "csv")
