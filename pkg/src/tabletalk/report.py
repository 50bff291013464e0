"""Per-document analysis, corpus aggregation, comparison, and table rendering.

A MetricsReport is a pure function of (document, lexicons, parameters): the
diversity fit is seeded, everything else is deterministic, so re-analysing a
document reproduces the report bit for bit. Metrics whose preconditions fail
are recorded as absent values with a reason instead of failing the run.
"""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .cohesion import (
    CohesionProfile,
    cohesion_profile,
    cohesion_value,
    connective_correlation,
    weighted_sum,
)
from .errors import InputError, MetricPreconditionError
from .ingest import PARSE_FULL, Document, word_tokens
from .lexical import (
    LexicalProfile,
    VocdParams,
    concreteness_index,
    d_value,
    deictic_article_ratio,
    lexical_range,
    marker_per_1000,
    repetition_per_1000,
)
from .lexicons import CONNECTIVE_CLASSES, LexiconSet
from .syntax import SyntaxProfile, VerbProfile, syntax_profile, verb_profile

# Row order of every rendered table; values are per-document means unless
# the name says corpus. Rates are per 1000 words, ratios unscaled.
METRIC_ORDER = (
    "token_count",
    "word_count",
    "sentence_count",
    "d_value",
    "lr1",
    "lr2",
    "lr3",
    "concreteness",
    "deictic_article_ratio",
    "repetition_per_1000",
    "attributive_adj_per_1000",
    "emphatic_per_1000",
    "mean_sentence_length",
    "subordinate_per_sentence",
    "relative_per_sentence",
    "mean_root_distance",
    "mean_graph_depth",
    "nmod_per_sentence",
    "present_ratio",
    "past_ratio",
    "participle_ratio",
    "first_person_ratio",
    "additive_per_1000",
    "causal_per_1000",
    "temporal_per_1000",
    "logical_per_1000",
    "connective_weighted_sum",
)

CORPUS_ROWS = (
    "documents",
    "corpus_additive_per_1000",
    "corpus_causal_per_1000",
    "corpus_temporal_per_1000",
    "corpus_logical_per_1000",
    "corpus_weighted_sum",
    "cohesion_std_dev",
    "cohesion_value",
)


@dataclass(frozen=True)
class MetricsReport:
    doc_id: str
    token_count: int
    sentence_count: int
    word_count: int
    lexical: LexicalProfile | None
    syntax: SyntaxProfile | None
    verbs: VerbProfile | None
    cohesion: CohesionProfile | None
    skipped: Mapping[str, str] = field(default_factory=dict)

    def values(self) -> dict[str, float | None]:
        """Flat metric vector in METRIC_ORDER; absent metrics are None."""
        out: dict[str, float | None] = {name: None for name in METRIC_ORDER}
        out["token_count"] = float(self.token_count)
        out["word_count"] = float(self.word_count)
        out["sentence_count"] = float(self.sentence_count)
        if self.lexical is not None:
            out["d_value"] = self.lexical.d_value
            out["lr1"] = self.lexical.lr1
            out["lr2"] = self.lexical.lr2
            out["lr3"] = self.lexical.lr3
            out["concreteness"] = self.lexical.concreteness
            out["deictic_article_ratio"] = self.lexical.deictic_article_ratio
            out["repetition_per_1000"] = self.lexical.repetition_per_1000
            out["attributive_adj_per_1000"] = self.lexical.attributive_adj_per_1000
            out["emphatic_per_1000"] = self.lexical.emphatic_per_1000
        if self.syntax is not None:
            out["mean_sentence_length"] = self.syntax.mean_sentence_length
            out["subordinate_per_sentence"] = self.syntax.subordinate_per_sentence
            out["relative_per_sentence"] = self.syntax.relative_per_sentence
            out["mean_root_distance"] = self.syntax.mean_root_distance
            out["mean_graph_depth"] = self.syntax.mean_graph_depth
            out["nmod_per_sentence"] = self.syntax.nmod_per_sentence
        if self.verbs is not None:
            out["present_ratio"] = self.verbs.present_ratio
            out["past_ratio"] = self.verbs.past_ratio
            out["participle_ratio"] = self.verbs.participle_ratio
            out["first_person_ratio"] = self.verbs.first_person_ratio
        if self.cohesion is not None:
            for cls in CONNECTIVE_CLASSES:
                out[f"{cls}_per_1000"] = self.cohesion.freq_per_1000[cls]
            out["connective_weighted_sum"] = self.cohesion.weighted_sum
        return out


@dataclass(frozen=True)
class CorpusSummary:
    name: str
    document_count: int
    means: Mapping[str, float]
    stds: Mapping[str, float]  # only metrics with >= 2 contributing documents
    counts: Mapping[str, int]
    aggregate_freqs: Mapping[str, float] | None
    corpus_weighted_sum: float | None
    cohesion_std: float | None
    cohesion_value: float | None
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class ComparisonReport:
    summaries: tuple[CorpusSummary, ...]
    correlations: Mapping[tuple[str, str], float] | None = None


def analyze_document(
    doc: Document,
    lexicons: LexiconSet,
    vocd_params: VocdParams = VocdParams(),
) -> MetricsReport:
    """Run every applicable metric once over a document.

    Syntactic and verb metrics only apply to dependency-parsed documents;
    any metric whose precondition fails is recorded in ``skipped`` with the
    reason rather than aborting the whole report.
    """
    tokens = word_tokens(doc)
    skipped: dict[str, str] = {}

    def attempt(name, fn):
        try:
            return fn()
        except MetricPreconditionError as err:
            skipped[name] = str(err)
            return None

    lexical = None
    if tokens:
        dv = attempt("d_value", lambda: d_value(tokens, vocd_params))
        ratio = attempt(
            "deictic_article_ratio",
            lambda: deictic_article_ratio(tokens, lexicons.deictics, lexicons.articles),
        )
        lr1, lr2, lr3 = lexical_range(tokens, lexicons.band1, lexicons.band2, lexicons.academic)
        lexical = LexicalProfile(
            d_value=dv,
            lr1=lr1,
            lr2=lr2,
            lr3=lr3,
            concreteness=concreteness_index(tokens, lexicons.concreteness),
            deictic_article_ratio=ratio,
            repetition_per_1000=repetition_per_1000(tokens),
            attributive_adj_per_1000=marker_per_1000(tokens, lexicons.adjectives),
            emphatic_per_1000=marker_per_1000(tokens, lexicons.emphatics),
        )
    else:
        skipped["lexical"] = "document has no word tokens"

    syntax = None
    verbs = None
    if doc.parse_level == PARSE_FULL:
        syntax = attempt("syntax", lambda: syntax_profile(doc))
        verbs = attempt("verb_profile", lambda: verb_profile(doc))
    else:
        skipped["syntax"] = "requires dependency parse"
        skipped["verb_profile"] = "requires dependency parse"

    cohesion = attempt("cohesion", lambda: cohesion_profile(doc, lexicons.connectives))

    return MetricsReport(
        doc_id=doc.id,
        token_count=doc.token_count,
        sentence_count=len(doc.sentences),
        word_count=len(tokens),
        lexical=lexical,
        syntax=syntax,
        verbs=verbs,
        cohesion=cohesion,
        skipped=skipped,
    )


def aggregate_corpus(name: str, reports: Sequence[MetricsReport]) -> CorpusSummary:
    """Per-metric mean/std over documents plus the corpus cohesion pipeline.

    Absent per-document values are skipped metric by metric; the cohesion
    value is computed from aggregate connective rates (reconstructed exactly
    from per-document rates and word counts) and the sample std of
    per-document weighted sums.
    """
    if not reports:
        raise InputError("aggregate_corpus needs at least one report")
    vectors = [r.values() for r in reports]
    means: dict[str, float] = {}
    stds: dict[str, float] = {}
    counts: dict[str, int] = {}
    for metric in METRIC_ORDER:
        present = [v[metric] for v in vectors if v[metric] is not None]
        counts[metric] = len(present)
        if present:
            means[metric] = sum(present) / len(present)
            if len(present) >= 2:
                stds[metric] = statistics.stdev(present)

    notes: list[str] = []
    aggregate_freqs = None
    corpus_sum = None
    cohesion_std = None
    corpus_value = None
    with_cohesion = [r for r in reports if r.cohesion is not None]
    if with_cohesion:
        total_words = sum(r.cohesion.word_count for r in with_cohesion)
        aggregate_freqs = {
            cls: sum(
                r.cohesion.freq_per_1000[cls] * r.cohesion.word_count
                for r in with_cohesion
            )
            / total_words
            for cls in CONNECTIVE_CLASSES
        }
        corpus_sum = weighted_sum(aggregate_freqs)
        if len(with_cohesion) >= 2:
            per_doc_sums = [r.cohesion.weighted_sum for r in with_cohesion]
            cohesion_std = statistics.stdev(per_doc_sums)
            try:
                corpus_value = cohesion_value(corpus_sum, cohesion_std)
            except MetricPreconditionError as err:
                notes.append(f"cohesion value unavailable: {err}")
                corpus_value = None
        else:
            notes.append("cohesion value needs at least two documents")
    return CorpusSummary(
        name=name,
        document_count=len(reports),
        means=means,
        stds=stds,
        counts=counts,
        aggregate_freqs=aggregate_freqs,
        corpus_weighted_sum=corpus_sum,
        cohesion_std=cohesion_std,
        cohesion_value=corpus_value,
        notes=tuple(notes),
    )


def compare(
    summaries: Sequence[CorpusSummary], correlate: bool = False
) -> ComparisonReport:
    """Align corpora side by side; optionally add pairwise Pearson cells over
    the four aggregate connective rates."""
    if len(summaries) < 2:
        raise InputError("compare needs at least two corpora")
    names = [s.name for s in summaries]
    if len(set(names)) != len(names):
        raise InputError(f"duplicate corpus names: {names}")
    for summary in summaries:
        unknown = set(summary.means) - set(METRIC_ORDER)
        if unknown:
            raise InputError(f"schema mismatch in {summary.name}: {sorted(unknown)}")
    correlations: dict[tuple[str, str], float] | None = None
    if correlate:
        correlations = {}
        for i, left in enumerate(summaries):
            for right in summaries[i + 1 :]:
                if left.aggregate_freqs is None or right.aggregate_freqs is None:
                    continue
                a = [left.aggregate_freqs[cls] for cls in CONNECTIVE_CLASSES]
                b = [right.aggregate_freqs[cls] for cls in CONNECTIVE_CLASSES]
                correlations[(left.name, right.name)] = connective_correlation(a, b)
    return ComparisonReport(summaries=tuple(summaries), correlations=correlations)


# ---------------------------------------------------------------------------
# Rendering


def _format_cell(value: float | None) -> str:
    if value is None:
        return ""
    return f"{value:.4f}"


def comparison_rows(report: ComparisonReport) -> tuple[list[str], list[list[str]]]:
    """(header, rows) for a comparison table, 4-decimal fixed rounding.

    Row order: corpus-level rows, then METRIC_ORDER means, then pairwise
    ``pearson~X`` rows when correlations were requested.
    """
    summaries = report.summaries
    header = ["metric"] + [s.name for s in summaries]
    rows: list[list[str]] = []
    rows.append(["documents"] + [str(s.document_count) for s in summaries])
    for metric in METRIC_ORDER:
        rows.append(
            [metric] + [_format_cell(s.means.get(metric)) for s in summaries]
        )
    corpus_cells = {
        "corpus_additive_per_1000": lambda s: (s.aggregate_freqs or {}).get("additive"),
        "corpus_causal_per_1000": lambda s: (s.aggregate_freqs or {}).get("causal"),
        "corpus_temporal_per_1000": lambda s: (s.aggregate_freqs or {}).get("temporal"),
        "corpus_logical_per_1000": lambda s: (s.aggregate_freqs or {}).get("logical"),
        "corpus_weighted_sum": lambda s: s.corpus_weighted_sum,
        "cohesion_std_dev": lambda s: s.cohesion_std,
        "cohesion_value": lambda s: s.cohesion_value,
    }
    for label, getter in corpus_cells.items():
        rows.append([label] + [_format_cell(getter(s)) for s in summaries])
    if report.correlations is not None:
        lookup = dict(report.correlations)
        for target in summaries:
            cells = []
            for other in summaries:
                if other.name == target.name:
                    cells.append(_format_cell(1.0))
                    continue
                r = lookup.get((other.name, target.name))
                if r is None:
                    r = lookup.get((target.name, other.name))
                cells.append(_format_cell(r))
            rows.append([f"pearson~{target.name}"] + cells)
    return header, rows


def render_rows(header: Sequence[str], rows: Iterable[Sequence[str]], format: str) -> bytes:
    """Render a (header, rows) table as csv (RFC-4180 quoting) or markdown."""
    if format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(header)
        writer.writerows(rows)
        return buffer.getvalue().encode("utf-8")
    if format == "markdown":
        lines = ["| " + " | ".join(header) + " |"]
        lines.append("|" + "|".join([" --- "] * len(header)) + "|")
        for row in rows:
            lines.append("| " + " | ".join(row) + " |")
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise InputError(f"unknown table format {format!r}")


def render_table(report: ComparisonReport, format: str) -> bytes:
    """Serialise a comparison report with stable row/column order."""
    if not report.summaries:
        raise InputError("empty report")
    header, rows = comparison_rows(report)
    return render_rows(header, rows, format)


def parse_markdown_table(text: str) -> tuple[list[str], list[list[str]]]:
    """Parse a pipe table back to (header, rows); counterpart of render."""
    lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
    if len(lines) < 2:
        raise InputError("not a markdown table")

    def split_row(line: str) -> list[str]:
        if not (line.startswith("|") and line.endswith("|")):
            raise InputError(f"not a table row: {line!r}")
        return [cell.strip() for cell in line[1:-1].split("|")]

    header = split_row(lines[0])
    rows = [split_row(line) for line in lines[2:]]  # lines[1] is the rule
    for row in rows:
        if len(row) != len(header):
            raise InputError("ragged markdown table")
    return header, rows
