"""Connective frequencies, the weighted cohesion sum, and the corpus score.

The corpus-level cohesion value is the log of the spread of per-document
weighted sums, taken in the base of the aggregate weighted sum:
ln(sigma) / ln(S). Causal connectives weigh 2, logical and additive 1.5,
temporal 1. Positive/negative polarity is tracked for reporting but carries
no weight of its own.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import InputError, MetricPreconditionError
from .ingest import Document, word_tokens
from .lexicons import CONNECTIVE_CLASSES, ConnectiveLexicon, longest_connective_match

CLASS_WEIGHTS = {"causal": 2.0, "logical": 1.5, "additive": 1.5, "temporal": 1.0}


@dataclass(frozen=True)
class CohesionProfile:
    """Per-1000-word connective rates by class, their weighted sum, and the
    raw per-(class, polarity) counts."""

    freq_per_1000: Mapping[str, float]
    weighted_sum: float
    polarity_counts: Mapping[tuple[str, str], int]
    word_count: int


@dataclass(frozen=True)
class CorpusCohesion:
    aggregate: CohesionProfile
    per_doc_sums: tuple[float, ...]
    std_dev: float
    cohesion_value: float


def _count_connectives(
    tokens: Sequence[str], lexicon: ConnectiveLexicon
) -> dict[tuple[str, str], int]:
    """Longest-match scan; every (class, polarity) of a match is incremented
    and the matched tokens are consumed."""
    counts: dict[tuple[str, str], int] = {}
    i = 0
    n = len(tokens)
    while i < n:
        hits, length = longest_connective_match(tokens[i : i + 3], lexicon)
        if hits:
            for key in hits:
                counts[key] = counts.get(key, 0) + 1
            i += length
        else:
            i += 1
    return counts


def connective_frequencies(
    doc: Document, lexicon: ConnectiveLexicon
) -> dict[str, float]:
    """Per-1000-word rate of each connective class over a document."""
    return dict(cohesion_profile(doc, lexicon).freq_per_1000)


def cohesion_profile(doc: Document, lexicon: ConnectiveLexicon) -> CohesionProfile:
    tokens = word_tokens(doc)
    if not tokens:
        raise MetricPreconditionError("document has no word tokens")
    return _profile_from_tokens(tokens, lexicon)


def _profile_from_tokens(
    tokens: Sequence[str], lexicon: ConnectiveLexicon
) -> CohesionProfile:
    counts = _count_connectives(tokens, lexicon)
    per_class = {cls: 0 for cls in CONNECTIVE_CLASSES}
    for (cls, _pol), count in counts.items():
        per_class[cls] += count
    n = len(tokens)
    freqs = {cls: count * 1000.0 / n for cls, count in per_class.items()}
    return CohesionProfile(
        freq_per_1000=freqs,
        weighted_sum=weighted_sum(freqs),
        polarity_counts=counts,
        word_count=n,
    )


def weighted_sum(freqs: Mapping[str, float]) -> float:
    """1.5*additive + 2*causal + 1*temporal + 1.5*logical."""
    missing = [cls for cls in CONNECTIVE_CLASSES if cls not in freqs]
    if missing:
        raise InputError(f"missing connective classes: {', '.join(missing)}")
    for cls in CONNECTIVE_CLASSES:
        if freqs[cls] < 0:
            raise InputError(f"negative frequency for {cls}: {freqs[cls]}")
    return sum(CLASS_WEIGHTS[cls] * freqs[cls] for cls in CONNECTIVE_CLASSES)


def cohesion_value(weighted: float, std_dev: float) -> float:
    """ln(std_dev) / ln(weighted sum); needs a base above 1 and a positive spread."""
    if weighted <= 1.0:
        raise MetricPreconditionError(f"degenerate base: weighted sum {weighted:g} <= 1")
    if std_dev <= 0.0:
        raise MetricPreconditionError(f"degenerate spread: std dev {std_dev:g} <= 0")
    return math.log(std_dev) / math.log(weighted)


def corpus_cohesion(
    docs: Sequence[Document],
    lexicon: ConnectiveLexicon,
    population_std: bool = False,
) -> CorpusCohesion:
    """Aggregate frequencies feed the log base; per-document weighted sums
    feed the spread. The spread defaults to the sample standard deviation
    (n-1); pass ``population_std=True`` for the population form."""
    if len(docs) < 2:
        raise MetricPreconditionError("corpus cohesion needs at least two documents")
    per_doc_tokens = [word_tokens(doc) for doc in docs]
    for doc, tokens in zip(docs, per_doc_tokens):
        if not tokens:
            raise MetricPreconditionError(f"document {doc.id} has no word tokens")
    per_doc_sums = tuple(
        _profile_from_tokens(tokens, lexicon).weighted_sum for tokens in per_doc_tokens
    )
    combined = [t for tokens in per_doc_tokens for t in tokens]
    aggregate = _profile_from_tokens(combined, lexicon)
    spread = statistics.pstdev if population_std else statistics.stdev
    std_dev = spread(per_doc_sums)
    if std_dev <= 0.0:
        raise MetricPreconditionError("degenerate spread: per-document sums are identical")
    return CorpusCohesion(
        aggregate=aggregate,
        per_doc_sums=per_doc_sums,
        std_dev=std_dev,
        cohesion_value=cohesion_value(aggregate.weighted_sum, std_dev),
    )


def connective_correlation(a: Sequence[float], b: Sequence[float]) -> float:
    """Pearson correlation between two class-frequency vectors."""
    if len(a) != len(b):
        raise InputError(f"vector lengths differ: {len(a)} vs {len(b)}")
    if len(a) < 2:
        raise InputError("correlation needs vectors of length >= 2")
    mean_a = sum(a) / len(a)
    mean_b = sum(b) / len(b)
    da = [x - mean_a for x in a]
    db = [y - mean_b for y in b]
    ssa = sum(x * x for x in da)
    ssb = sum(y * y for y in db)
    if ssa == 0.0 or ssb == 0.0:
        raise MetricPreconditionError("zero variance: constant vector")
    r = sum(x * y for x, y in zip(da, db)) / math.sqrt(ssa * ssb)
    return max(-1.0, min(1.0, r))
