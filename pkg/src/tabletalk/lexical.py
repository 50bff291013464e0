"""Lexical feature metrics: diversity, range, concreteness, deixis, repetition.

Every function here takes the lowercase word-token stream produced by
``ingest.word_tokens`` (punctuation and numerals already excluded) and is
pure: RNG state for the diversity fit is confined to the call.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import InputError, MetricPreconditionError
from .lexicons import ConcretenessTable, Lexicon

REPETITION_WINDOWS = (2, 5, 10)
REPETITION_NGRAM_SIZES = (1, 2, 3)


@dataclass(frozen=True)
class VocdParams:
    """Sampling and fit parameters for the lexical diversity index.

    The defaults follow the standard published procedure: sample sizes 35-50,
    100 random samples per size, three independent fit runs averaged, and the
    fitted value capped at 1000.
    """

    n_min: int = 35
    n_max: int = 50
    trials_per_n: int = 100
    fit_runs: int = 3
    rng_seed: int = 42
    d_cap: float = 1000.0

    def __post_init__(self) -> None:
        if not 1 < self.n_min <= self.n_max:
            raise InputError(f"need 1 < n_min <= n_max, got {self.n_min}..{self.n_max}")
        if self.trials_per_n < 1:
            raise InputError("trials_per_n must be >= 1")
        if self.fit_runs < 1:
            raise InputError("fit_runs must be >= 1")
        if self.d_cap <= 0:
            raise InputError("d_cap must be positive")


@dataclass(frozen=True)
class LexicalProfile:
    """One document's lexical feature vector; d_value is None when the text
    is too short to sample."""

    d_value: float | None
    lr1: float
    lr2: float
    lr3: float
    concreteness: float
    deictic_article_ratio: float | None
    repetition_per_1000: float
    attributive_adj_per_1000: float
    emphatic_per_1000: float


def _ttr_model(sizes: np.ndarray, d: float) -> np.ndarray:
    return (d / sizes) * (np.sqrt(1.0 + 2.0 * sizes / d) - 1.0)


def _fit_d(sizes: np.ndarray, ttrs: np.ndarray, d_cap: float) -> float:
    def sse(d: float) -> float:
        return float(((ttrs - _ttr_model(sizes, d)) ** 2).sum())

    result = minimize_scalar(
        sse, bounds=(1e-6, 10.0 * d_cap), method="bounded", options={"xatol": 1e-8}
    )
    return float(min(max(result.x, 0.0), d_cap))


def d_value(tokens: Sequence[str], params: VocdParams = VocdParams()) -> float:
    """Lexical diversity fitted from type-token ratio curves.

    For each sample size N in [n_min, n_max] the mean TTR over
    ``trials_per_n`` random samples without replacement is computed, then D
    is least-squares fitted to TTR(N) = (D/N)(sqrt(1 + 2N/D) - 1). The fit is
    repeated ``fit_runs`` times on fresh draws and averaged. Deterministic
    for a fixed seed; result clamped to [0, d_cap].
    """
    if len(tokens) < params.n_max:
        raise MetricPreconditionError(
            f"too short for voc-D: {len(tokens)} tokens, need >= {params.n_max}"
        )
    codes_map: dict[str, int] = {}
    codes = np.array([codes_map.setdefault(t, len(codes_map)) for t in tokens])
    sizes = np.arange(params.n_min, params.n_max + 1)
    rng = np.random.default_rng(params.rng_seed)
    fits = []
    for _ in range(params.fit_runs):
        mean_ttrs = []
        for n in sizes:
            total = 0
            for _ in range(params.trials_per_n):
                sample = codes[rng.choice(len(codes), size=int(n), replace=False)]
                total += len(np.unique(sample))
            mean_ttrs.append(total / (params.trials_per_n * n))
        fits.append(_fit_d(sizes.astype(float), np.array(mean_ttrs), params.d_cap))
    return float(np.mean(fits))


def lexical_range(
    tokens: Sequence[str], band1: Lexicon, band2: Lexicon, academic: Lexicon
) -> tuple[float, float, float]:
    """Share of token occurrences falling in each wordlist.

    The second band only counts tokens absent from the first (the bands are
    read as increments); the academic list is independent and may overlap
    either band.
    """
    if not tokens:
        raise MetricPreconditionError("lexical range needs at least one token")
    in_band1 = sum(1 for t in tokens if t in band1)
    in_band2 = sum(1 for t in tokens if t not in band1 and t in band2)
    in_academic = sum(1 for t in tokens if t in academic)
    n = len(tokens)
    return in_band1 / n, in_band2 / n, in_academic / n


def concreteness_index(tokens: Sequence[str], table: ConcretenessTable) -> float:
    """Sum of ratings for every retrieved occurrence over (tokens x 100)."""
    if not tokens:
        raise MetricPreconditionError("concreteness needs at least one token")
    total = 0.0
    for token in tokens:
        value = table.lookup(token)
        if value is not None:
            total += value
    return total / (len(tokens) * 100.0)


def _scan_matches(tokens: Sequence[str], lexicon: Lexicon) -> int:
    """Longest-match count of lexicon phrases; matched tokens are consumed."""
    entries = lexicon.entries
    max_words = lexicon.max_entry_words
    count = 0
    i = 0
    n = len(tokens)
    while i < n:
        matched = 0
        for width in range(min(max_words, n - i), 0, -1):
            if " ".join(tokens[i : i + width]) in entries:
                matched = width
                break
        if matched:
            count += 1
            i += matched
        else:
            i += 1
    return count


def deictic_article_ratio(
    tokens: Sequence[str], deictics: Lexicon, articles: Lexicon
) -> float:
    """Deictic occurrences divided by article occurrences."""
    article_count = sum(1 for t in tokens if t in articles)
    if article_count == 0:
        raise MetricPreconditionError("no articles")
    return _scan_matches(tokens, deictics) / article_count


def repetition_per_1000(tokens: Sequence[str]) -> float:
    """Uni/bi/tri-grams recurring within 2, 5, and 10-token windows, per 1000.

    A recurrence inside a small window also counts for every larger window,
    so one gap-2 repeat contributes three hits.
    """
    if not tokens:
        raise MetricPreconditionError("repetition rate needs at least one token")
    hits = 0
    for n in REPETITION_NGRAM_SIZES:
        last_seen: dict[tuple[str, ...], int] = {}
        for j in range(len(tokens) - n + 1):
            gram = tuple(tokens[j : j + n])
            previous = last_seen.get(gram)
            if previous is not None:
                gap = j - previous
                hits += sum(1 for w in REPETITION_WINDOWS if gap <= w)
            last_seen[gram] = j
    return hits * 1000.0 / len(tokens)


def marker_per_1000(tokens: Sequence[str], lexicon: Lexicon) -> float:
    """Lexicon matches per 1000 tokens, longest phrase first."""
    if not tokens:
        raise MetricPreconditionError("marker rate needs at least one token")
    return _scan_matches(tokens, lexicon) * 1000.0 / len(tokens)
