"""Wordlists, the concreteness table, and connective lookup.

Every lexical and cohesion metric in this package is driven by plain-text
wordlists (one entry per line, ``#`` comments, UTF-8) plus one CSV
concreteness table. The package ships editable defaults under
``tabletalk/data/``; any of them can be overridden by pointing a loader at a
directory containing files with the same names. Matching everywhere is
lowercase exact-form: no stemming, no lemmatisation.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import InputError

CATEGORIES = frozenset(
    {
        "freq-band-1",
        "freq-band-2",
        "academic",
        "deictic",
        "attributive-adjective",
        "emphatic-particle",
        "first-person-pronoun",
        "article",
    }
)

CONNECTIVE_CLASSES = ("additive", "causal", "temporal", "logical")
POLARITIES = ("positive", "negative")
MAX_CONNECTIVES_PER_LIST = 20

CONCRETENESS_MIN = 100.0
CONCRETENESS_MAX = 700.0

# Filenames a lexicon directory is expected to use. Missing files fall back
# to the packaged defaults, so partial overrides are fine.
LEXICON_FILES = {
    "band1": ("freq_band_1.txt", "freq-band-1"),
    "band2": ("freq_band_2.txt", "freq-band-2"),
    "academic": ("academic.txt", "academic"),
    "deictics": ("deictics.txt", "deictic"),
    "deictics_core": ("deictics_core.txt", "deictic"),
    "adjectives": ("attributive_adjectives.txt", "attributive-adjective"),
    "emphatics": ("emphatic_particles.txt", "emphatic-particle"),
    "first_person": ("first_person_pronouns.txt", "first-person-pronoun"),
    "articles": ("articles.txt", "article"),
}
CONCRETENESS_FILE = "concreteness.csv"


def _connective_filename(cls: str, polarity: str) -> str:
    return f"connectives_{cls}_{polarity}.txt"


@dataclass(frozen=True)
class Lexicon:
    """An immutable named set of lowercase surface forms."""

    name: str
    category: str
    entries: frozenset[str]

    def __post_init__(self) -> None:
        if self.category not in CATEGORIES:
            raise InputError(f"unknown lexicon category {self.category!r}")
        if not self.entries:
            raise InputError(f"empty lexicon: {self.name}")
        for entry in self.entries:
            if entry != entry.strip():
                raise InputError(
                    f"lexicon {self.name}: entry {entry!r} has leading/trailing whitespace"
                )
            if entry != entry.lower():
                raise InputError(f"lexicon {self.name}: entry {entry!r} is not lowercase")

    def __contains__(self, form: str) -> bool:
        return form in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def max_entry_words(self) -> int:
        return max(len(entry.split(" ")) for entry in self.entries)


@dataclass(frozen=True)
class ConcretenessTable:
    """Word -> concreteness rating, all ratings within [100, 700]."""

    values: Mapping[str, float]

    def __post_init__(self) -> None:
        for word, value in self.values.items():
            if not CONCRETENESS_MIN <= value <= CONCRETENESS_MAX:
                raise InputError(
                    f"concreteness value {value} for {word!r} outside "
                    f"[{CONCRETENESS_MIN:g}, {CONCRETENESS_MAX:g}]"
                )

    def lookup(self, word: str) -> float | None:
        return self.values.get(word.lower())

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ConnectiveLexicon:
    """Connective phrases per (class, polarity), at most 20 entries each."""

    entries: Mapping[tuple[str, str], frozenset[str]]

    def __post_init__(self) -> None:
        for key, forms in self.entries.items():
            cls, polarity = key
            if cls not in CONNECTIVE_CLASSES or polarity not in POLARITIES:
                raise InputError(f"unknown connective list {key!r}")
            if len(forms) > MAX_CONNECTIVES_PER_LIST:
                raise InputError(
                    f"connective list {cls}/{polarity} has {len(forms)} entries "
                    f"(max {MAX_CONNECTIVES_PER_LIST})"
                )
            for form in forms:
                if form != form.lower() or form != form.strip():
                    raise InputError(f"connective entry {form!r} must be trimmed lowercase")

    def lists(self) -> Iterable[tuple[tuple[str, str], frozenset[str]]]:
        return self.entries.items()

    @property
    def max_entry_words(self) -> int:
        longest = 1
        for forms in self.entries.values():
            for form in forms:
                longest = max(longest, len(form.split(" ")))
        return longest


def _parse_entry_lines(lines: Iterable[str], source: str) -> list[str]:
    """One entry per line; '#' starts a comment; duplicates are an error."""
    entries: list[str] = []
    seen: set[str] = set()
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        entry = " ".join(line.lower().split())
        if entry in seen:
            raise InputError(f"duplicate entry {entry!r} in {source}")
        seen.add(entry)
        entries.append(entry)
    if not entries:
        raise InputError(f"empty lexicon: {source}")
    return entries


def load_lexicon(path: str | Path, category: str) -> Lexicon:
    """Load and validate a one-entry-per-line wordlist."""
    path = Path(path)
    entries = _parse_entry_lines(path.read_text(encoding="utf-8").splitlines(), str(path))
    return Lexicon(name=path.stem, category=category, entries=frozenset(entries))


def lexicon_from_entries(name: str, category: str, entries: Iterable[str]) -> Lexicon:
    """Build a lexicon from in-memory entries, applying the same validation."""
    parsed = _parse_entry_lines(entries, name)
    return Lexicon(name=name, category=category, entries=frozenset(parsed))


def dump_lexicon(lexicon: Lexicon) -> str:
    """Serialise a lexicon; load(dump(x)) recovers the same entry set."""
    return "\n".join(sorted(lexicon.entries)) + "\n"


def load_concreteness(path: str | Path) -> ConcretenessTable:
    """Load a ``word,value`` CSV with ratings in [100, 700]."""
    path = Path(path)
    return _parse_concreteness(path.read_text(encoding="utf-8"), str(path))


def _parse_concreteness(text: str, source: str) -> ConcretenessTable:
    reader = csv.reader(io.StringIO(text))
    values: dict[str, float] = {}
    for row_num, row in enumerate(reader, start=1):
        if not row or (row[0].strip().startswith("#")):
            continue
        if row_num == 1 and [c.strip().lower() for c in row[:2]] == ["word", "value"]:
            continue
        if len(row) < 2:
            raise InputError(f"{source} row {row_num}: expected word,value")
        word = row[0].strip().lower()
        try:
            value = float(row[1])
        except ValueError:
            raise InputError(f"{source} row {row_num}: non-numeric value {row[1]!r}") from None
        if not CONCRETENESS_MIN <= value <= CONCRETENESS_MAX:
            raise InputError(
                f"{source} row {row_num}: value {value:g} outside "
                f"[{CONCRETENESS_MIN:g}, {CONCRETENESS_MAX:g}]"
            )
        if word in values:
            raise InputError(f"{source} row {row_num}: duplicate word {word!r}")
        values[word] = value
    return ConcretenessTable(values=values)


def load_connectives(directory: str | Path) -> ConnectiveLexicon:
    """Load the eight ``connectives_<class>_<polarity>.txt`` lists from a directory."""
    directory = Path(directory)
    entries: dict[tuple[str, str], frozenset[str]] = {}
    for cls in CONNECTIVE_CLASSES:
        for polarity in POLARITIES:
            path = directory / _connective_filename(cls, polarity)
            if not path.exists():
                raise InputError(f"missing connective list: {path}")
            lex = _parse_entry_lines(path.read_text(encoding="utf-8").splitlines(), str(path))
            entries[(cls, polarity)] = frozenset(lex)
    return ConnectiveLexicon(entries=entries)


def connectives_from_entries(
    entries: Mapping[tuple[str, str], Iterable[str]]
) -> ConnectiveLexicon:
    """Build a connective lexicon from in-memory lists (missing lists are empty)."""
    full: dict[tuple[str, str], frozenset[str]] = {}
    for cls in CONNECTIVE_CLASSES:
        for polarity in POLARITIES:
            forms = entries.get((cls, polarity), ())
            full[(cls, polarity)] = frozenset(" ".join(f.lower().split()) for f in forms)
    return ConnectiveLexicon(entries=full)


def longest_connective_match(
    window: Sequence[str], lexicon: ConnectiveLexicon
) -> tuple[set[tuple[str, str]], int]:
    """The (class, polarity) pairs of the longest connective at the window
    head, together with the matched length in tokens (0 when no match)."""
    limit = min(3, len(window))
    for n in range(limit, 0, -1):
        phrase = " ".join(window[:n])
        hits = {key for key, forms in lexicon.lists() if phrase in forms}
        if hits:
            return hits, n
    return set(), 0


def classify_connective(
    window: Sequence[str], lexicon: ConnectiveLexicon
) -> set[tuple[str, str]]:
    """Classify the connective starting at the head of ``window``.

    Returns every (class, polarity) whose entry equals the longest phrase
    (up to three tokens) found at the window head; longer matches shadow
    shorter ones, so "as a result" beats a lone "as". Empty set means the
    head is not a connective.
    """
    return longest_connective_match(window, lexicon)[0]


@dataclass(frozen=True)
class LexiconSet:
    """Everything the metrics need, bundled for one analysis run."""

    band1: Lexicon
    band2: Lexicon
    academic: Lexicon
    deictics: Lexicon
    adjectives: Lexicon
    emphatics: Lexicon
    first_person: Lexicon
    articles: Lexicon
    connectives: ConnectiveLexicon
    concreteness: ConcretenessTable


def default_data_dir() -> Path:
    """Directory holding the packaged default wordlists."""
    return Path(str(resources.files("tabletalk").joinpath("data")))


def load_lexicon_set(
    directory: str | Path | None = None, deictic_core: bool = False
) -> LexiconSet:
    """Assemble a LexiconSet from ``directory``, falling back to packaged defaults.

    ``deictic_core`` switches the deictic list to the person/space/time subset
    (``deictics_core.txt``); the full default list also carries social and
    discourse deictics.
    """
    defaults = default_data_dir()
    override = Path(directory) if directory is not None else None

    def _path(filename: str) -> Path:
        if override is not None and (override / filename).exists():
            return override / filename
        return defaults / filename

    def _load(key: str) -> Lexicon:
        filename, category = LEXICON_FILES[key]
        return load_lexicon(_path(filename), category)

    connective_dir = defaults
    if override is not None and any(
        (override / _connective_filename(cls, pol)).exists()
        for cls in CONNECTIVE_CLASSES
        for pol in POLARITIES
    ):
        connective_dir = override

    return LexiconSet(
        band1=_load("band1"),
        band2=_load("band2"),
        academic=_load("academic"),
        deictics=_load("deictics_core" if deictic_core else "deictics"),
        adjectives=_load("adjectives"),
        emphatics=_load("emphatics"),
        first_person=_load("first_person"),
        articles=_load("articles"),
        connectives=load_connectives(connective_dir),
        concreteness=load_concreteness(_path(CONCRETENESS_FILE)),
    )


def check_lexicon_dir(directory: str | Path) -> list[str]:
    """Validate every recognised list in a directory; return summary lines.

    Raises InputError on the first invalid file. Files not present are
    reported as falling back to the packaged defaults.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise InputError(f"not a directory: {directory}")
    lines: list[str] = []
    for key, (filename, category) in LEXICON_FILES.items():
        path = directory / filename
        if path.exists():
            lex = load_lexicon(path, category)
            lines.append(f"{filename}: {len(lex)} entries ({category})")
        else:
            lines.append(f"{filename}: missing (packaged default will be used)")
    for cls in CONNECTIVE_CLASSES:
        for polarity in POLARITIES:
            filename = _connective_filename(cls, polarity)
            path = directory / filename
            if path.exists():
                entries = _parse_entry_lines(
                    path.read_text(encoding="utf-8").splitlines(), str(path)
                )
                if len(entries) > MAX_CONNECTIVES_PER_LIST:
                    raise InputError(
                        f"{filename}: {len(entries)} entries (max {MAX_CONNECTIVES_PER_LIST})"
                    )
                lines.append(f"{filename}: {len(entries)} entries")
            else:
                lines.append(f"{filename}: missing (packaged default will be used)")
    concreteness_path = directory / CONCRETENESS_FILE
    if concreteness_path.exists():
        table = load_concreteness(concreteness_path)
        lines.append(f"{CONCRETENESS_FILE}: {len(table)} words")
    else:
        lines.append(f"{CONCRETENESS_FILE}: missing (packaged default will be used)")
    return lines
