from __future__ import annotations

from pathlib import Path

import pytest

from tabletalk.ingest import read_conllu
from tabletalk.lexicons import (
    ConcretenessTable,
    LexiconSet,
    connectives_from_entries,
    lexicon_from_entries,
)

DATA_DIR = Path(__file__).parent / "data"

_criterion_results: dict[str, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and rep.when == "call":
        num, title = marker.args
        _criterion_results[str(num)] = (title, "PASS" if rep.passed else "FAIL")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _criterion_results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criterion_results, key=lambda n: (len(n), n)):
        title, status = _criterion_results[num]
        terminalreporter.write_line(f"criterion {num} [{status}] {title}")


@pytest.fixture(scope="session")
def golden_conllu_text() -> str:
    return (DATA_DIR / "golden.conllu").read_text(encoding="utf-8")


@pytest.fixture()
def golden_doc(golden_conllu_text):
    return read_conllu(golden_conllu_text, doc_id="golden")


def make_lexicon(name, category, entries):
    return lexicon_from_entries(name, category, entries)


@pytest.fixture()
def tiny_lexicons() -> LexiconSet:
    """A fully controlled lexicon set sized for the golden fixture."""
    return LexiconSet(
        band1=make_lexicon(
            "band1", "freq-band-1", ["the", "who", "i", "we", "me", "of", "that", "are", "now", "give"]
        ),
        band2=make_lexicon("band2", "freq-band-2", ["king", "army", "enemy", "map", "gate"]),
        academic=make_lexicon("academic", "academic", ["army", "think"]),
        deictics=make_lexicon("deictics", "deictic", ["now", "here", "that"]),
        adjectives=make_lexicon("adjectives", "attributive-adjective", ["old"]),
        emphatics=make_lexicon("emphatics", "emphatic-particle", ["just", "really"]),
        first_person=make_lexicon(
            "first_person", "first-person-pronoun", ["i", "me", "mine", "myself", "my"]
        ),
        articles=make_lexicon("articles", "article", ["a", "an", "the"]),
        connectives=connectives_from_entries(
            {
                ("causal", "positive"): ["because"],
                ("additive", "positive"): ["and"],
                ("temporal", "positive"): ["then"],
                ("logical", "negative"): ["however"],
            }
        ),
        concreteness=ConcretenessTable(
            values={"wizard": 500.0, "gate": 600.0, "map": 550.0, "mountain": 610.0, "army": 450.0}
        ),
    )
