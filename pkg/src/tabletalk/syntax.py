"""Syntactic complexity and verb-form metrics over dependency-parsed Documents.

Clause metrics read UD dependency relations; tense metrics read Penn-style
XPOS tags. Sentence-level means weight every sentence equally.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass

from .errors import InputError, MetricPreconditionError
from .ingest import PARSE_FULL, Document, Sentence

# base labels marking subordinate clauses; subtype suffixes (":relcl" etc.)
# inherit membership from their base
SUBORDINATE_BASE_LABELS = frozenset({"csubj", "ccomp", "advcl", "acl", "xcomp", "parataxis"})
RELATIVE_LABELS = frozenset({"acl:relcl", "advcl:relcl"})
NOUN_MODIFIER_BASE = "nmod"

PRESENT_TAGS = frozenset({"VB", "VBZ", "VBP"})
PAST_TAGS = frozenset({"VBD"})
PARTICIPLE_TAGS = frozenset({"VBG", "VBN"})
VERB_TAGS = PRESENT_TAGS | PAST_TAGS | PARTICIPLE_TAGS

PRONOUN_TAGS = frozenset({"PRP", "PRP$"})
FIRST_PERSON_FORMS = frozenset({"i", "me", "mine", "myself", "my"})


@dataclass(frozen=True)
class SyntaxProfile:
    mean_sentence_length: float
    subordinate_per_sentence: float
    relative_per_sentence: float
    mean_root_distance: float
    mean_graph_depth: float
    nmod_per_sentence: float


@dataclass(frozen=True)
class VerbProfile:
    present_ratio: float
    past_ratio: float
    participle_ratio: float
    first_person_ratio: float


def _require_dependencies(doc: Document) -> None:
    if doc.parse_level != PARSE_FULL:
        raise MetricPreconditionError("requires dependency parse")


def mean_sentence_length(doc: Document) -> float:
    """Mean tokens per sentence, punctuation included."""
    if not doc.sentences:
        raise MetricPreconditionError("document has no sentences")
    return doc.token_count / len(doc.sentences)


def _base_label(deprel: str) -> str:
    return deprel.split(":", 1)[0]


def clause_ratios(doc: Document) -> tuple[float, float]:
    """(subordinate clauses, relative clauses) per sentence.

    Relative-clause subtypes count in both figures: ``acl:relcl`` is an
    ``acl`` and a relative clause.
    """
    _require_dependencies(doc)
    subordinate = 0
    relative = 0
    for token in doc.tokens():
        if token.deprel is None:
            continue
        if _base_label(token.deprel) in SUBORDINATE_BASE_LABELS:
            subordinate += 1
        if token.deprel in RELATIVE_LABELS:
            relative += 1
    n = len(doc.sentences)
    return subordinate / n, relative / n


def root_distance(doc: Document) -> float:
    """Mean linear distance (in tokens) between the root and the other tokens.

    Per sentence the mean over non-root tokens of |position - root position|;
    single-token sentences contribute zero. Uses surface positions only, so
    the figure is invariant under relation relabelling.
    """
    _require_dependencies(doc)
    per_sentence = []
    for i, sentence in enumerate(doc.sentences):
        if sentence.root_index is None:
            raise MetricPreconditionError(f"sentence {i + 1} has no root")
        others = [t for t in sentence.tokens if t.index != sentence.root_index]
        if not others:
            per_sentence.append(0.0)
            continue
        total = sum(abs(t.index - sentence.root_index) for t in others)
        per_sentence.append(total / len(others))
    return sum(per_sentence) / len(per_sentence)


def _sentence_depth(sentence: Sentence) -> int:
    if sentence.root_index is None:
        raise MetricPreconditionError("sentence has no root")
    children: dict[int, list[int]] = {}
    for token in sentence.tokens:
        children.setdefault(token.head or 0, []).append(token.index)
    depth = 0
    seen = {sentence.root_index}
    queue = deque([(sentence.root_index, 0)])
    while queue:
        node, level = queue.popleft()
        depth = max(depth, level)
        for child in children.get(node, ()):
            if child in seen:
                raise InputError("dependency cycle")
            seen.add(child)
            queue.append((child, level + 1))
    if len(seen) != len(sentence.tokens):
        raise InputError("dependency cycle")
    return depth


def graph_depth(doc: Document) -> float:
    """Mean over sentences of the longest root-to-node edge path."""
    _require_dependencies(doc)
    depths = [_sentence_depth(s) for s in doc.sentences]
    return sum(depths) / len(depths)


def nmod_rate(doc: Document) -> float:
    """Noun-modifier relations (including subtypes like nmod:poss) per sentence."""
    _require_dependencies(doc)
    count = sum(
        1
        for t in doc.tokens()
        if t.deprel is not None and _base_label(t.deprel) == NOUN_MODIFIER_BASE
    )
    return count / len(doc.sentences)


def syntax_profile(doc: Document) -> SyntaxProfile:
    subordinate, relative = clause_ratios(doc)
    return SyntaxProfile(
        mean_sentence_length=mean_sentence_length(doc),
        subordinate_per_sentence=subordinate,
        relative_per_sentence=relative,
        mean_root_distance=root_distance(doc),
        mean_graph_depth=graph_depth(doc),
        nmod_per_sentence=nmod_rate(doc),
    )


def verb_profile(doc: Document) -> VerbProfile:
    """Tense/form shares of verb tokens and the first-person share of pronouns.

    Verb ratios are taken over tokens tagged VB/VBZ/VBP/VBD/VBG/VBN; the
    pronoun ratio counts first-person-singular surface forms among PRP/PRP$
    tokens. A document with pronoun-free text gets ratio 0 with a warning.
    """
    verbs = 0
    present = past = participle = 0
    pronouns = 0
    first_person = 0
    for token in doc.tokens():
        tag = token.xpos
        if tag is None:
            continue
        if tag in VERB_TAGS:
            verbs += 1
            if tag in PRESENT_TAGS:
                present += 1
            elif tag in PAST_TAGS:
                past += 1
            else:
                participle += 1
        elif tag in PRONOUN_TAGS:
            pronouns += 1
            if token.lower in FIRST_PERSON_FORMS:
                first_person += 1
    if verbs == 0:
        raise MetricPreconditionError("no verbs")
    if pronouns == 0:
        warnings.warn(f"document {doc.id}: no pronouns; first-person ratio set to 0")
        first_person_ratio = 0.0
    else:
        first_person_ratio = first_person / pronouns
    return VerbProfile(
        present_ratio=present / verbs,
        past_ratio=past / verbs,
        participle_ratio=participle / verbs,
        first_person_ratio=first_person_ratio,
    )
