"""Readers that turn raw text, CoNLL-U parses, and transcripts into Documents.

All readers are pure and their outputs immutable, so parallel ingestion of
many files is safe. Stage directions and asterisked actions in transcripts
are kept as ordinary tokens; nothing is filtered at this layer.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import InputError

PARSE_PLAIN = "plain"
PARSE_POS = "pos"
PARSE_FULL = "full-dependency"

ROLE_GM = "gm"
ROLE_PLAYER = "player"
ROLE_UNKNOWN = "unknown"
ROLES = (ROLE_GM, ROLE_PLAYER, ROLE_UNKNOWN)

TRANSCRIPT_JSONL = "jsonl"
TRANSCRIPT_SPEAKER_LINES = "speaker-lines"

_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")
_SPEAKER_LINE = re.compile(r"^([A-Z][A-Z0-9 .'_-]*):\s?(.*)$")
_MWT_ID = re.compile(r"^\d+-\d+$")
_EMPTY_NODE_ID = re.compile(r"^\d+\.\d+$")


@dataclass(frozen=True)
class AnnotatedToken:
    surface: str
    lower: str
    index: int  # 1-based position in the sentence
    upos: str | None = None
    xpos: str | None = None
    head: int | None = None  # 0 = root
    deprel: str | None = None

    def __post_init__(self) -> None:
        if self.index < 1:
            raise InputError(f"token index must be >= 1, got {self.index}")
        if self.head is not None and self.head == self.index:
            raise InputError(f"token {self.index} ({self.surface!r}) is its own head")
        if self.deprel == "root" and self.head not in (0, None):
            raise InputError(
                f"token {self.index} ({self.surface!r}) labelled root but head is {self.head}"
            )


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[AnnotatedToken, ...]
    root_index: int | None = None

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Document:
    id: str
    sentences: tuple[Sentence, ...]
    parse_level: str

    def __post_init__(self) -> None:
        if self.parse_level not in (PARSE_PLAIN, PARSE_POS, PARSE_FULL):
            raise InputError(f"unknown parse level {self.parse_level!r}")
        if self.token_count == 0:
            raise InputError("empty document")
        if self.parse_level == PARSE_FULL:
            for i, sentence in enumerate(self.sentences):
                if sentence.root_index is None:
                    raise InputError(f"sentence {i + 1} has no root")

    @property
    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)

    def tokens(self) -> Iterator[AnnotatedToken]:
        for sentence in self.sentences:
            yield from sentence.tokens


@dataclass(frozen=True)
class Turn:
    turn_index: int
    speaker: str
    role: str
    content: str
    model: str | None = None
    temperature: float | None = None

    def __post_init__(self) -> None:
        if self.turn_index < 0:
            raise InputError(f"turn index must be >= 0, got {self.turn_index}")
        if self.role not in ROLES:
            raise InputError(f"unknown role {self.role!r}")
        if not self.content:
            raise InputError(f"turn {self.turn_index} has empty content")


@dataclass(frozen=True)
class Transcript:
    turns: tuple[Turn, ...]

    def __post_init__(self) -> None:
        for expected, turn in enumerate(self.turns):
            if turn.turn_index != expected:
                raise InputError(
                    f"turn indices must increase from 0; expected {expected}, got {turn.turn_index}"
                )

    def __len__(self) -> int:
        return len(self.turns)


def _is_word(token: str) -> bool:
    """Word tokens are alphabetic, allowing internal apostrophes and hyphens."""
    if not token or not any(c.isalpha() for c in token):
        return False
    stripped = token.strip("'-")
    if stripped != token:
        return False
    return all(c.isalpha() or c in "'-" for c in token)


def word_tokens(doc: Document) -> list[str]:
    """The lowercase word-token stream lexical and cohesion metrics consume.

    Punctuation tokens and anything containing a digit are dropped.
    """
    return [t.lower for t in doc.tokens() if _is_word(t.lower)]


def _decode(data: bytes | str) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


# ---------------------------------------------------------------------------
# CoNLL-U


def read_conllu(data: bytes | str, doc_id: str = "doc") -> Document:
    """Parse CoNLL-U into a full-dependency Document.

    Multiword-token ranges (ids like ``3-4``) and empty nodes (``5.1``) are
    skipped. Column-count problems, out-of-range heads, multiple or missing
    roots, and head cycles are all reported with positions.
    """
    text = _decode(data)
    sentences: list[Sentence] = []
    pending: list[AnnotatedToken] = []
    pending_start_line = 0

    def finish() -> None:
        nonlocal pending
        if pending:
            sentences.append(_finish_sentence(pending, len(sentences) + 1))
            pending = []

    for line_num, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            finish()
            continue
        if line.startswith("#"):
            continue
        columns = line.split("\t")
        if len(columns) != 10:
            raise InputError(
                f"line {line_num}: expected 10 tab-separated columns, got {len(columns)}"
            )
        token_id = columns[0]
        if _MWT_ID.match(token_id) or _EMPTY_NODE_ID.match(token_id):
            continue
        try:
            index = int(token_id)
        except ValueError:
            raise InputError(f"line {line_num}: bad token id {token_id!r}") from None
        if not pending:
            pending_start_line = line_num
        if index != len(pending) + 1:
            raise InputError(
                f"line {line_num}: expected token id {len(pending) + 1}, got {index}"
            )
        form = columns[1]
        upos = columns[3] if columns[3] != "_" else None
        xpos = columns[4] if columns[4] != "_" else None
        if columns[6] == "_":
            raise InputError(f"line {line_num}: missing head")
        try:
            head = int(columns[6])
        except ValueError:
            raise InputError(f"line {line_num}: bad head {columns[6]!r}") from None
        if head < 0:
            raise InputError(f"line {line_num}: bad head {head}")
        deprel = columns[7] if columns[7] != "_" else None
        try:
            pending.append(
                AnnotatedToken(
                    surface=form,
                    lower=form.lower(),
                    index=index,
                    upos=upos,
                    xpos=xpos,
                    head=head,
                    deprel=deprel,
                )
            )
        except InputError as err:
            raise InputError(f"line {line_num}: {err}") from None
    finish()
    if not sentences:
        raise InputError("empty document")
    return Document(id=doc_id, sentences=tuple(sentences), parse_level=PARSE_FULL)


def _finish_sentence(tokens: list[AnnotatedToken], ordinal: int) -> Sentence:
    n = len(tokens)
    roots = [t.index for t in tokens if t.head == 0]
    for t in tokens:
        if t.head is not None and t.head > n:
            raise InputError(
                f"sentence {ordinal}: head {t.head} of token {t.index} out of range (1..{n})"
            )
    if len(roots) != 1:
        raise InputError(f"sentence {ordinal}: expected exactly one root, found {len(roots)}")
    # every non-root has one parent, so any node unreachable from the root
    # sits on a head cycle
    children: dict[int, list[int]] = {}
    for t in tokens:
        children.setdefault(t.head or 0, []).append(t.index)
    seen: set[int] = set()
    stack = [roots[0]]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        stack.extend(children.get(node, ()))
    if len(seen) != n:
        raise InputError(f"sentence {ordinal}: dependency cycle")
    return Sentence(tokens=tuple(tokens), root_index=roots[0])


def write_conllu(doc: Document) -> str:
    """Serialise a full-dependency Document back to CoNLL-U."""
    if doc.parse_level != PARSE_FULL:
        raise InputError("write_conllu requires a full-dependency document")
    blocks: list[str] = []
    for sentence in doc.sentences:
        lines = []
        for t in sentence.tokens:
            lines.append(
                "\t".join(
                    [
                        str(t.index),
                        t.surface,
                        "_",
                        t.upos or "_",
                        t.xpos or "_",
                        "_",
                        str(t.head),
                        t.deprel or "_",
                        "_",
                        "_",
                    ]
                )
            )
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n\n"


# ---------------------------------------------------------------------------
# Plain text


def _tokenize_chunk(chunk: str) -> list[str]:
    """Split off leading/trailing punctuation as separate tokens."""
    leading: list[str] = []
    trailing: list[str] = []
    while chunk and not chunk[0].isalnum():
        leading.append(chunk[0])
        chunk = chunk[1:]
    while chunk and not chunk[-1].isalnum():
        trailing.append(chunk[-1])
        chunk = chunk[:-1]
    tokens = leading
    if chunk:
        tokens.append(chunk)
    tokens.extend(reversed(trailing))
    return tokens


def read_plain(text: str, doc_id: str = "doc") -> Document:
    """Tokenize raw text into a plain-level Document.

    Sentences split after ``.!?`` followed by whitespace; tokens split on
    whitespace with edge punctuation peeled off into separate tokens, so
    internal apostrophes ("don't") survive.
    """
    sentences: list[Sentence] = []
    for piece in _SENTENCE_SPLIT.split(text):
        tokens: list[str] = []
        for chunk in piece.split():
            tokens.extend(_tokenize_chunk(chunk))
        if not tokens:
            continue
        sentences.append(
            Sentence(
                tokens=tuple(
                    AnnotatedToken(surface=tok, lower=tok.lower(), index=i)
                    for i, tok in enumerate(tokens, start=1)
                )
            )
        )
    if not sentences:
        raise InputError("empty document")
    return Document(id=doc_id, sentences=tuple(sentences), parse_level=PARSE_PLAIN)


# ---------------------------------------------------------------------------
# Transcripts


def _resolve_role(
    speaker: str,
    explicit: str | None,
    gm_speakers: frozenset[str],
    player_speakers: frozenset[str],
) -> str:
    if explicit is not None:
        if explicit not in ROLES:
            raise InputError(f"unknown role {explicit!r}")
        return explicit
    key = speaker.casefold()
    if key in gm_speakers:
        return ROLE_GM
    if key in player_speakers:
        return ROLE_PLAYER
    return ROLE_UNKNOWN


def read_transcript(
    data: bytes | str,
    format: str,
    gm_speakers: Iterable[str] = (),
    player_speakers: Iterable[str] = (),
) -> Transcript:
    """Read a turn sequence from jsonl or ``SPEAKER: content`` text.

    Speaker names are matched case-insensitively against the configured GM
    and player sets; anything else resolves to the ``unknown`` role unless a
    jsonl record carries an explicit role of its own.
    """
    text = _decode(data)
    gm = frozenset(s.casefold() for s in gm_speakers)
    players = frozenset(s.casefold() for s in player_speakers)
    if format == TRANSCRIPT_JSONL:
        return _read_jsonl(text, gm, players)
    if format == TRANSCRIPT_SPEAKER_LINES:
        return _read_speaker_lines(text, gm, players)
    raise InputError(f"unknown transcript format {format!r}")


def _read_jsonl(text: str, gm: frozenset[str], players: frozenset[str]) -> Transcript:
    turns: list[Turn] = []
    for line_num, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as err:
            raise InputError(f"line {line_num}: bad json ({err.msg})") from None
        if not isinstance(record, dict):
            raise InputError(f"line {line_num}: expected an object")
        speaker = record.get("speaker")
        content = record.get("content")
        if not speaker or not isinstance(speaker, str):
            raise InputError(f"line {line_num}: missing speaker")
        if not content or not isinstance(content, str):
            raise InputError(f"line {line_num}: missing content")
        expected = len(turns)
        declared = record.get("turn", expected)
        if declared != expected:
            raise InputError(f"line {line_num}: expected turn {expected}, got {declared!r}")
        role = _resolve_role(speaker, record.get("role"), gm, players)
        temperature = record.get("temperature")
        if temperature is not None:
            temperature = float(temperature)
        turns.append(
            Turn(
                turn_index=expected,
                speaker=speaker,
                role=role,
                content=content,
                model=record.get("model"),
                temperature=temperature,
            )
        )
    return Transcript(turns=tuple(turns))


def _read_speaker_lines(
    text: str, gm: frozenset[str], players: frozenset[str]
) -> Transcript:
    # the all-caps prefix before ":" is the speaker; other lines continue
    # the previous turn
    collected: list[tuple[str, list[str]]] = []
    for line_num, line in enumerate(text.splitlines(), start=1):
        match = _SPEAKER_LINE.match(line)
        if match:
            speaker = match.group(1).strip()
            collected.append((speaker, [match.group(2)]))
            continue
        if not collected:
            if not line.strip():
                continue
            raise InputError(f"line {line_num}: content before first speaker line")
        collected[-1][1].append(line)
    turns: list[Turn] = []
    for i, (speaker, lines) in enumerate(collected):
        content = "\n".join(lines).strip()
        if not content:
            raise InputError(f"turn {i} ({speaker}): empty content")
        role = _resolve_role(speaker, None, gm, players)
        turns.append(Turn(turn_index=i, speaker=speaker, role=role, content=content))
    return Transcript(turns=tuple(turns))


def split_turns(
    transcript: Transcript, ignore_unknown: bool = False
) -> tuple[tuple[Turn, ...], tuple[Turn, ...]]:
    """Partition turns into (gm, player) sides, preserving order."""
    gm_turns: list[Turn] = []
    player_turns: list[Turn] = []
    for turn in transcript.turns:
        if turn.role == ROLE_GM:
            gm_turns.append(turn)
        elif turn.role == ROLE_PLAYER:
            player_turns.append(turn)
        elif not ignore_unknown:
            raise InputError(
                f"turn {turn.turn_index} ({turn.speaker}) has unknown role; "
                "resolve speakers or pass ignore_unknown"
            )
    return tuple(gm_turns), tuple(player_turns)


def split_roles(
    transcript: Transcript, doc_id: str = "session", ignore_unknown: bool = False
) -> tuple[Document, Document]:
    """Split a transcript into one GM-side and one player-side plain Document."""
    gm_turns, player_turns = split_turns(transcript, ignore_unknown=ignore_unknown)
    if not gm_turns or not player_turns:
        raise InputError("degenerate split: every turn is on one side")
    gm_doc = read_plain("\n".join(t.content for t in gm_turns), doc_id=f"{doc_id}-dm")
    pc_doc = read_plain("\n".join(t.content for t in player_turns), doc_id=f"{doc_id}-pc")
    return gm_doc, pc_doc
