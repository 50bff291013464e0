from __future__ import annotations

from collections import Counter

import pytest

from tabletalk.errors import InputError
from tabletalk.ingest import (
    PARSE_FULL,
    PARSE_PLAIN,
    Transcript,
    Turn,
    read_conllu,
    read_plain,
    read_transcript,
    split_roles,
    split_turns,
    word_tokens,
    write_conllu,
)

MINIMAL = (
    "1\tdogs\t_\tNOUN\tNNS\t_\t2\tnsubj\t_\t_\n"
    "2\tbark\t_\tVERB\tVBP\t_\t0\troot\t_\t_\n"
    "3\tloudly\t_\tADV\tRB\t_\t2\tadvmod\t_\t_\n"
)


class TestReadConllu:
    def test_minimal_parse(self):
        doc = read_conllu(MINIMAL)
        assert doc.parse_level == PARSE_FULL
        assert len(doc.sentences) == 1
        assert doc.sentences[0].root_index == 2
        assert [t.surface for t in doc.sentences[0].tokens] == ["dogs", "bark", "loudly"]

    def test_head_out_of_range(self):
        bad = MINIMAL.replace("2\tnsubj", "9\tnsubj")
        with pytest.raises(InputError, match="head 9.*out of range"):
            read_conllu(bad)

    def test_two_sentences_split_on_blank_line(self):
        doc = read_conllu(MINIMAL + "\n" + MINIMAL)
        assert len(doc.sentences) == 2

    def test_column_count_error_names_the_line(self):
        bad = MINIMAL.replace("3\tloudly\t_\tADV\tRB\t_\t2\tadvmod\t_\t_", "3\tloudly\t_")
        with pytest.raises(InputError, match="line 3.*columns"):
            read_conllu(bad)

    def test_cycle_detected(self):
        cyclic = (
            "1\ta\t_\tX\tX\t_\t2\tdep\t_\t_\n"
            "2\tb\t_\tX\tX\t_\t3\tdep\t_\t_\n"
            "3\tc\t_\tX\tX\t_\t2\tdep\t_\t_\n"
            "4\td\t_\tX\tX\t_\t0\troot\t_\t_\n"
        )
        with pytest.raises(InputError, match="dependency cycle"):
            read_conllu(cyclic)

    def test_self_loop_rejected(self):
        bad = (
            "1\ta\t_\tX\tX\t_\t1\tdep\t_\t_\n"
            "2\tb\t_\tX\tX\t_\t0\troot\t_\t_\n"
        )
        with pytest.raises(InputError, match="own head"):
            read_conllu(bad)

    def test_exactly_one_root_enforced(self):
        no_root = MINIMAL.replace("0\troot", "1\tdep")
        with pytest.raises(InputError, match="exactly one root"):
            read_conllu(no_root)

    def test_multiword_ranges_and_empty_nodes_skipped(self):
        text = (
            "1-2\tcannot\t_\t_\t_\t_\t_\t_\t_\t_\n"
            "1\tcan\t_\tAUX\tMD\t_\t3\taux\t_\t_\n"
            "2\tnot\t_\tPART\tRB\t_\t3\tadvmod\t_\t_\n"
            "3\tgo\t_\tVERB\tVB\t_\t0\troot\t_\t_\n"
            "3.1\telided\t_\t_\t_\t_\t_\t_\t_\t_\n"
        )
        doc = read_conllu(text)
        assert [t.surface for t in doc.sentences[0].tokens] == ["can", "not", "go"]

    def test_comments_ignored(self, golden_conllu_text):
        doc = read_conllu(golden_conllu_text)
        assert len(doc.sentences) == 4
        assert doc.token_count == 35

    def test_root_label_with_nonzero_head_rejected(self):
        bad = (
            "1\ta\t_\tX\tX\t_\t2\troot\t_\t_\n"
            "2\tb\t_\tX\tX\t_\t0\troot\t_\t_\n"
        )
        with pytest.raises(InputError, match="labelled root"):
            read_conllu(bad)

    def test_empty_input(self):
        with pytest.raises(InputError, match="empty document"):
            read_conllu("")

    def test_write_read_round_trip(self, golden_doc):
        again = read_conllu(write_conllu(golden_doc), doc_id=golden_doc.id)
        assert again == golden_doc


class TestReadPlain:
    def test_sentences_and_edge_punctuation(self):
        doc = read_plain("Hello there. Go!")
        assert doc.parse_level == PARSE_PLAIN
        surfaces = [[t.surface for t in s.tokens] for s in doc.sentences]
        assert surfaces == [["Hello", "there", "."], ["Go", "!"]]

    def test_empty_text_is_an_error(self):
        with pytest.raises(InputError, match="empty document"):
            read_plain("")

    def test_internal_apostrophe_preserved(self):
        doc = read_plain("don't stop")
        assert [t.surface for t in doc.sentences[0].tokens] == ["don't", "stop"]

    def test_lowercase_forms_filled(self):
        doc = read_plain("Hello THERE.")
        assert [t.lower for t in doc.sentences[0].tokens] == ["hello", "there", "."]

    def test_quoted_token_peels_punctuation_in_order(self):
        doc = read_plain('"Go!"')
        assert [t.surface for t in doc.sentences[0].tokens] == ['"', "Go", "!", '"']

    def test_trailing_whitespace_invariance(self):
        a = read_plain("One two. Three four!")
        b = read_plain("One two. Three four!   \n\n")
        assert [len(s) for s in a.sentences] == [len(s) for s in b.sentences]
        assert a.token_count == b.token_count

    def test_word_tokens_drop_punctuation_and_numerals(self):
        doc = read_plain("Roll 2 dice, don't cheat!")
        assert word_tokens(doc) == ["roll", "dice", "don't", "cheat"]


JSONL = (
    '{"turn": 0, "speaker": "MATT", "role": "gm", "content": "Well, there are..."}\n'
    '{"turn": 1, "speaker": "LIAM", "role": "player", "content": "I\'m going..."}\n'
    '{"turn": 2, "speaker": "LAURA", "role": "player", "content": "Gross."}\n'
)


class TestReadTranscript:
    def test_speaker_lines_with_gm_set(self):
        text = "MATT: Well, there are...\nLIAM: I'm going..."
        transcript = read_transcript(
            text, "speaker-lines", gm_speakers=["MATT"], player_speakers=["LIAM"]
        )
        assert [t.role for t in transcript.turns] == ["gm", "player"]
        assert transcript.turns[0].speaker == "MATT"

    def test_jsonl_well_formed(self):
        transcript = read_transcript(JSONL, "jsonl")
        assert len(transcript) == 3
        assert transcript.turns[2].content == "Gross."

    def test_continuation_line_appends_to_previous_turn(self):
        text = "MATT: First line\nsecond line without prefix\nLIAM: Next"
        transcript = read_transcript(text, "speaker-lines")
        assert transcript.turns[0].content == "First line\nsecond line without prefix"
        assert transcript.turns[1].content == "Next"

    def test_jsonl_missing_speaker_names_line(self):
        bad = '{"content": "no speaker"}\n'
        with pytest.raises(InputError, match="line 1.*speaker"):
            read_transcript(bad, "jsonl")

    def test_jsonl_missing_content_names_line(self):
        bad = JSONL + '{"speaker": "SAM"}\n'
        with pytest.raises(InputError, match="line 4.*content"):
            read_transcript(bad, "jsonl")

    def test_unmatched_speakers_are_unknown(self):
        transcript = read_transcript("SAM: hi", "speaker-lines", gm_speakers=["MATT"])
        assert transcript.turns[0].role == "unknown"

    def test_speaker_matching_is_case_insensitive(self):
        transcript = read_transcript("MATT: hi", "speaker-lines", gm_speakers=["matt"])
        assert transcript.turns[0].role == "gm"

    def test_content_before_first_speaker_is_an_error(self):
        with pytest.raises(InputError, match="before first speaker"):
            read_transcript("stray prose\nMATT: hi", "speaker-lines")

    def test_turn_indices_validated(self):
        bad = '{"turn": 5, "speaker": "A", "content": "x"}\n'
        with pytest.raises(InputError, match="expected turn 0"):
            read_transcript(bad, "jsonl")


def turn(i, speaker, role, content):
    return Turn(turn_index=i, speaker=speaker, role=role, content=content)


class TestSplitRoles:
    def test_partition(self):
        transcript = Transcript(
            turns=(
                turn(0, "GM", "gm", "You enter the cave."),
                turn(1, "A", "player", "I light a torch."),
                turn(2, "B", "player", "I follow."),
                turn(3, "GM", "gm", "The cave opens up."),
            )
        )
        gm_doc, pc_doc = split_roles(transcript)
        assert gm_doc.parse_level == PARSE_PLAIN
        gm_words = word_tokens(gm_doc)
        assert "cave" in gm_words and "torch" not in gm_words
        assert "torch" in word_tokens(pc_doc)

    def test_all_one_role_is_degenerate(self):
        transcript = Transcript(
            turns=(turn(0, "GM", "gm", "a"), turn(1, "GM", "gm", "b"))
        )
        with pytest.raises(InputError, match="degenerate split"):
            split_roles(transcript)

    def test_unknown_role_is_an_error_unless_ignored(self):
        transcript = Transcript(
            turns=(
                turn(0, "GM", "gm", "a"),
                turn(1, "X", "unknown", "b"),
                turn(2, "A", "player", "c"),
            )
        )
        with pytest.raises(InputError, match="unknown role"):
            split_roles(transcript)
        gm_doc, pc_doc = split_roles(transcript, ignore_unknown=True)
        assert word_tokens(gm_doc) == ["a"]
        assert word_tokens(pc_doc) == ["c"]

    def test_split_preserves_content_multiset(self):
        contents = ["one two", "three", "four five", "six", "seven"]
        roles = ["gm", "player", "gm", "player", "player"]
        transcript = Transcript(
            turns=tuple(
                turn(i, r.upper(), r, c) for i, (r, c) in enumerate(zip(roles, contents))
            )
        )
        gm_turns, pc_turns = split_turns(transcript)
        recombined = Counter(t.content for t in gm_turns + pc_turns)
        assert recombined == Counter(contents)
