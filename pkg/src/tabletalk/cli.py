"""Command-line front end: analyze, compare, generate, lexicons check.

Exit codes: 0 success, 1 input or endpoint error, 2 metric precondition
failure under --strict.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import report as report_mod
from .errors import InputError, MetricPreconditionError, ToolkitError
from .ingest import (
    ROLE_GM,
    ROLE_PLAYER,
    Document,
    Transcript,
    read_conllu,
    read_plain,
    read_transcript,
    split_roles,
)
from .lexical import VocdParams
from .lexicons import check_lexicon_dir, load_lexicon_set
from .session import (
    AGENT_PRESETS,
    AgentSpec,
    HttpChatClient,
    RetryPolicy,
    SessionAborted,
    SessionConfig,
    TranscriptWriter,
    build_agents,
    render_transcript,
    run_session,
)

DOCUMENT_SUFFIXES = (".conllu", ".txt", ".jsonl")


def _load_document(path: Path, gm_speakers: tuple[str, ...]) -> Document:
    data = path.read_bytes()
    if path.suffix == ".conllu":
        return read_conllu(data, doc_id=path.stem)
    if path.suffix == ".jsonl":
        transcript = read_transcript(data, "jsonl", gm_speakers=gm_speakers)
        text = "\n".join(t.content for t in transcript.turns)
        return read_plain(text, doc_id=path.stem)
    return read_plain(data.decode("utf-8"), doc_id=path.stem)


def _load_transcript(path: Path, gm_speakers: tuple[str, ...]) -> Transcript | None:
    if path.suffix == ".jsonl":
        return read_transcript(path.read_bytes(), "jsonl", gm_speakers=gm_speakers)
    return None


def _corpus_files(directory: Path) -> list[Path]:
    files = sorted(
        p for p in directory.iterdir() if p.is_file() and p.suffix in DOCUMENT_SUFFIXES
    )
    if not files:
        raise InputError(f"no corpus files (*.conllu, *.txt, *.jsonl) in {directory}")
    return files


def _emit(data: bytes, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(data.decode("utf-8"))
    else:
        Path(out).write_bytes(data)


def _build_vocd(args: argparse.Namespace) -> VocdParams:
    return VocdParams(rng_seed=args.seed)


def cmd_analyze(args: argparse.Namespace) -> int:
    lexicons = load_lexicon_set(args.lexicons, deictic_core=args.deictic_core)
    vocd = _build_vocd(args)
    gm_speakers = tuple(args.gm_speakers)
    reports = []
    for name in args.files:
        path = Path(name)
        if not path.exists():
            raise InputError(f"no such file: {path}")
        doc = _load_document(path, gm_speakers)
        rep = report_mod.analyze_document(doc, lexicons, vocd)
        if args.strict and rep.skipped:
            reasons = "; ".join(f"{k}: {v}" for k, v in rep.skipped.items())
            raise MetricPreconditionError(f"{doc.id}: {reasons}")
        reports.append(rep)
    header = ["metric"] + [r.doc_id for r in reports]
    vectors = [r.values() for r in reports]
    rows = [
        [metric] + [report_mod._format_cell(v[metric]) for v in vectors]
        for metric in report_mod.METRIC_ORDER
    ]
    _emit(report_mod.render_rows(header, rows, args.format), args.out)
    for rep in reports:
        for metric, reason in rep.skipped.items():
            print(f"note: {rep.doc_id}: {metric} skipped ({reason})", file=sys.stderr)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    lexicons = load_lexicon_set(args.lexicons, deictic_core=args.deictic_core)
    vocd = _build_vocd(args)
    gm_speakers = tuple(args.gm_speakers)
    summaries = []
    for corpus_dir in args.corpora:
        directory = Path(corpus_dir)
        if not directory.is_dir():
            raise InputError(f"not a directory: {directory}")
        name = directory.name
        reports = []
        gm_texts: list[str] = []
        pc_texts: list[str] = []
        for path in _corpus_files(directory):
            doc = _load_document(path, gm_speakers)
            reports.append(report_mod.analyze_document(doc, lexicons, vocd))
            if args.split_roles:
                transcript = _load_transcript(path, gm_speakers)
                if transcript is not None:
                    gm_doc, pc_doc = split_roles(
                        transcript, doc_id=path.stem, ignore_unknown=args.ignore_unknown
                    )
                    gm_texts.append(gm_doc)
                    pc_texts.append(pc_doc)
        summaries.append(report_mod.aggregate_corpus(name, reports))
        if args.split_roles and gm_texts and pc_texts:
            summaries.append(
                report_mod.aggregate_corpus(
                    f"{name}-DM",
                    [report_mod.analyze_document(d, lexicons, vocd) for d in gm_texts],
                )
            )
            summaries.append(
                report_mod.aggregate_corpus(
                    f"{name}-PC",
                    [report_mod.analyze_document(d, lexicons, vocd) for d in pc_texts],
                )
            )
    comparison = report_mod.compare(summaries, correlate=args.correlate)
    _emit(report_mod.render_table(comparison, args.format), args.out)
    return 0


def _agents_from_config(config: dict, base_dir: Path) -> tuple[AgentSpec, ...]:
    if "agents" in config:
        agents = []
        for spec in config["agents"]:
            system_message = spec.get("system_message")
            if system_message is None and "system_message_file" in spec:
                system_message = (base_dir / spec["system_message_file"]).read_text(
                    encoding="utf-8"
                )
            agents.append(
                AgentSpec(
                    name=spec["name"],
                    role=spec["role"],
                    system_message=system_message or "",
                    temperature=float(spec.get("temperature", 0.5)),
                    max_tokens=int(spec.get("max_tokens", 200)),
                    model=spec.get("model", config.get("model", "")),
                )
            )
        return tuple(agents)
    characters = None
    if "character_files" in config:
        characters = {
            name: (base_dir / filename).read_text(encoding="utf-8").strip()
            for name, filename in config["character_files"].items()
        }
    return build_agents(
        model=config.get("model", ""),
        preset=config.get("preset", "mid-temp"),
        characters=characters,
    )


def load_session_config(path: str | Path) -> SessionConfig:
    """Build a SessionConfig from a json file; see the README for the keys."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"no such config file: {path}")
    try:
        config = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise InputError(f"{path}: bad json ({err.msg})") from None
    base_dir = path.parent
    adventure = config.get("adventure_text", "")
    if "adventure_file" in config:
        adventure = (base_dir / config["adventure_file"]).read_text(encoding="utf-8")
    api_key = None
    key_env = config.get("api_key_env", "OPENAI_API_KEY")
    if key_env:
        api_key = os.environ.get(key_env)
    retry_cfg = config.get("retry", {})
    try:
        return SessionConfig(
            agents=_agents_from_config(config, base_dir),
            adventure_text=adventure,
            opening_prompt=config.get("opening_prompt", "Please start the adventure!"),
            max_interactions_per_player=int(config.get("max_interactions_per_player", 200)),
            endpoint=config.get("endpoint", ""),
            api_key=api_key,
            retry=RetryPolicy(
                max_attempts=int(retry_cfg.get("max_attempts", 4)),
                base_backoff=float(retry_cfg.get("base_backoff", 0.5)),
            ),
            history=config.get("history", "full"),
            wall_clock_limit_s=float(config.get("wall_clock_limit_s", 1800.0)),
            adventure_char_limit=config.get("adventure_char_limit"),
        )
    except KeyError as err:
        raise InputError(f"{path}: missing config key {err}") from None


def cmd_generate(args: argparse.Namespace) -> int:
    config = load_session_config(args.config)
    if args.cap is not None:
        from dataclasses import replace

        config = replace(config, max_interactions_per_player=args.cap)
    if not config.endpoint:
        raise InputError("config must set an endpoint url")
    client = HttpChatClient(config.endpoint, api_key=config.api_key)
    writer = TranscriptWriter(args.out)
    aborted = None
    try:
        transcript = run_session(config, client, writer)
    except SessionAborted as err:
        transcript = err.transcript
        aborted = err
    finally:
        writer.close()
    if args.speaker_lines:
        if transcript.turns:
            Path(args.speaker_lines).write_bytes(
                render_transcript(transcript, "speaker-lines")
            )
    print(f"wrote {len(transcript.turns)} turns to {args.out}", file=sys.stderr)
    if aborted is not None:
        print(f"session ended early: {aborted}", file=sys.stderr)
        return 1
    return 0


def cmd_lexicons(args: argparse.Namespace) -> int:
    for line in check_lexicon_dir(args.directory):
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tabletalk",
        description="Register metrics over parsed corpora and LLM session generation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--lexicons", help="directory of override wordlists")
        p.add_argument(
            "--deictic-core",
            action="store_true",
            help="restrict deictics to the person/space/time subset",
        )
        p.add_argument("--seed", type=int, default=42, help="diversity-sampling seed")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "markdown"), default="csv")
        p.add_argument(
            "--gm-speakers",
            type=lambda s: s.split(","),
            default=[],
            help="comma-separated speaker names treated as the GM",
        )

    analyze = sub.add_parser("analyze", help="per-document metric vectors")
    analyze.add_argument("files", nargs="+")
    add_common(analyze)
    analyze.add_argument(
        "--strict",
        action="store_true",
        help="fail (exit 2) when any metric precondition does not hold",
    )
    analyze.set_defaults(func=cmd_analyze)

    compare = sub.add_parser("compare", help="aggregate and compare corpus directories")
    compare.add_argument("corpora", nargs="+", metavar="corpus-dir")
    add_common(compare)
    compare.add_argument(
        "--split-roles",
        action="store_true",
        help="append -DM/-PC rows built from transcript role splits",
    )
    compare.add_argument(
        "--ignore-unknown",
        action="store_true",
        help="drop unknown-role turns instead of failing the split",
    )
    compare.add_argument(
        "--correlate",
        action="store_true",
        help="add pairwise Pearson rows over connective class rates",
    )
    compare.set_defaults(func=cmd_compare)

    generate = sub.add_parser("generate", help="run a round-robin session")
    generate.add_argument("--config", required=True, help="session config json")
    generate.add_argument("--out", required=True, help="jsonl transcript path")
    generate.add_argument(
        "--speaker-lines", help="also render a SPEAKER: content file here"
    )
    generate.add_argument(
        "--cap", type=int, help="override max interactions per player"
    )
    generate.set_defaults(func=cmd_generate)

    lexicons = sub.add_parser("lexicons", help="lexicon utilities")
    lex_sub = lexicons.add_subparsers(dest="lexicons_command", required=True)
    check = lex_sub.add_parser("check", help="validate a lexicon directory")
    check.add_argument("directory")
    check.set_defaults(func=cmd_lexicons)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MetricPreconditionError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ToolkitError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
