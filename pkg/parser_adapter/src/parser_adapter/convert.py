"""File conversion: read raw text, run the pipeline, emit CoNLL-U."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .pipelines import AdapterError, ParsedToken, Pipeline, load_pipeline

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdapterConfig:
    inputs: tuple[Path, ...]
    output_dir: Path
    model: str = "spacy:en_core_web_sm"
    batch_size: int = 1000  # characters batched per pipeline call are capped per file

    def __post_init__(self) -> None:
        if not self.inputs:
            raise AdapterError("no input files given")
        if self.batch_size < 1:
            raise AdapterError("batch_size must be positive")


def _sentence_block(tokens: Sequence[ParsedToken], ordinal: int, source: str) -> str:
    n = len(tokens)
    roots = sum(1 for t in tokens if t.head == 0)
    if roots != 1:
        raise AdapterError(f"{source}: sentence {ordinal} has {roots} roots, expected 1")
    lines = []
    for i, t in enumerate(tokens, start=1):
        if not 0 <= t.head <= n:
            raise AdapterError(
                f"{source}: sentence {ordinal} token {i} head {t.head} out of range"
            )
        lines.append(
            "\t".join(
                [
                    str(i),
                    t.form or "_",
                    t.lemma or "_",
                    t.upos or "_",
                    t.xpos or "_",
                    "_",
                    str(t.head),
                    t.deprel or "dep",
                    "_",
                    "_",
                ]
            )
        )
    return "\n".join(lines)


def convert_text(text: str, pipeline: Pipeline, source: str = "<text>") -> str:
    """Parse one text and serialise it as CoNLL-U (UD v2 column layout)."""
    normalised = text.replace("\r\n", "\n").replace("\r", "\n")
    sentences = pipeline.process(normalised)
    if not sentences:
        raise AdapterError(f"{source}: pipeline produced no sentences")
    blocks = []
    for ordinal, sentence in enumerate(sentences, start=1):
        blocks.append(f"# sent_id = {ordinal}")
        blocks.append(_sentence_block(sentence, ordinal, source))
        blocks.append("")
    token_count = sum(len(s) for s in sentences)
    log.info("%s: %d sentences, %d tokens", source, len(sentences), token_count)
    return "\n".join(blocks) + "\n"


def parse_raw(config: AdapterConfig, pipeline: Pipeline | None = None) -> set[Path]:
    """Convert every input file to ``<output_dir>/<stem>.conllu``.

    Empty inputs are skipped with a warning; the pipeline is loaded from the
    configured model name unless one is passed in directly.
    """
    if pipeline is None:
        pipeline = load_pipeline(config.model)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    written: set[Path] = set()
    for input_path in config.inputs:
        if not input_path.exists():
            raise AdapterError(f"no such input file: {input_path}")
        text = input_path.read_text(encoding="utf-8")
        if not text.strip():
            log.warning("%s: empty input, skipped", input_path)
            continue
        conllu = convert_text(text, pipeline, source=str(input_path))
        out_path = config.output_dir / (input_path.stem + ".conllu")
        out_path.write_text(conllu, encoding="utf-8")
        written.add(out_path)
    return written
