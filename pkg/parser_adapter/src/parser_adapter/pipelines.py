"""Pipeline backends and the registry that selects them by model name.

A pipeline name has the form ``<prefix>:<model>``, e.g.
``spacy:en_core_web_sm`` or ``stanza:en``. Backends are imported lazily so
the adapter itself has no hard NLP dependencies; a missing package or model
produces an actionable error instead of a stack trace. Every loaded
pipeline is probed once at startup: it must emit exactly one root per
sentence and populate Penn-style XPOS tags, because the analysis side's
tense metrics read XPOS.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol


class AdapterError(Exception):
    """Configuration, pipeline, or conversion failure with a readable message."""


@dataclass(frozen=True)
class ParsedToken:
    form: str
    lemma: str
    upos: str
    xpos: str
    head: int  # sentence-local 1-based governor id, 0 = root
    deprel: str


class Pipeline(Protocol):
    def process(self, text: str) -> list[list[ParsedToken]]:
        """Parse text into sentences of tokens."""


_REGISTRY: dict[str, Callable[[str], Pipeline]] = {}


def register_pipeline(prefix: str, factory: Callable[[str], Pipeline]) -> None:
    """Register a backend under a name prefix; the factory gets the model id."""
    _REGISTRY[prefix] = factory


def registered_prefixes() -> list[str]:
    return sorted(_REGISTRY)


def load_pipeline(name: str) -> Pipeline:
    """Instantiate and validate the pipeline behind ``prefix:model``."""
    if ":" not in name:
        raise AdapterError(
            f"pipeline name {name!r} must look like '<backend>:<model>', "
            f"e.g. 'spacy:en_core_web_sm' (registered backends: {', '.join(registered_prefixes())})"
        )
    prefix, model = name.split(":", 1)
    factory = _REGISTRY.get(prefix)
    if factory is None:
        raise AdapterError(
            f"no pipeline backend {prefix!r}; registered backends: "
            f"{', '.join(registered_prefixes())}"
        )
    pipeline = factory(model)
    validate_pipeline(pipeline, name)
    return pipeline


PROBE_TEXT = "The guard opened the gate. We walked through."


def validate_pipeline(pipeline: Pipeline, name: str = "<pipeline>") -> None:
    """Reject pipelines that cannot feed the analysis side.

    Checks on a short probe text: at least one sentence, exactly one root
    per sentence, in-range heads, and non-empty XPOS tags.
    """
    sentences = pipeline.process(PROBE_TEXT)
    if not sentences:
        raise AdapterError(f"{name}: probe text produced no sentences")
    for i, sentence in enumerate(sentences, start=1):
        if not sentence:
            raise AdapterError(f"{name}: probe sentence {i} is empty")
        roots = [t for t in sentence if t.head == 0]
        if len(roots) != 1:
            raise AdapterError(
                f"{name}: probe sentence {i} has {len(roots)} roots, expected 1"
            )
        for t in sentence:
            if not 0 <= t.head <= len(sentence):
                raise AdapterError(f"{name}: probe sentence {i} has head {t.head} out of range")
    if not any(t.xpos for sentence in sentences for t in sentence):
        raise AdapterError(
            f"{name}: pipeline emits no XPOS (Penn-style) tags; tense metrics "
            "need them, pick a model with a tagger"
        )


# ---------------------------------------------------------------------------
# spaCy backend

# spaCy's English models keep a few non-UD relation names; normalise the
# ones the analysis side keys on
_SPACY_DEPREL_MAP = {"ROOT": "root", "relcl": "acl:relcl"}


class SpacyPipeline:
    def __init__(self, model: str):
        try:
            import spacy
        except ImportError:
            raise AdapterError(
                "spaCy is not installed; run: pip install spacy && "
                f"python -m spacy download {model}"
            ) from None
        try:
            self._nlp = spacy.load(model)
        except OSError:
            raise AdapterError(
                f"spaCy model {model!r} is not available locally; run: "
                f"python -m spacy download {model}"
            ) from None

    def process(self, text: str) -> list[list[ParsedToken]]:
        doc = self._nlp(text)
        sentences = []
        for sent in doc.sents:
            tokens = []
            for token in sent:
                if token.is_space:
                    continue
                head = 0 if token.head is token else token.head.i - sent.start + 1
                deprel = _SPACY_DEPREL_MAP.get(token.dep_, token.dep_)
                if head == 0:
                    deprel = "root"
                tokens.append(
                    ParsedToken(
                        form=token.text,
                        lemma=token.lemma_ or token.text,
                        upos=token.pos_ or "X",
                        xpos=token.tag_ or "",
                        head=head,
                        deprel=deprel,
                    )
                )
            if tokens:
                sentences.append(tokens)
        return sentences


# ---------------------------------------------------------------------------
# stanza backend


class StanzaPipeline:
    def __init__(self, model: str):
        try:
            import stanza
        except ImportError:
            raise AdapterError(
                "stanza is not installed; run: pip install stanza && "
                f"python -c \"import stanza; stanza.download('{model}')\""
            ) from None
        try:
            self._nlp = stanza.Pipeline(
                model, processors="tokenize,pos,lemma,depparse", verbose=False
            )
        except Exception as err:
            raise AdapterError(
                f"stanza model {model!r} could not be loaded ({err}); run: "
                f"python -c \"import stanza; stanza.download('{model}')\""
            ) from None

    def process(self, text: str) -> list[list[ParsedToken]]:
        doc = self._nlp(text)
        sentences = []
        for sent in doc.sentences:
            tokens = [
                ParsedToken(
                    form=word.text,
                    lemma=word.lemma or word.text,
                    upos=word.upos or "X",
                    xpos=word.xpos or "",
                    head=word.head,
                    deprel=word.deprel or "dep",
                )
                for word in sent.words
            ]
            if tokens:
                sentences.append(tokens)
        return sentences


register_pipeline("spacy", SpacyPipeline)
register_pipeline("stanza", StanzaPipeline)
