"""Batch converter from raw text to CoNLL-U via a pluggable UD pipeline.

This package never embeds an NLP framework of its own: parsing is delegated
to whichever registered pipeline backend (spaCy, stanza, or anything
registered through :func:`parser_adapter.pipelines.register_pipeline`) is
available locally, and the output is plain CoNLL-U files handed to the
analysis side by path.
"""

from .convert import AdapterConfig, parse_raw
from .pipelines import (
    AdapterError,
    ParsedToken,
    load_pipeline,
    register_pipeline,
    registered_prefixes,
    validate_pipeline,
)

__all__ = [
    "AdapterConfig",
    "AdapterError",
    "ParsedToken",
    "load_pipeline",
    "parse_raw",
    "register_pipeline",
    "registered_prefixes",
    "validate_pipeline",
]

__version__ = "0.1.0"
