"""Register metrics for parsed corpora plus a round-robin session generator.

The measurement side turns CoNLL-U parses, plain text, or speaker
transcripts into a common Document model and computes lexical, syntactic,
verb-form, and cohesion features over it. The generation side drives one
game-master agent and a fixed order of player agents through a round-robin
loop against any OpenAI-compatible chat endpoint, persisting the transcript
in the same format the readers consume.
"""

from .errors import InputError, MetricPreconditionError, ToolkitError

__all__ = ["InputError", "MetricPreconditionError", "ToolkitError"]

__version__ = "0.1.0"
