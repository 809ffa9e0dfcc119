"""
Exception hierarchy for scenegraph-kit.

Structural problems with graphs and model outputs are reported as data
(ValidationReport, ParseOutcome diagnostics). Exceptions are reserved for
misuse of the API, unreadable inputs and transport failures.
"""

from typing import Optional


class SgkitError(Exception):
    """Base class for all scenegraph-kit errors."""


class SerializationError(SgkitError):
    """Raised when asked to serialize a graph that fails structural validation."""


class AnnotationError(SgkitError):
    """A malformed or unreadable annotation record."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ""
        if path:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{location}{message}")


class ConfigError(SgkitError):
    """Invalid configuration values (weights, thresholds, policies)."""


class JudgeError(SgkitError):
    """The equivalence judge could not produce a verdict."""
