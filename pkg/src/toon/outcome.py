"""Result types shared by the TOON and JSON codecs."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from src.graph.model import Schema, SceneGraph


class DiagnosticCode(Enum):
    MISSING_TAGS = "missing-tags"
    UNEXPECTED_END = "unexpected-end"
    BAD_HEADER = "bad-header"
    COUNT_MISMATCH = "count-mismatch"
    BAD_ROW = "bad-row"
    BAD_NUMBER = "bad-number"
    TRAILING_CONTENT = "trailing-content"
    BAD_JSON = "bad-json"
    # Structural violations found on an otherwise readable graph
    DANGLING_REFERENCE = "dangling-reference"
    INVALID_GRAPH = "invalid-graph"


@dataclass(frozen=True)
class Diagnostic:
    """A parse problem with a 1-based line/column position."""
    code: DiagnosticCode
    message: str
    line: int = 0
    column: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.code.value}: {self.message}"


@dataclass(frozen=True)
class ParseOutcome:
    """
    Result of parsing model output or an annotation.

    graph holds the best-effort graph even when valid is 0 (so monitoring can
    still count objects and relations); it is None only when nothing could be
    read. valid is the binary validity mask.
    """
    graph: Optional[SceneGraph]
    valid: int
    diagnostics: tuple[Diagnostic, ...] = ()

    @property
    def codes(self) -> set[DiagnosticCode]:
        return {d.code for d in self.diagnostics}

    @property
    def valid_graph(self) -> Optional[SceneGraph]:
        """The graph if and only if the outcome is valid."""
        return self.graph if self.valid else None

    @classmethod
    def failure(cls, diagnostic: Diagnostic, graph: Optional[SceneGraph] = None) -> "ParseOutcome":
        return cls(graph=graph, valid=0, diagnostics=(diagnostic,))


@dataclass(frozen=True)
class ToonDocument:
    raw_text: str
    schema: Schema = Schema.OBJECT_RELATION
