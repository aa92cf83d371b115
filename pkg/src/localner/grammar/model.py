"""Element, rule and match types shared by the parser and the matcher."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Union

from ..lexicon import DictEntry, LexicalMask
from ..taxonomy import NEType

MAX_REPEAT = 8
MAX_DEPTH = 64


class Evidence(enum.Enum):
    INTERNAL = "Internal"
    EXTERNAL = "External"
    PROPAGATED = "Propagated"
    CONTEXT_RECLASSIFIED = "ContextReclassified"


class GrammarError(ValueError):
    def __init__(self, message: str, lineno: int | None = None, source: str | None = None):
        self.message = message
        self.lineno = lineno
        self.source = source
        super().__init__(str(self))

    def __str__(self) -> str:
        where = ""
        if self.lineno is not None:
            where = f"{self.source or '<grammar>'}:{self.lineno}: "
        return f"{where}{type(self).__name__}: {self.message}"


class GrammarSyntaxError(GrammarError):
    pass


class UnknownGraph(GrammarError):
    pass


class UnknownType(GrammarError):
    pass


class UnknownAttribute(GrammarError):
    pass


class UnbalancedCapture(GrammarError):
    pass


class DepthExceeded(RuntimeError):
    """Subgraph calls nested deeper than :data:`MAX_DEPTH`."""


# -- elements ---------------------------------------------------------------


@dataclass(frozen=True)
class Literal:
    """One or more words; ``case_sensitive=False`` compares case-folded."""

    words: tuple[str, ...]
    case_sensitive: bool = True


@dataclass(frozen=True)
class Mask:
    """A dictionary constraint.  ``exact_case`` refuses case-folded hits."""

    mask: LexicalMask
    allow_elided: bool = False
    exact_case: bool = False


@dataclass(frozen=True)
class CaseTest:
    """``PRE`` capitalized word, ``UPPER`` all-caps word, ``WORD`` any word, ``NB`` number."""

    kind: str
    allow_elided: bool = False


@dataclass(frozen=True)
class SubgraphCall:
    name: str


@dataclass(frozen=True)
class Optional:
    body: tuple[Element, ...]


@dataclass(frozen=True)
class Repeat:
    body: tuple[Element, ...]
    min: int = 1
    max: int = MAX_REPEAT


@dataclass(frozen=True)
class Alternation:
    branches: tuple[tuple[Element, ...], ...]


@dataclass(frozen=True)
class Capture:
    name: str
    body: tuple[Element, ...]


@dataclass(frozen=True)
class EntitySpan:
    """``[ ... ]``: the part of the match that is the entity itself."""

    body: tuple[Element, ...]


Element = Union[Literal, Mask, CaseTest, SubgraphCall, Optional, Repeat, Alternation, Capture, EntitySpan]
ATOMS = (Literal, Mask, CaseTest)


# -- rules ------------------------------------------------------------------


@dataclass(eq=False)
class Rule:
    elements: tuple[Element, ...]
    output: NEType | None = None
    attribute_bindings: dict[str, str] = field(default_factory=dict)
    evidence: Evidence = Evidence.INTERNAL
    priority: int = 0
    graph: str = ""
    source: str | None = None
    lineno: int | None = None
    # computed lazily by the matcher
    first_atoms: tuple | None = field(default=None, repr=False)

    def __repr__(self) -> str:
        out = f" -> {self.output}" if self.output else ""
        return f"Rule(#{self.priority} {self.graph}{out})"


@dataclass
class Graph:
    name: str
    rules: list[Rule] = field(default_factory=list)
    entry: bool = True


@dataclass(eq=False)
class ContextRule:
    target: NEType
    right_context: tuple[Element, ...]
    new_type: NEType
    priority: int = 0
    source: str | None = None
    lineno: int | None = None


@dataclass
class Grammar:
    graphs: dict[str, Graph] = field(default_factory=dict)
    entry_points: list[str] = field(default_factory=list)
    context_rules: list[ContextRule] = field(default_factory=list)

    def rules(self) -> list[Rule]:
        return [r for g in self.graphs.values() for r in g.rules]


@dataclass(frozen=True)
class CaptureSpan:
    start: int
    end: int
    surface: str


@dataclass(frozen=True)
class Match:
    """A grammar match over token indices ``[start, end)``.

    ``entity_start``/``entity_end`` delimit the entity inside the match
    (they differ from the match bounds when a trigger word sits outside
    the entity).  ``lexical`` lists the dictionary entries consumed, as
    ``(token_index, length, entry)``.
    """

    start: int
    end: int
    rule: Rule
    captures: dict[str, CaptureSpan]
    entity_start: int
    entity_end: int
    ne_type: NEType | None = None
    evidence: Evidence = Evidence.INTERNAL
    lexical: tuple[tuple[int, int, DictEntry], ...] = ()

    @property
    def length(self) -> int:
        return self.end - self.start
