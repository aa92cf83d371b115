"""Local grammars: a small DSL compiled to recursive transition networks."""
from .matcher import Matcher, apply_context_rules, apply_grammars, match_at
from .model import (
    MAX_DEPTH,
    MAX_REPEAT,
    Alternation,
    Capture,
    CaptureSpan,
    CaseTest,
    ContextRule,
    DepthExceeded,
    Element,
    EntitySpan,
    Evidence,
    Grammar,
    GrammarError,
    GrammarSyntaxError,
    Graph,
    Literal,
    Mask,
    Match,
    Optional,
    Repeat,
    Rule,
    SubgraphCall,
    UnbalancedCapture,
    UnknownAttribute,
    UnknownGraph,
    UnknownType,
)
from .parser import parse_elements, parse_grammar, parse_grammars

__all__ = [
    "MAX_DEPTH",
    "MAX_REPEAT",
    "Alternation",
    "Capture",
    "CaptureSpan",
    "CaseTest",
    "ContextRule",
    "DepthExceeded",
    "Element",
    "EntitySpan",
    "Evidence",
    "Grammar",
    "GrammarError",
    "GrammarSyntaxError",
    "Graph",
    "Literal",
    "Mask",
    "Match",
    "Matcher",
    "Optional",
    "Repeat",
    "Rule",
    "SubgraphCall",
    "UnbalancedCapture",
    "UnknownAttribute",
    "UnknownGraph",
    "UnknownType",
    "apply_context_rules",
    "apply_grammars",
    "match_at",
    "parse_elements",
    "parse_grammar",
    "parse_grammars",
]
