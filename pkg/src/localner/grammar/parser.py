"""Parser for the line-based local-grammar language.

See ``docs/grammar.md`` for the full syntax.  In short::

    @graph Organization                    # entry point, applied to text
    'groupe' $org(<PRE>+3) -> Organization {} evidence=external

    @subgraph FirstName                    # only reachable through :FirstName
    <N+PR+Prénom>

    @context
    Location.Microtoponyme // 'se' <trouver.V> 'dans' "l'impossibilité" => Organization
"""
from __future__ import annotations

import re
from collections.abc import Iterable

from ..lexicon import LexicalMask
from ..taxonomy import NEType, Taxonomy, TaxonomyError
from ..tokenizer import TokenKind, tokenize
from .model import (
    MAX_REPEAT,
    Alternation,
    Capture,
    CaseTest,
    ContextRule,
    Element,
    EntitySpan,
    Evidence,
    Grammar,
    GrammarError,
    GrammarSyntaxError,
    Graph,
    Literal,
    Mask,
    Optional,
    Repeat,
    Rule,
    SubgraphCall,
    UnbalancedCapture,
    UnknownAttribute,
    UnknownGraph,
    UnknownType,
)

__all__ = ["parse_grammar", "parse_grammars", "parse_elements"]

CASE_TESTS = ("PRE", "UPPER", "WORD", "NB")
_NAME = re.compile(r"[A-Za-z_À-ÿ][\w\-]*")
_REPEAT = re.compile(r"\+(\d*)")


def _split_top(line: str, sep: str) -> tuple[str, str] | None:
    """Split ``line`` at the first ``sep`` outside quotes and angle brackets."""
    quote = None
    angle = False
    k = 0
    while k < len(line):
        c = line[k]
        if quote:
            if c == "\\":
                k += 2
                continue
            if c == quote:
                quote = None
        elif angle:
            if c == ">":
                angle = False
        elif c in "'\"":
            quote = c
        elif c == "<":
            angle = True
        elif line.startswith(sep, k):
            return line[:k], line[k + len(sep):]
        k += 1
    return None


def _strip_comment(line: str) -> str:
    """Drop a trailing ``#`` comment that is outside quotes and brackets."""
    cut = _split_top(line, "#")
    return (cut[0] if cut else line).rstrip()


class _Lexer:
    def __init__(self, text: str, lineno: int | None, source: str | None):
        self.text = text
        self.lineno = lineno
        self.source = source
        self.toks: list[tuple[str, object]] = []
        self._scan()
        self.k = 0

    def error(self, msg: str, cls: type[GrammarError] = GrammarSyntaxError) -> GrammarError:
        return cls(msg, self.lineno, self.source)

    def _scan(self) -> None:
        s = self.text
        k = 0
        while k < len(s):
            c = s[k]
            if c.isspace():
                k += 1
            elif c in "'\"":
                j = k + 1
                buf = []
                while j < len(s) and s[j] != c:
                    if s[j] == "\\" and j + 1 < len(s):
                        j += 1
                    buf.append(s[j])
                    j += 1
                if j >= len(s):
                    raise self.error(f"unterminated literal starting at column {k + 1}")
                self.toks.append(("lit", ("".join(buf), c == "'")))
                k = j + 1
            elif c == "<":
                j = s.find(">", k)
                if j < 0:
                    raise self.error("unterminated '<'")
                body = s[k + 1:j]
                k = j + 1
                elided = exact = False
                while k < len(s) and s[k] in "~!":
                    if s[k] == "~":
                        elided = True
                    else:
                        exact = True
                    k += 1
                self.toks.append(("box", (body, elided, exact)))
            elif c == ":":
                m = _NAME.match(s, k + 1)
                if not m:
                    raise self.error("expected a graph name after ':'")
                self.toks.append(("call", m.group()))
                k = m.end()
            elif c == "$":
                m = _NAME.match(s, k + 1)
                if not m or m.end() >= len(s) or s[m.end()] != "(":
                    raise self.error("expected '$name(' for a capture")
                self.toks.append(("capture", m.group()))
                k = m.end() + 1
            elif c == "+":
                m = _REPEAT.match(s, k)
                n = int(m.group(1)) if m.group(1) else MAX_REPEAT
                if not 1 <= n <= MAX_REPEAT:
                    raise self.error(f"repeat bound must be between 1 and {MAX_REPEAT}, got {n}")
                self.toks.append(("repeat", n))
                k = m.end()
            elif c in "()[]|?":
                self.toks.append((c, None))
                k += 1
            else:
                raise self.error(f"unexpected character {c!r} at column {k + 1}")

    def peek(self) -> str | None:
        return self.toks[self.k][0] if self.k < len(self.toks) else None

    def take(self) -> tuple[str, object]:
        tok = self.toks[self.k]
        self.k += 1
        return tok


def _atom(lx: _Lexer, kind: str, value: object) -> Element:
    if kind == "lit":
        text, case_sensitive = value
        words = tuple(t.surface for t in tokenize(text) if t.kind is not TokenKind.SPACE)
        if not words:
            raise lx.error("empty literal")
        return Literal(words, case_sensitive)
    if kind == "box":
        body, elided, exact = value
        if body in CASE_TESTS:
            if exact:
                raise lx.error(f"'!' only applies to dictionary masks, not <{body}>")
            return CaseTest(body, elided)
        try:
            mask = LexicalMask.parse(body)
        except ValueError as exc:
            raise lx.error(f"bad mask <{body}>: {exc}") from None
        return Mask(mask, elided, exact)
    if kind == "call":
        return SubgraphCall(value)
    raise lx.error(f"unexpected {kind!r}")


def _parse_seq(lx: _Lexer, closers: str) -> tuple[Element, ...]:
    items: list[Element] = []
    while True:
        kind = lx.peek()
        if kind is None or kind in closers:
            return tuple(items)
        kind, value = lx.take()
        if kind == "capture":
            body = _parse_alt(lx)
            if lx.peek() != ")":
                raise lx.error(f"capture ${value} is not closed", UnbalancedCapture)
            lx.take()
            item: Element = Capture(value, body)
        elif kind == "(":
            branches = _parse_branches(lx)
            if lx.peek() != ")":
                raise lx.error("unbalanced '('")
            lx.take()
            item = Alternation(branches)
        elif kind == "[":
            body = _parse_alt(lx)
            if lx.peek() != "]":
                raise lx.error("unbalanced '['")
            lx.take()
            item = EntitySpan(body)
        elif kind in (")", "]", "|", "?", "repeat"):
            raise lx.error(f"unexpected {kind if kind != 'repeat' else '+'!r}")
        else:
            item = _atom(lx, kind, value)
        while lx.peek() in ("?", "repeat"):
            kind, value = lx.take()
            if kind == "?":
                item = Optional((item,))
            else:
                item = Repeat((item,), 1, value)
        items.append(item)


def _parse_branches(lx: _Lexer) -> tuple[tuple[Element, ...], ...]:
    branches = [_parse_seq(lx, ")]|")]
    while lx.peek() == "|":
        lx.take()
        branches.append(_parse_seq(lx, ")]|"))
    return tuple(branches)


def _parse_alt(lx: _Lexer) -> tuple[Element, ...]:
    branches = _parse_branches(lx)
    if len(branches) == 1:
        return branches[0]
    return (Alternation(branches),)


def parse_elements(text: str, lineno: int | None = None, source: str | None = None) -> tuple[Element, ...]:
    lx = _Lexer(text, lineno, source)
    elems = _parse_alt(lx)
    if lx.peek() is not None:
        kind = lx.peek()
        if kind == ")":
            raise lx.error("unmatched ')'", UnbalancedCapture)
        raise lx.error(f"unexpected {kind!r}")
    if not elems:
        raise lx.error("empty pattern")
    return elems


def _walk(elems: Iterable[Element]):
    for e in elems:
        yield e
        if isinstance(e, (Optional, Repeat, Capture, EntitySpan)):
            yield from _walk(e.body)
        elif isinstance(e, Alternation):
            for br in e.branches:
                yield from _walk(br)


def _type_of(label: str, taxonomy: Taxonomy, lineno: int, source: str | None) -> NEType:
    t = NEType.from_label(label)
    try:
        return taxonomy.validate_type(t.class_name, t.type_path)
    except TaxonomyError as exc:
        raise UnknownType(exc.message, lineno, source) from None


_OUTPUT = re.compile(r"^(?P<type>[^{]+?)\s*(?:\{(?P<binds>[^}]*)\})?\s*(?:evidence\s*=\s*(?P<ev>\w+))?\s*$")


def _parse_rule(
    line: str, graph: Graph, taxonomy: Taxonomy, priority: int, lineno: int, source: str | None
) -> Rule:
    split = _split_top(line, "->")
    pattern, out = (split if split else (line, None))
    elems = parse_elements(pattern, lineno, source)
    rule = Rule(elems, priority=priority, graph=graph.name, source=source, lineno=lineno)
    if out is None:
        if graph.entry:
            raise GrammarSyntaxError("rules of an entry graph need '-> TYPE'", lineno, source)
        return rule
    m = _OUTPUT.match(out.strip())
    if not m:
        raise GrammarSyntaxError(f"cannot read output {out.strip()!r}", lineno, source)
    rule.output = _type_of(m.group("type"), taxonomy, lineno, source)
    ev = (m.group("ev") or "internal").lower()
    if ev not in ("internal", "external"):
        raise GrammarSyntaxError(f"evidence must be internal or external, got {ev!r}", lineno, source)
    rule.evidence = Evidence.EXTERNAL if ev == "external" else Evidence.INTERNAL

    captured = {e.name for e in _walk(elems) if isinstance(e, Capture)}
    schema = taxonomy.attributes(rule.output.class_name)
    for item in (m.group("binds") or "").split(","):
        if not item.strip():
            continue
        attr, eq, var = item.partition("=")
        attr, var = attr.strip(), var.strip()
        if not eq or not attr or not var:
            raise GrammarSyntaxError(f"expected attr=var, got {item.strip()!r}", lineno, source)
        if attr not in schema:
            raise UnknownAttribute(f"{attr!r} is not an attribute of {rule.output.class_name}", lineno, source)
        if var not in captured:
            raise GrammarSyntaxError(f"variable {var!r} is never captured", lineno, source)
        rule.attribute_bindings[attr] = var
    if sum(isinstance(e, EntitySpan) for e in _walk(elems)) > 1:
        raise GrammarSyntaxError("at most one [ ] entity span per rule", lineno, source)
    return rule


def _parse_context(line: str, taxonomy: Taxonomy, priority: int, lineno: int, source: str | None) -> ContextRule:
    left = _split_top(line, "//")
    if left is None:
        raise GrammarSyntaxError("context rules read 'TARGET // elements => NEW_TYPE'", lineno, source)
    target, rest = left
    right = _split_top(rest, "=>")
    if right is None:
        raise GrammarSyntaxError("context rule is missing '=> NEW_TYPE'", lineno, source)
    pattern, new = right
    return ContextRule(
        target=_type_of(target.strip(), taxonomy, lineno, source),
        right_context=parse_elements(pattern, lineno, source),
        new_type=_type_of(new.strip(), taxonomy, lineno, source),
        priority=priority,
        source=source,
        lineno=lineno,
    )


def parse_grammars(sources: Iterable[tuple[str | None, str]], taxonomy: Taxonomy) -> Grammar:
    """Parse several grammar files into one grammar.

    Rule priority follows reading order across all files.  Subgraph calls
    may target graphs declared in any of the files.
    """
    grammar = Grammar()
    priority = 0
    calls: list[tuple[str, Rule | ContextRule]] = []
    for source, text in sources:
        graph: Graph | None = None
        in_context = False
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = _strip_comment(raw).strip() if not raw.lstrip().startswith("#") else ""
            if not line:
                continue
            if line.startswith("@"):
                word, _, name = line.partition(" ")
                name = name.strip()
                if word == "@context":
                    in_context, graph = True, None
                    continue
                if word not in ("@graph", "@subgraph"):
                    raise GrammarSyntaxError(f"unknown directive {word!r}", lineno, source)
                if not _NAME.fullmatch(name):
                    raise GrammarSyntaxError(f"bad graph name {name!r}", lineno, source)
                if name in grammar.graphs:
                    raise GrammarSyntaxError(f"graph {name!r} declared twice", lineno, source)
                graph = Graph(name, entry=word == "@graph")
                grammar.graphs[name] = graph
                if graph.entry:
                    grammar.entry_points.append(name)
                in_context = False
                continue
            priority += 1
            if in_context:
                rule: Rule | ContextRule = _parse_context(line, taxonomy, priority, lineno, source)
                grammar.context_rules.append(rule)
                elems = rule.right_context
            else:
                if graph is None:
                    raise GrammarSyntaxError("rule outside of any @graph", lineno, source)
                rule = _parse_rule(line, graph, taxonomy, priority, lineno, source)
                graph.rules.append(rule)
                elems = rule.elements
            for e in _walk(elems):
                if isinstance(e, SubgraphCall):
                    calls.append((e.name, rule))
    for name, rule in calls:
        if name not in grammar.graphs:
            raise UnknownGraph(f"call to undefined graph :{name}", rule.lineno, rule.source)
    for g in grammar.graphs.values():
        if not g.rules:
            raise GrammarSyntaxError(f"graph {g.name!r} has no rules")
    return grammar


def parse_grammar(text: str, taxonomy: Taxonomy, source: str | None = None) -> Grammar:
    return parse_grammars([(source, text)], taxonomy)
