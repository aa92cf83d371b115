"""Depth-first interpretation of grammars over token sequences.

Space tokens are skipped between elements but never at the very start of a
match, so a match always begins and ends on a non-space token.  Matching
is bounded by the enclosing sentence.
"""
from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import replace

from ..lexicon import LexMatch, Lexicon, is_sentence_initial, lookup, lookup_elided, match_mask
from ..tokenizer import CaseClass, Sentence, Token, TokenKind, elided_tail
from .model import (
    MAX_DEPTH,
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
    Literal,
    Mask,
    Match,
    Optional,
    Repeat,
    Rule,
    SubgraphCall,
)

__all__ = ["Matcher", "apply_context_rules", "apply_grammars", "match_at"]

# state: (captures, entity, lexical); captures is a tuple of (name, start, end)
_State = tuple[tuple[tuple[str, int, int], ...], "tuple[int, int] | None", tuple]
_EMPTY: _State = ((), None, ())


def _case_ok(kind: str, tok: Token, elided: bool) -> bool:
    if tok.kind is TokenKind.NUMBER:
        return kind == "NB"
    if tok.kind is not TokenKind.WORD:
        return False
    if kind == "WORD":
        return True
    if kind == "PRE":
        if tok.case_class in (CaseClass.UPPER_FIRST, CaseClass.ALL_UPPER):
            return True
        if tok.case_class is CaseClass.MIXED and tok.surface[0].isupper():
            return True
        if elided:
            tail = elided_tail(tok.surface)
            return tail is not None and tail[0].isupper()
        return False
    if kind == "UPPER":
        if tok.case_class is CaseClass.ALL_UPPER:
            return True
        if elided:
            tail = elided_tail(tok.surface)
            return tail is not None and tail.isupper()
        return False
    return False


class Matcher:
    """Matches elements of ``grammar`` against ``tokens[lo:hi]``.

    One matcher serves one sentence; it memoizes dictionary lookups.
    """

    def __init__(
        self,
        grammar: Grammar,
        lexicon: Lexicon,
        tokens: Sequence[Token],
        lo: int = 0,
        hi: int | None = None,
        sentence_initial: int | None = None,
    ):
        self.grammar = grammar
        self.lexicon = lexicon
        self.tokens = tokens
        self.lo = lo
        self.hi = len(tokens) if hi is None else hi
        # index of the first word of the sentence, if known
        self.initial = sentence_initial
        self._lookups: dict[tuple[int, bool], list[LexMatch]] = {}

    # -- helpers ----------------------------------------------------------

    def _skip(self, pos: int, origin: int) -> int:
        if pos > origin:
            while pos < self.hi and self.tokens[pos].kind is TokenKind.SPACE:
                pos += 1
        return pos

    def _lookup(self, pos: int, elided: bool) -> list[LexMatch]:
        key = (pos, elided)
        hits = self._lookups.get(key)
        if hits is None:
            if self.initial is None:
                initial = is_sentence_initial(self.tokens, pos)
            else:
                initial = pos == self.initial
            fn = lookup_elided if elided else lookup
            hits = fn(self.lexicon, self.tokens, pos, sentence_initial=initial, end=self.hi)
            self._lookups[key] = hits
        return hits

    # -- interpretation ---------------------------------------------------

    def _atom(self, e: Element, pos: int, origin: int, st: _State) -> Iterator[tuple[int, _State]]:
        pos = self._skip(pos, origin)
        if pos >= self.hi:
            return
        tokens = self.tokens
        if isinstance(e, Literal):
            p = pos
            for n, word in enumerate(e.words):
                if n:
                    p = self._skip(p, origin)
                if p >= self.hi:
                    return
                surface = tokens[p].surface
                if e.case_sensitive:
                    if surface != word:
                        return
                elif surface.casefold() != word.casefold():
                    return
                p += 1
            yield p, st
        elif isinstance(e, CaseTest):
            if _case_ok(e.kind, tokens[pos], e.allow_elided):
                yield pos + 1, st
        elif isinstance(e, Mask):
            for hit in self._lookup(pos, e.allow_elided):
                if e.exact_case and hit.case_folded:
                    continue
                if match_mask(hit.entry, e.mask):
                    caps, ent, lex = st
                    yield pos + hit.length, (caps, ent, lex + ((pos, hit.length, hit.entry),))

    def _seq(
        self, elems: tuple[Element, ...], k: int, pos: int, origin: int, st: _State, depth: int
    ) -> Iterator[tuple[int, _State]]:
        if k == len(elems):
            yield pos, st
            return
        for p, s in self._elem(elems[k], pos, origin, st, depth):
            yield from self._seq(elems, k + 1, p, origin, s, depth)

    def _elem(self, e: Element, pos: int, origin: int, st: _State, depth: int) -> Iterator[tuple[int, _State]]:
        if isinstance(e, (Literal, CaseTest, Mask)):
            yield from self._atom(e, pos, origin, st)
        elif isinstance(e, SubgraphCall):
            if depth + 1 > MAX_DEPTH:
                raise DepthExceeded(f"subgraph nesting deeper than {MAX_DEPTH} at :{e.name}")
            for rule in self.grammar.graphs[e.name].rules:
                yield from self._seq(rule.elements, 0, pos, origin, st, depth + 1)
        elif isinstance(e, Alternation):
            for branch in e.branches:
                yield from self._seq(branch, 0, pos, origin, st, depth)
        elif isinstance(e, Optional):
            yield from self._seq(e.body, 0, pos, origin, st, depth)
            yield pos, st
        elif isinstance(e, Repeat):
            yield from self._repeat(e, 0, pos, origin, st, depth)
        elif isinstance(e, (Capture, EntitySpan)):
            begin = self._skip(pos, origin)
            for p, (caps, ent, lex) in self._seq(e.body, 0, pos, origin, st, depth):
                if p <= pos:
                    # nothing consumed: no binding
                    yield p, (caps, ent, lex)
                elif isinstance(e, Capture):
                    yield p, (caps + ((e.name, begin, p),), ent, lex)
                else:
                    yield p, (caps, (begin, p), lex)
        else:  # pragma: no cover - parser guarantees element types
            raise TypeError(f"unknown element {e!r}")

    def _repeat(
        self, e: Repeat, count: int, pos: int, origin: int, st: _State, depth: int
    ) -> Iterator[tuple[int, _State]]:
        if count >= e.min:
            yield pos, st
        if count < e.max:
            for p, s in self._seq(e.body, 0, pos, origin, st, depth):
                if p == pos and count >= e.min:
                    continue
                yield from self._repeat(e, count + 1, p, origin, s, depth)

    def _build(self, rule: Rule, start: int, end: int, st: _State) -> Match:
        caps, ent, lex = st
        tokens = self.tokens
        captures = {
            name: CaptureSpan(s, e, "".join(t.surface for t in tokens[s:e])) for name, s, e in caps
        }
        if ent is None:
            if rule.evidence is Evidence.EXTERNAL and caps:
                ent = (min(s for _, s, _ in caps), max(e for _, _, e in caps))
            else:
                ent = (start, end)
        return Match(
            start=start,
            end=end,
            rule=rule,
            captures=captures,
            entity_start=ent[0],
            entity_end=ent[1],
            ne_type=rule.output,
            evidence=rule.evidence,
            lexical=lex,
        )

    def match_rule(self, rule: Rule, i: int) -> list[Match]:
        out: list[Match] = []
        seen = set()
        for end, st in self._seq(rule.elements, 0, i, i, _EMPTY, 0):
            if end <= i:
                continue
            key = (end, st[0], st[1])
            if key in seen:
                continue
            seen.add(key)
            out.append(self._build(rule, i, end, st))
        return out

    def match_graph(self, graph_name: str, i: int) -> list[Match]:
        if not 0 <= i <= len(self.tokens):
            raise IndexError(i)
        if i >= self.hi or self.tokens[i].kind is TokenKind.SPACE:
            return []
        out: list[Match] = []
        for rule in self.grammar.graphs[graph_name].rules:
            if self._could_start(rule, i):
                out.extend(self.match_rule(rule, i))
        out.sort(key=lambda m: (-m.length, m.rule.priority))
        return out

    def match_elements(self, elems: tuple[Element, ...], i: int, origin: int) -> bool:
        """Whether ``elems`` match starting at ``i`` (spaces before ``i`` skipped)."""
        for _ in self._seq(elems, 0, i, origin, _EMPTY, 0):
            return True
        return False

    # -- first-token filter -----------------------------------------------

    def _could_start(self, rule: Rule, i: int) -> bool:
        if rule.first_atoms is None:
            rule.first_atoms = _first_atoms(self.grammar, rule.elements)
        firsts = rule.first_atoms
        if not firsts:
            return True
        tok = self.tokens[i]
        for atom in firsts:
            if isinstance(atom, Literal):
                w = atom.words[0]
                if tok.surface == w if atom.case_sensitive else tok.surface.casefold() == w.casefold():
                    return True
            elif isinstance(atom, CaseTest):
                if _case_ok(atom.kind, tok, atom.allow_elided):
                    return True
            elif self._lookup(i, atom.allow_elided):
                return True
        return False


def _first_atoms(grammar: Grammar, elems: tuple[Element, ...]) -> tuple:
    """Atoms that can consume the first token; empty when unknown or nullable."""
    res = _firsts_seq(grammar, elems, set())
    return () if res is None or res[1] else tuple(res[0])


def _firsts_seq(grammar: Grammar, elems, visiting: set) -> tuple[list, bool] | None:
    """Return (first atoms, nullable) or None when it cannot be determined."""
    atoms: list = []
    for e in elems:
        r = _firsts_elem(grammar, e, visiting)
        if r is None:
            return None
        atoms.extend(r[0])
        if not r[1]:
            return atoms, False
    return atoms, True


def _firsts_elem(grammar: Grammar, e: Element, visiting: set):
    if isinstance(e, (Literal, CaseTest, Mask)):
        return [e], False
    if isinstance(e, SubgraphCall):
        if e.name in visiting:
            return None
        visiting = visiting | {e.name}
        atoms: list = []
        nullable = False
        for rule in grammar.graphs[e.name].rules:
            r = _firsts_seq(grammar, rule.elements, visiting)
            if r is None:
                return None
            atoms.extend(r[0])
            nullable = nullable or r[1]
        return atoms, nullable
    if isinstance(e, Alternation):
        atoms = []
        nullable = False
        for br in e.branches:
            r = _firsts_seq(grammar, br, visiting)
            if r is None:
                return None
            atoms.extend(r[0])
            nullable = nullable or r[1]
        return atoms, nullable
    if isinstance(e, Optional):
        r = _firsts_seq(grammar, e.body, visiting)
        return None if r is None else (r[0], True)
    if isinstance(e, Repeat):
        r = _firsts_seq(grammar, e.body, visiting)
        return None if r is None else (r[0], r[1] or e.min == 0)
    if isinstance(e, (Capture, EntitySpan)):
        return _firsts_seq(grammar, e.body, visiting)
    return None


# -- public operations ------------------------------------------------------


def match_at(
    grammar: Grammar,
    graph_name: str,
    tokens: Sequence[Token],
    i: int,
    lexicon: Lexicon,
    sentence: Sentence | None = None,
) -> list[Match]:
    """All matches of ``graph_name`` starting at token ``i``.

    Sorted longest first, then by rule priority.  ``sentence`` bounds the
    match; without it the whole token list is used.
    """
    if graph_name not in grammar.graphs:
        raise KeyError(graph_name)
    if sentence is None:
        m = Matcher(grammar, lexicon, tokens)
    else:
        m = Matcher(grammar, lexicon, tokens, sentence.start, sentence.end, _first_word(tokens, sentence))
    return m.match_graph(graph_name, i)


def _first_word(tokens: Sequence[Token], sentence: Sentence) -> int:
    k = sentence.start
    while k < sentence.end and tokens[k].kind is TokenKind.SPACE:
        k += 1
    return k


def _selection_key(m: Match) -> tuple:
    return (-m.length, 0 if m.evidence is Evidence.EXTERNAL else 1, m.rule.priority)


def apply_grammars(
    grammar: Grammar, tokens: Sequence[Token], sentences: Sequence[Sentence], lexicon: Lexicon
) -> list[Match]:
    """Scan left to right keeping one non-overlapping match per position.

    Candidates are ranked by span length, then external over internal
    evidence, then rule priority.  Scanning resumes after the chosen match,
    so anything nested inside it is dropped.
    """
    out: list[Match] = []
    for sent in sentences:
        matcher = Matcher(grammar, lexicon, tokens, sent.start, sent.end, _first_word(tokens, sent))
        pos = sent.start
        while pos < sent.end:
            if tokens[pos].kind is TokenKind.SPACE:
                pos += 1
                continue
            cands: list[Match] = []
            for name in grammar.entry_points:
                cands.extend(matcher.match_graph(name, pos))
            if cands:
                best = min(cands, key=_selection_key)
                out.append(best)
                pos = best.end
            else:
                pos += 1
    return out


def apply_context_rules(
    rules: Sequence[ContextRule],
    matches: Sequence[Match],
    tokens: Sequence[Token],
    sentences: Sequence[Sentence],
    lexicon: Lexicon,
    grammar: Grammar | None = None,
) -> list[Match]:
    """Retype matches whose right context, within the sentence, fits a rule.

    Rules are tried in priority order and the first that applies wins.
    Spans and captures never change.  ``grammar`` is needed only when the
    context patterns call subgraphs.
    """
    if not rules:
        return list(matches)
    ordered = sorted(rules, key=lambda r: r.priority)
    g = grammar if grammar is not None else Grammar()
    out: list[Match] = []
    si = 0
    matchers: dict[int, Matcher] = {}
    for m in matches:
        while si < len(sentences) and sentences[si].end <= m.start:
            si += 1
        sent = sentences[si] if si < len(sentences) else Sentence(0, len(tokens))
        matcher = matchers.get(si)
        if matcher is None:
            matcher = matchers[si] = Matcher(g, lexicon, tokens, sent.start, sent.end, _first_word(tokens, sent))
        for rule in ordered:
            if m.ne_type is None or not m.ne_type.is_under(rule.target):
                continue
            if matcher.match_elements(rule.right_context, m.end, m.start):
                m = replace(m, ne_type=rule.new_type, evidence=Evidence.CONTEXT_RECLASSIFIED)
                break
        out.append(m)
    return out
