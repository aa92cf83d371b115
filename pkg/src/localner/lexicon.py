"""DELAF-style electronic dictionaries.

A dictionary line reads ``form,lemma.POS+FEAT+FEAT:infl:infl``.  An empty
lemma field means the lemma is the form itself::

    Caroline,.N+PR+Hum+Prénom:fs
    parisiens,parisien.A+Toponyme+Ville:mp
    Solensi,Solidarité Enfants Sida.N+Sigle:fs

A backslash escapes ``,`` ``.`` ``+`` ``:`` and ``\\`` inside the form and
lemma fields.  Lines starting with ``#`` are comments.

Compiled entries are indexed by the token sequence of their form (spaces
dropped), so compounds such as ``Côte d'Ivoire`` are looked up token by
token and the longest match wins.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from typing import NamedTuple

from .tokenizer import TERMINATORS, CaseClass, Token, TokenKind, case_class_of, elided_tail, tokenize

__all__ = [
    "DictEntry",
    "DictionaryError",
    "LexMatch",
    "LexicalMask",
    "Lexicon",
    "MalformedLine",
    "compile_lexicon",
    "format_delaf_line",
    "is_sentence_initial",
    "lookup",
    "lookup_elided",
    "match_mask",
    "parse_delaf_line",
]

_ESCAPABLE = ",.+:\\"


class MalformedLine(ValueError):
    def __init__(self, message: str, lineno: int | None = None, source: str | None = None):
        self.message = message
        self.lineno = lineno
        self.source = source
        super().__init__(str(self))

    def __str__(self) -> str:
        where = ""
        if self.source is not None and self.lineno is not None:
            where = f"{self.source}:{self.lineno}: "
        elif self.lineno is not None:
            where = f"line {self.lineno}: "
        return f"{where}MalformedLine: {self.message}"


class DictionaryError(ValueError):
    """Raised by :func:`compile_lexicon` with every malformed line it saw."""

    def __init__(self, errors: list[MalformedLine], aborted: bool = False):
        self.errors = errors
        self.aborted = aborted
        msg = f"{len(errors)} malformed dictionary line(s)"
        if aborted:
            msg += " (aborted)"
        super().__init__(msg + "\n" + "\n".join(str(e) for e in errors))


@dataclass(frozen=True)
class DictEntry:
    form: str
    lemma: str
    pos: str
    features: tuple[str, ...] = ()
    inflection: tuple[str, ...] = ()

    @property
    def codes(self) -> frozenset[str]:
        """Features and inflection codes as one set (what masks test against)."""
        return frozenset(self.features) | frozenset(self.inflection)

    @property
    def is_proper(self) -> bool:
        return "PR" in self.features

    def __str__(self) -> str:
        return format_delaf_line(self)


@dataclass(frozen=True)
class LexicalMask:
    pos: str | None = None
    required: frozenset[str] = frozenset()
    forbidden: frozenset[str] = frozenset()
    lemma: str | None = None

    def __post_init__(self) -> None:
        clash = self.required & self.forbidden
        if clash:
            raise ValueError(f"mask both requires and forbids {sorted(clash)}")

    @classmethod
    def parse(cls, text: str) -> LexicalMask:
        """Parse ``[lemma.]POS(+FEAT|-FEAT)*(:INFL)*``; POS may be empty."""
        lemma = None
        if "." in text:
            lemma, text = text.split(".", 1)
        head, *infl = text.split(":")
        required: set[str] = set(i for i in infl if i)
        forbidden: set[str] = set()
        pos = ""
        k = 0
        while k < len(head) and head[k] not in "+-":
            k += 1
        pos, rest = head[:k], head[k:]
        sign = None
        buf = ""
        for ch in rest + "+":
            if ch in "+-":
                if sign is not None:
                    if not buf:
                        raise ValueError(f"empty code in mask {text!r}")
                    (required if sign == "+" else forbidden).add(buf)
                sign, buf = ch, ""
            else:
                buf += ch
        return cls(pos or None, frozenset(required), frozenset(forbidden), lemma or None)

    def __str__(self) -> str:
        out = f"{self.lemma}." if self.lemma else ""
        out += self.pos or ""
        out += "".join(f"+{f}" for f in sorted(self.required))
        out += "".join(f"-{f}" for f in sorted(self.forbidden))
        return out


class LexMatch(NamedTuple):
    """A dictionary hit: ``length`` tokens from the query index (spaces included)."""

    length: int
    entry: DictEntry
    case_folded: bool = False
    elided: bool = False


def _split_unescaped(s: str, seps: str, maxsplit: int = -1) -> list[str]:
    """Split on unescaped separators, keeping escapes in the pieces."""
    parts: list[str] = []
    buf: list[str] = []
    k = 0
    while k < len(s):
        c = s[k]
        if c == "\\" and k + 1 < len(s):
            buf.append(s[k:k + 2])
            k += 2
            continue
        if c in seps and maxsplit != 0:
            parts.append("".join(buf))
            buf = []
            maxsplit -= 1
        else:
            buf.append(c)
        k += 1
    parts.append("".join(buf))
    return parts


def _unescape(s: str) -> str:
    out = []
    k = 0
    while k < len(s):
        if s[k] == "\\" and k + 1 < len(s):
            out.append(s[k + 1])
            k += 2
        else:
            out.append(s[k])
            k += 1
    return "".join(out)


def _escape(s: str) -> str:
    return "".join("\\" + c if c in _ESCAPABLE else c for c in s)


def parse_delaf_line(line: str, lineno: int | None = None, source: str | None = None) -> DictEntry:
    line = line.rstrip("\r\n")

    def bad(msg: str) -> MalformedLine:
        return MalformedLine(f"{msg}: {line!r}", lineno, source)

    head = _split_unescaped(line, ",", 1)
    if len(head) < 2:
        raise bad("missing ','")
    raw_form, rest = head
    tail = _split_unescaped(rest, ".", 1)
    if len(tail) < 2:
        raise bad("missing '.'")
    raw_lemma, codes = tail
    form = _unescape(raw_form)
    if not form:
        raise bad("empty form")
    lemma = _unescape(raw_lemma) or form

    groups = _split_unescaped(codes, ":")
    head_codes = _split_unescaped(groups[0], "+")
    pos = head_codes[0]
    if not pos:
        raise bad("empty part of speech")
    pieces = [*head_codes, *groups[1:]]
    if any("\\" in p for p in pieces):
        raise bad("escapes are not allowed in codes")
    if any(not p for p in pieces):
        raise bad("empty code")
    features = tuple(dict.fromkeys(head_codes[1:]))
    inflection = tuple(dict.fromkeys(groups[1:]))
    return DictEntry(form, lemma, pos, features, inflection)


def format_delaf_line(entry: DictEntry) -> str:
    """Serialize an entry in canonical form (empty lemma when equal to the form,
    escapes only where needed)."""
    lemma = "" if entry.lemma == entry.form else _escape(entry.lemma)
    out = f"{_escape(entry.form)},{lemma}.{entry.pos}"
    out += "".join(f"+{f}" for f in entry.features)
    out += "".join(f":{i}" for i in entry.inflection)
    return out


def form_key(form: str) -> tuple[str, ...]:
    return tuple(t.surface for t in tokenize(form) if t.kind is not TokenKind.SPACE)


def _fold(surfaces: Iterable[str]) -> tuple[str, ...]:
    return tuple(s.casefold() for s in surfaces)


class _Node:
    __slots__ = ("children", "entries")

    def __init__(self) -> None:
        self.children: dict[str, _Node] = {}
        self.entries: list[DictEntry] = []


@dataclass
class Lexicon:
    """Token-keyed trie of dictionary entries, with a case-folded twin."""

    _root: _Node = field(default_factory=_Node, repr=False)
    _folded: _Node = field(default_factory=_Node, repr=False)
    _size: int = 0

    def add(self, entry: DictEntry) -> None:
        key = form_key(entry.form)
        if not key:
            raise ValueError(f"form {entry.form!r} has no tokens")
        for root, k in ((self._root, key), (self._folded, _fold(key))):
            node = root
            for part in k:
                node = node.children.setdefault(part, _Node())
            if root is self._root and not node.entries:
                self._size += 1
            node.entries.append(entry)

    def __len__(self) -> int:
        """Number of distinct keys."""
        return self._size

    def get(self, key: tuple[str, ...]) -> list[DictEntry]:
        return list(self._walk(self._root, key))

    def get_folded(self, key: tuple[str, ...]) -> list[DictEntry]:
        return list(self._walk(self._folded, _fold(key)))

    @staticmethod
    def _walk(root: _Node, key: tuple[str, ...]) -> Iterator[DictEntry]:
        node: _Node | None = root
        for part in key:
            node = node.children.get(part)
            if node is None:
                return
        yield from node.entries

    def keys(self) -> Iterator[tuple[str, ...]]:
        stack: list[tuple[tuple[str, ...], _Node]] = [((), self._root)]
        while stack:
            prefix, node = stack.pop()
            if node.entries:
                yield prefix
            for part, child in node.children.items():
                stack.append((prefix + (part,), child))

    def is_common_word(self, surface: str) -> bool:
        """Whether the case-folded surface is a non-proper dictionary word."""
        return any(not e.is_proper for e in self.get_folded((surface,)))

    def prefix_matches(
        self,
        tokens: list[Token],
        i: int,
        end: int | None = None,
        folded: bool = False,
        first: str | None = None,
    ) -> list[tuple[int, list[DictEntry]]]:
        """Walk the trie from token ``i``; return ``(length, entries)`` per hit.

        ``first`` replaces the surface of token ``i`` (used for elision probes).
        """
        end = len(tokens) if end is None else end
        node: _Node | None = self._folded if folded else self._root
        hits: list[tuple[int, list[DictEntry]]] = []
        j = i
        while j < end:
            tok = tokens[j]
            if tok.kind is TokenKind.SPACE:
                if j == i:
                    break
                j += 1
                continue
            part = first if j == i and first is not None else tok.surface
            if folded:
                part = part.casefold()
            node = node.children.get(part)
            if node is None:
                break
            j += 1
            if node.entries:
                hits.append((j - i, node.entries))
        return hits


def compile_lexicon(
    lines: Iterable[str], source: str | None = None, max_errors: int = 100, lexicon: Lexicon | None = None
) -> Lexicon:
    """Parse dictionary lines into a :class:`Lexicon`.

    Pass an existing ``lexicon`` to layer several dictionaries; entries
    always accumulate, nothing is overridden.
    """
    lex = Lexicon() if lexicon is None else lexicon
    errors: list[MalformedLine] = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if lineno == 1:
            line = line.lstrip("﻿")
        if not line.strip() or line.startswith("#"):
            continue
        try:
            lex.add(parse_delaf_line(line, lineno, source))
        except MalformedLine as exc:
            errors.append(exc)
            if len(errors) >= max_errors:
                raise DictionaryError(errors, aborted=True) from None
    if errors:
        raise DictionaryError(errors)
    return lex


def is_sentence_initial(tokens: list[Token], i: int) -> bool:
    """Heuristic: nothing but spaces before ``i``, or a terminator just before."""
    j = i - 1
    while j >= 0 and tokens[j].kind is TokenKind.SPACE:
        j -= 1
    return j < 0 or (tokens[j].kind is TokenKind.PUNCT and tokens[j].surface in TERMINATORS)


def _lookup(
    lexicon: Lexicon,
    tokens: list[Token],
    i: int,
    sentence_initial: bool,
    end: int | None,
    first: str | None = None,
) -> list[LexMatch]:
    tok = tokens[i]
    case = tok.case_class if first is None else case_class_of(first)
    found: dict[int, list[LexMatch]] = {}
    seen: set[tuple[int, DictEntry]] = set()
    for length, entries in lexicon.prefix_matches(tokens, i, end, first=first):
        for e in entries:
            found.setdefault(length, []).append(LexMatch(length, e))
            seen.add((length, e))
    if case is CaseClass.ALL_UPPER or (sentence_initial and case is CaseClass.UPPER_FIRST):
        for length, entries in lexicon.prefix_matches(tokens, i, end, folded=True, first=first):
            for e in entries:
                if (length, e) not in seen:
                    seen.add((length, e))
                    found.setdefault(length, []).append(LexMatch(length, e, case_folded=True))
    return [m for length in sorted(found, reverse=True) for m in found[length]]


def lookup(
    lexicon: Lexicon,
    tokens: list[Token],
    i: int,
    *,
    sentence_initial: bool | None = None,
    end: int | None = None,
) -> list[LexMatch]:
    """All dictionary matches starting at token ``i``, longest first.

    Exact matches come first at each length.  If the token at ``i`` is
    AllUpper, or UpperFirst at the start of a sentence, case-folded matches
    not already found exactly are appended, flagged ``case_folded``.
    ``sentence_initial`` is guessed from the preceding tokens when omitted.
    """
    if tokens[i].kind not in (TokenKind.WORD, TokenKind.NUMBER):
        return []
    if sentence_initial is None:
        sentence_initial = is_sentence_initial(tokens, i)
    return _lookup(lexicon, tokens, i, sentence_initial, end)


def lookup_elided(
    lexicon: Lexicon,
    tokens: list[Token],
    i: int,
    *,
    sentence_initial: bool | None = None,
    end: int | None = None,
) -> list[LexMatch]:
    """Like :func:`lookup`, falling back to the part after an internal apostrophe.

    The elided probe (``d'Orsay`` -> ``Orsay``) only runs when the whole
    token has no direct match, so ``N'Djamena`` keeps its own entry.
    """
    direct = lookup(lexicon, tokens, i, sentence_initial=sentence_initial, end=end)
    if direct:
        return direct
    tok = tokens[i]
    tail = elided_tail(tok.surface) if tok.kind is TokenKind.WORD else None
    if tail is None:
        return []
    if sentence_initial is None:
        sentence_initial = is_sentence_initial(tokens, i)
    return [m._replace(elided=True) for m in _lookup(lexicon, tokens, i, sentence_initial, end, first=tail)]


def match_mask(entry: DictEntry, mask: LexicalMask) -> bool:
    if mask.pos is not None and mask.pos != entry.pos:
        return False
    if mask.lemma is not None and mask.lemma != entry.lemma:
        return False
    codes = entry.codes
    return mask.required <= codes and not (mask.forbidden & codes)
