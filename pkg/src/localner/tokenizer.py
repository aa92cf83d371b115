"""Lossless tokenization and sentence splitting.

Every character of the input lands in exactly one token, so joining the
token surfaces gives back the original text.  Apostrophes between two
letters stay inside the word (``N'Djamena``, ``d'Orsay``); splitting
elisions is left to the lexicon.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

__all__ = [
    "APOSTROPHES",
    "CaseClass",
    "Sentence",
    "Token",
    "TokenKind",
    "is_capitalized",
    "split_sentences",
    "tokenize",
]

APOSTROPHES = frozenset("'’")
TERMINATORS = frozenset(".!?…")


class TokenKind(enum.Enum):
    WORD = "Word"
    NUMBER = "Number"
    PUNCT = "Punct"
    SPACE = "Space"


class CaseClass(enum.Enum):
    LOWER = "Lower"
    UPPER_FIRST = "UpperFirst"
    ALL_UPPER = "AllUpper"
    MIXED = "Mixed"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int
    kind: TokenKind
    case_class: CaseClass

    @property
    def is_word(self) -> bool:
        return self.kind is TokenKind.WORD

    @property
    def is_space(self) -> bool:
        return self.kind is TokenKind.SPACE

    def __repr__(self) -> str:
        return f"Token({self.surface!r}, {self.start}, {self.end}, {self.kind.value}, {self.case_class.value})"


@dataclass(frozen=True)
class Sentence:
    """Half-open range ``[start, end)`` of token indices."""

    start: int
    end: int

    @property
    def token_range(self) -> range:
        return range(self.start, self.end)


def case_class_of(word: str) -> CaseClass:
    letters = [c for c in word if c.isalpha()]
    if not letters:
        return CaseClass.MIXED
    if all(c.isupper() for c in letters):
        return CaseClass.ALL_UPPER
    if not any(c.isupper() for c in letters):
        return CaseClass.LOWER
    first, rest = letters[0], letters[1:]
    if first.isupper() and rest and not any(c.isupper() for c in rest) and any(c.islower() for c in rest):
        return CaseClass.UPPER_FIRST
    return CaseClass.MIXED


def is_capitalized(token: Token) -> bool:
    """True for words that read as proper-name material.

    Besides UpperFirst and AllUpper this accepts apostrophe-internal words
    whose first letter, or whose part after the apostrophe, is uppercase
    (``N'Djamena``, ``d'Ivoire``).
    """
    if token.kind is not TokenKind.WORD:
        return False
    if token.case_class in (CaseClass.UPPER_FIRST, CaseClass.ALL_UPPER):
        return True
    if token.case_class is CaseClass.MIXED:
        if token.surface[0].isupper():
            return True
        tail = elided_tail(token.surface)
        return bool(tail) and tail[0].isupper()
    return False


def elided_tail(surface: str) -> str | None:
    """Return the part after the first internal apostrophe, if any."""
    for k, c in enumerate(surface):
        if c in APOSTROPHES and 0 < k < len(surface) - 1:
            return surface[k + 1:]
    return None


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    n = len(text)
    i = 0
    while i < n:
        c = text[i]
        j = i + 1
        if c.isalpha():
            while j < n:
                d = text[j]
                if d.isalpha():
                    j += 1
                elif d in APOSTROPHES and j + 1 < n and text[j + 1].isalpha():
                    j += 2
                else:
                    break
            surface = text[i:j]
            tokens.append(Token(surface, i, j, TokenKind.WORD, case_class_of(surface)))
        elif c.isdecimal():
            while j < n and text[j].isdecimal():
                j += 1
            tokens.append(Token(text[i:j], i, j, TokenKind.NUMBER, CaseClass.NOT_APPLICABLE))
        elif c.isspace():
            while j < n and text[j].isspace():
                j += 1
            tokens.append(Token(text[i:j], i, j, TokenKind.SPACE, CaseClass.NOT_APPLICABLE))
        else:
            tokens.append(Token(c, i, j, TokenKind.PUNCT, CaseClass.NOT_APPLICABLE))
        i = j
    return tokens


def _is_paragraph_break(token: Token) -> bool:
    return token.kind is TokenKind.SPACE and token.surface.count("\n") >= 2


def split_sentences(tokens: list[Token]) -> list[Sentence]:
    """Split after a terminator followed by whitespace and a capitalized word,
    and after blank lines."""
    sentences: list[Sentence] = []
    start = 0
    n = len(tokens)
    for k in range(n - 1):
        tok = tokens[k]
        nxt = tokens[k + 1]
        if _is_paragraph_break(tok):
            brk = k + 1
        elif (
            nxt.kind is TokenKind.SPACE
            and tok.kind is TokenKind.PUNCT
            and tok.surface in TERMINATORS
            and k + 2 < n
            and tokens[k + 2].case_class in (CaseClass.UPPER_FIRST, CaseClass.ALL_UPPER)
        ):
            brk = k + 2
        else:
            continue
        if brk > start:
            sentences.append(Sentence(start, brk))
            start = brk
    if start < n:
        sentences.append(Sentence(start, n))
    return sentences
