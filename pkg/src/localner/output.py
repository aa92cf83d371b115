"""Serializers: inline-tagged text, fiche records and per-class statistics.

Inline format: each entity is wrapped as ``{type=CLASS.PATH}surface{/}``.
A literal ``{`` in the source is written ``{{`` so that
:func:`strip_inline` restores the input exactly.

Fiche format: JSON Lines, one object per entity with keys in this order:
``surface, start, end, class, type, attributes, evidence, pass``.
"""
from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass, field

from .pipeline import Annotation, ExtractionResult
from .taxonomy import NON_RECONNU, Taxonomy

__all__ = ["Fiche", "SchemaViolation", "emit_fiches", "emit_inline", "emit_stats", "strip_inline", "to_fiche"]

CLOSE = "{/}"


class SchemaViolation(ValueError):
    pass


@dataclass
class Fiche:
    surface: str
    start: int
    end: int
    class_name: str
    type_path: list[str]
    attributes: dict[str, str] = field(default_factory=dict)
    evidence: str = ""
    pass_no: int = 1

    def to_json(self) -> str:
        record = {
            "surface": self.surface,
            "start": self.start,
            "end": self.end,
            "class": self.class_name,
            "type": self.type_path,
            "attributes": self.attributes,
            "evidence": self.evidence,
            "pass": self.pass_no,
        }
        return json.dumps(record, ensure_ascii=False)


def _visible(annotations: Sequence[Annotation], include_unrecognized: bool) -> list[Annotation]:
    return sorted(
        (a for a in annotations if include_unrecognized or a.ne_type != NON_RECONNU),
        key=lambda a: a.start,
    )


def _escape(s: str) -> str:
    return s.replace("{", "{{")


def emit_inline(text: str, annotations: Sequence[Annotation], include_unrecognized: bool = False) -> str:
    parts: list[str] = []
    pos = 0
    for a in _visible(annotations, include_unrecognized):
        if a.start < pos:
            raise ValueError(f"overlapping annotations at offset {a.start}")
        parts.append(_escape(text[pos:a.start]))
        parts.append("{type=" + a.ne_type.label + "}")
        parts.append(_escape(text[a.start:a.end]))
        parts.append(CLOSE)
        pos = a.end
    parts.append(_escape(text[pos:]))
    return "".join(parts)


def strip_inline(tagged: str) -> str:
    """Remove delimiters and undo brace escaping."""
    out: list[str] = []
    k = 0
    n = len(tagged)
    while k < n:
        c = tagged[k]
        if c == "{":
            if tagged.startswith("{{", k):
                out.append("{")
                k += 2
                continue
            close = tagged.find("}", k)
            if close < 0:
                raise ValueError(f"unterminated delimiter at {k}")
            k = close + 1
            continue
        out.append(c)
        k += 1
    return "".join(out)


def to_fiche(a: Annotation, taxonomy: Taxonomy) -> Fiche:
    if a.ne_type == NON_RECONNU:
        schema: dict[str, str] = {}
    else:
        schema = taxonomy.attributes(a.ne_type.class_name)
    unknown = set(a.attributes) - set(schema)
    if unknown:
        raise SchemaViolation(f"{sorted(unknown)} not in the {a.ne_type.class_name} schema")
    attrs = {name: a.attributes[name] for name in schema if name in a.attributes}
    return Fiche(
        surface=a.surface,
        start=a.start,
        end=a.end,
        class_name=a.ne_type.class_name,
        type_path=list(a.ne_type.type_path),
        attributes=attrs,
        evidence=a.evidence.value if a.evidence is not None else "None",
        pass_no=a.pass_no,
    )


def emit_fiches(annotations: Sequence[Annotation], taxonomy: Taxonomy, include_unrecognized: bool = False) -> str:
    return "".join(to_fiche(a, taxonomy).to_json() + "\n" for a in _visible(annotations, include_unrecognized))


def emit_stats(result: ExtractionResult) -> str:
    """One line per class: ``NAME pass1 pass2 total``, then a ``TOTAL`` line."""
    lines = []
    t1 = t2 = 0
    for name, (p1, p2) in result.pass_stats.items():
        lines.append(f"{name} {p1} {p2} {p1 + p2}")
        t1 += p1
        t2 += p2
    lines.append(f"TOTAL {t1} {t2} {t1 + t2}")
    return "\n".join(lines) + "\n"
