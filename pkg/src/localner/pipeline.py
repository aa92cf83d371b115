"""Two-pass document extraction.

Pass one applies the grammars, retypes matches by right context, stores
every recognized entity in a document-local lexicon and marks the
remaining capitalized word runs as ``NonReconnu``.  Pass two looks those
runs up in the stored entities and copies the label over when they match.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from .grammar import (
    ContextRule,
    Evidence,
    Grammar,
    Match,
    apply_context_rules,
    apply_grammars,
    parse_grammars,
)
from .lexicon import Lexicon, compile_lexicon
from .taxonomy import NON_RECONNU, NEType, Taxonomy, load_taxonomy
from .tokenizer import CaseClass, Sentence, Token, TokenKind, is_capitalized, split_sentences, tokenize

__all__ = [
    "Annotation",
    "DynamicLexicon",
    "ExtractionConfig",
    "ExtractionResult",
    "default_config",
    "extract",
    "load_config",
    "normalize_key",
    "pass_one",
    "pass_two",
    "sample_paths",
    "tally",
]

PERSON = "Person"


@dataclass
class Annotation:
    start: int
    end: int
    surface: str
    ne_type: NEType
    attributes: dict[str, str] = field(default_factory=dict)
    evidence: Evidence | None = None
    pass_no: int = 1
    # token span, kept for key computation
    tok_start: int = 0
    tok_end: int = 0

    @property
    def recognized(self) -> bool:
        return self.ne_type != NON_RECONNU


@dataclass
class DynEntry:
    ne_type: NEType
    attributes: dict[str, str]
    count: int
    first_offset: int


class DynamicLexicon:
    """Entities recognized in pass one, keyed by normalized token surfaces."""

    def __init__(self) -> None:
        self.entries: dict[tuple[str, ...], list[DynEntry]] = {}

    def add(self, key: tuple[str, ...], ne_type: NEType, attributes: dict[str, str], offset: int) -> None:
        bucket = self.entries.setdefault(key, [])
        for e in bucket:
            if e.ne_type == ne_type:
                e.count += 1
                e.first_offset = min(e.first_offset, offset)
                return
        bucket.append(DynEntry(ne_type, dict(attributes), 1, offset))

    def get(self, key: tuple[str, ...]) -> list[DynEntry]:
        return self.entries.get(key, [])

    def __contains__(self, key: tuple[str, ...]) -> bool:
        return key in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def keys(self) -> list[tuple[str, ...]]:
        return list(self.entries)


@dataclass
class ExtractionConfig:
    lexicon: Lexicon
    taxonomy: Taxonomy
    grammar: Grammar
    context_rules: list[ContextRule] | None = None

    @property
    def rules(self) -> list[ContextRule]:
        return self.grammar.context_rules if self.context_rules is None else self.context_rules


@dataclass
class ExtractionResult:
    annotations: list[Annotation]
    stats: dict[str, int]
    dynamic_lexicon: DynamicLexicon
    pass_stats: dict[str, tuple[int, int]] = field(default_factory=dict)

    @property
    def typed(self) -> list[Annotation]:
        return [a for a in self.annotations if a.recognized]


def normalize_key(tokens: Sequence[Token]) -> tuple[str, ...]:
    """Non-space surfaces; all-caps words become title case."""
    out = []
    for t in tokens:
        if t.kind is TokenKind.SPACE:
            continue
        out.append(t.surface.title() if t.case_class is CaseClass.ALL_UPPER else t.surface)
    return tuple(out)


def _expansion(match: Match, taxonomy: Taxonomy, ne_type: NEType) -> str | None:
    if "expansion" not in taxonomy.attributes(ne_type.class_name):
        return None
    for pos, length, entry in match.lexical:
        if pos == match.entity_start and pos + length == match.entity_end:
            if "Sigle" in entry.features and entry.lemma != entry.form:
                return entry.lemma
    return None


def _to_annotation(match: Match, text: str, tokens: Sequence[Token], taxonomy: Taxonomy) -> Annotation:
    ne_type = match.ne_type
    schema = taxonomy.attributes(ne_type.class_name)
    attrs: dict[str, str] = {}
    for attr, var in match.rule.attribute_bindings.items():
        cap = match.captures.get(var)
        # a retyped match keeps only attributes its new class declares
        if cap is not None and attr in schema:
            attrs[attr] = cap.surface
    exp = _expansion(match, taxonomy, ne_type)
    if exp is not None:
        attrs["expansion"] = exp
    start = tokens[match.entity_start].start
    end = tokens[match.entity_end - 1].end
    assert taxonomy.has_path(ne_type.class_name, ne_type.type_path), ne_type
    return Annotation(
        start=start,
        end=end,
        surface=text[start:end],
        ne_type=ne_type,
        attributes=attrs,
        evidence=match.evidence,
        pass_no=1,
        tok_start=match.entity_start,
        tok_end=match.entity_end,
    )


def _unrecognized_runs(
    text: str,
    tokens: Sequence[Token],
    sentences: Sequence[Sentence],
    covered: list[bool],
    lexicon: Lexicon,
) -> list[Annotation]:
    out: list[Annotation] = []
    for sent in sentences:
        first = sent.start
        while first < sent.end and tokens[first].kind is TokenKind.SPACE:
            first += 1
        run: list[int] = []

        def flush() -> None:
            if not run:
                return
            # a capitalized common word opening the sentence is ordinary
            # capitalization, not part of the unknown name that may follow
            if (
                run[0] == first
                and tokens[first].case_class is CaseClass.UPPER_FIRST
                and lexicon.is_common_word(tokens[first].surface)
            ):
                del run[0]
                if not run:
                    return
            a, b = run[0], run[-1] + 1
            start, end = tokens[a].start, tokens[b - 1].end
            out.append(Annotation(start, end, text[start:end], NON_RECONNU, {}, None, 1, a, b))
            run.clear()

        for k in range(sent.start, sent.end):
            tok = tokens[k]
            if tok.kind is TokenKind.SPACE:
                continue
            if not covered[k] and is_capitalized(tok):
                run.append(k)
            else:
                flush()
        flush()
    return out


def pass_one(
    text: str,
    grammar: Grammar,
    context_rules: Sequence[ContextRule] | None,
    lexicon: Lexicon,
    taxonomy: Taxonomy,
) -> tuple[list[Annotation], DynamicLexicon]:
    tokens = tokenize(text)
    sentences = split_sentences(tokens)
    matches = apply_grammars(grammar, tokens, sentences, lexicon)
    rules = grammar.context_rules if context_rules is None else context_rules
    matches = apply_context_rules(rules, matches, tokens, sentences, lexicon, grammar)

    dyn = DynamicLexicon()
    annotations: list[Annotation] = []
    covered = [False] * len(tokens)
    for m in matches:
        ann = _to_annotation(m, text, tokens, taxonomy)
        annotations.append(ann)
        dyn.add(normalize_key(tokens[ann.tok_start:ann.tok_end]), ann.ne_type, ann.attributes, ann.start)
        for k in range(m.start, m.end):
            covered[k] = True

    annotations.extend(_unrecognized_runs(text, tokens, sentences, covered, lexicon))
    annotations.sort(key=lambda a: a.start)
    return annotations, dyn


def _best(cands: Iterable[DynEntry]) -> DynEntry | None:
    ranked = sorted(cands, key=lambda e: (-e.count, e.first_offset))
    return ranked[0] if ranked else None


def pass_two(text: str, pass1_annotations: Sequence[Annotation], dyn: DynamicLexicon) -> list[Annotation]:
    tokens = tokenize(text)
    out: list[Annotation] = []
    person_keys = [k for k, v in dyn.entries.items() if any(e.ne_type.class_name == PERSON for e in v)]
    for ann in pass1_annotations:
        if ann.recognized:
            out.append(ann)
            continue
        key = normalize_key(tokens[ann.tok_start:ann.tok_end])
        winner = _best(dyn.get(key))
        if winner is None:
            winner = _best(
                e
                for k in person_keys
                if len(k) > len(key) and k[-len(key):] == key
                for e in dyn.get(k)
                if e.ne_type.class_name == PERSON
            )
        if winner is None:
            out.append(ann)
            continue
        out.append(
            Annotation(
                start=ann.start,
                end=ann.end,
                surface=ann.surface,
                ne_type=winner.ne_type,
                attributes=dict(winner.attributes),
                evidence=Evidence.PROPAGATED,
                pass_no=2,
                tok_start=ann.tok_start,
                tok_end=ann.tok_end,
            )
        )
    return out


def tally(annotations: Iterable[Annotation], taxonomy: Taxonomy) -> tuple[dict[str, int], dict[str, tuple[int, int]]]:
    totals = {name: 0 for name in taxonomy.class_names()}
    by_pass = {name: [0, 0] for name in taxonomy.class_names()}
    for a in annotations:
        if not a.recognized:
            continue
        totals[a.ne_type.class_name] += 1
        by_pass[a.ne_type.class_name][a.pass_no - 1] += 1
    return totals, {k: (v[0], v[1]) for k, v in by_pass.items()}


def extract(text: str, config: ExtractionConfig) -> ExtractionResult:
    first, dyn = pass_one(text, config.grammar, config.rules, config.lexicon, config.taxonomy)
    final = pass_two(text, first, dyn)
    final.sort(key=lambda a: a.start)
    stats, pass_stats = tally(final, config.taxonomy)
    return ExtractionResult(final, stats, dyn, pass_stats)


def load_config(
    dictionary_paths: Iterable[str | Path],
    taxonomy_path: str | Path,
    grammar_paths: Iterable[str | Path],
) -> ExtractionConfig:
    """Build a config from files; raises the first resource error met."""
    taxonomy_path = Path(taxonomy_path)
    taxonomy = load_taxonomy(taxonomy_path.read_text(encoding="utf-8"), source=str(taxonomy_path))
    lexicon = Lexicon()
    for p in dictionary_paths:
        with open(p, encoding="utf-8") as fh:
            compile_lexicon(fh, source=str(p), lexicon=lexicon)
    grammar = parse_grammars(
        [(str(p), Path(p).read_text(encoding="utf-8")) for p in grammar_paths], taxonomy
    )
    return ExtractionConfig(lexicon, taxonomy, grammar)


SAMPLE_DICTIONARIES = ("general.dic", "prenoms.dic", "toponymes.dic", "professions.dic", "sigles.dic")


def sample_paths() -> tuple[list[Path], Path, list[Path]]:
    """Paths of the shipped sample dictionaries, taxonomy and grammar."""
    from importlib import resources

    root = Path(str(resources.files("localner.data")))
    return [root / n for n in SAMPLE_DICTIONARIES], root / "taxonomy.cfg", [root / "ner.grm"]


def default_config() -> ExtractionConfig:
    dicts, tax, grammars = sample_paths()
    return load_config(dicts, tax, grammars)


