"""Rule-based named-entity extraction with electronic dictionaries and local grammars."""
from .grammar import Evidence, parse_grammar, parse_grammars
from .lexicon import DictEntry, LexicalMask, Lexicon, compile_lexicon, parse_delaf_line
from .output import emit_fiches, emit_inline, emit_stats, strip_inline
from .pipeline import (
    Annotation,
    ExtractionConfig,
    ExtractionResult,
    default_config,
    extract,
    load_config,
    pass_one,
    pass_two,
)
from .taxonomy import NON_RECONNU, NEType, Taxonomy, default_taxonomy, load_taxonomy
from .tokenizer import Token, split_sentences, tokenize

__version__ = "0.1.0"

__all__ = [
    "NON_RECONNU",
    "Annotation",
    "DictEntry",
    "Evidence",
    "ExtractionConfig",
    "ExtractionResult",
    "LexicalMask",
    "Lexicon",
    "NEType",
    "Taxonomy",
    "Token",
    "compile_lexicon",
    "default_config",
    "default_taxonomy",
    "emit_fiches",
    "emit_inline",
    "emit_stats",
    "extract",
    "load_config",
    "load_taxonomy",
    "parse_delaf_line",
    "parse_grammar",
    "parse_grammars",
    "pass_one",
    "pass_two",
    "split_sentences",
    "strip_inline",
    "tokenize",
]
