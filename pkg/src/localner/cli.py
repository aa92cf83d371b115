"""Command-line entry point.

    localner check --dict D.dic --taxonomy T.cfg --grammar G.grm
    localner run   --dict D.dic --taxonomy T.cfg --grammar G.grm [--mode inline|fiches|stats|all]
                   [--keep-unrecognized] [--out PATH] [INPUT]

Exit status: 0 success, 1 resource or I/O error, 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .grammar import GrammarError, parse_grammars
from .lexicon import DictionaryError, Lexicon, compile_lexicon
from .output import emit_fiches, emit_inline, emit_stats
from .pipeline import ExtractionConfig, extract
from .taxonomy import Taxonomy, TaxonomyError, load_taxonomy

EXIT_OK, EXIT_RESOURCE, EXIT_USAGE = 0, 1, 2
MODES = ("inline", "fiches", "stats", "all")


@dataclass
class RunConfig:
    dictionary_paths: list[Path]
    taxonomy_path: Path
    grammar_paths: list[Path]
    input_path: Path | None = None
    output_mode: str = "inline"
    include_unrecognized: bool = False
    out: Path | None = None


class ResourceError(Exception):
    def __init__(self, diagnostics: list[str]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(diagnostics))


def _read(path: Path) -> str:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ResourceError([f"{path}: cannot read: {exc}"]) from None


def build(config: RunConfig) -> ExtractionConfig:
    """Load every resource, collecting all diagnostics before failing."""
    diags: list[str] = []
    taxonomy: Taxonomy | None = None
    try:
        taxonomy = load_taxonomy(_read(config.taxonomy_path), source=str(config.taxonomy_path))
    except TaxonomyError as exc:
        diags.append(str(exc) if exc.lineno is not None else f"{config.taxonomy_path}: {exc}")
    except ResourceError as exc:
        diags.extend(exc.diagnostics)

    lexicon = Lexicon()
    for p in config.dictionary_paths:
        try:
            compile_lexicon(_read(p).splitlines(), source=str(p), lexicon=lexicon)
        except DictionaryError as exc:
            diags.extend(str(e) for e in exc.errors)
        except ResourceError as exc:
            diags.extend(exc.diagnostics)

    grammar = None
    if taxonomy is not None:
        try:
            sources = [(str(p), _read(p)) for p in config.grammar_paths]
            grammar = parse_grammars(sources, taxonomy)
        except GrammarError as exc:
            diags.append(str(exc))
        except ResourceError as exc:
            diags.extend(exc.diagnostics)
    if diags:
        raise ResourceError(diags)
    return ExtractionConfig(lexicon, taxonomy, grammar)


def cmd_check(config: RunConfig) -> int:
    try:
        cfg = build(config)
    except ResourceError as exc:
        for d in exc.diagnostics:
            print(d, file=sys.stderr)
        return EXIT_RESOURCE
    n_rules = len(cfg.grammar.rules())
    print(
        f"ok: {len(cfg.lexicon)} dictionary keys, {len(cfg.taxonomy.classes)} classes, "
        f"{len(cfg.grammar.graphs)} graphs, {n_rules} rules, {len(cfg.grammar.context_rules)} context rules"
    )
    return EXIT_OK


def _write(path: Path | None, data: str) -> None:
    if path is None:
        sys.stdout.flush()
        sys.stdout.buffer.write(data.encode("utf-8"))
        sys.stdout.buffer.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
    except OSError as exc:
        raise ResourceError([f"{path}: cannot write: {exc}"]) from None


def cmd_run(config: RunConfig) -> int:
    try:
        cfg = build(config)
        if config.input_path is None:
            try:
                text = sys.stdin.buffer.read().decode("utf-8")
            except UnicodeDecodeError as exc:
                raise ResourceError([f"<stdin>: cannot read: {exc}"]) from None
        else:
            text = _read(config.input_path)
        result = extract(text, cfg)
        keep = config.include_unrecognized
        mode = config.output_mode
        if mode == "all":
            out = config.out
            try:
                out.mkdir(parents=True, exist_ok=True)
            except OSError as exc:
                raise ResourceError([f"{out}: cannot create directory: {exc}"]) from None
            _write(out / "inline.txt", emit_inline(text, result.annotations, keep))
            _write(out / "fiches.jsonl", emit_fiches(result.annotations, cfg.taxonomy, keep))
            _write(out / "stats.txt", emit_stats(result))
        elif mode == "inline":
            _write(config.out, emit_inline(text, result.annotations, keep))
        elif mode == "fiches":
            _write(config.out, emit_fiches(result.annotations, cfg.taxonomy, keep))
        else:
            _write(config.out, emit_stats(result))
    except ResourceError as exc:
        for d in exc.diagnostics:
            print(d, file=sys.stderr)
        return EXIT_RESOURCE
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dict", dest="dicts", action="append", type=Path, required=True, metavar="PATH",
                        help="DELAF dictionary file (repeatable)")
    common.add_argument("--taxonomy", type=Path, required=True, metavar="PATH", help="typology configuration")
    common.add_argument("--grammar", dest="grammars", action="append", type=Path, required=True, metavar="PATH",
                        help="local grammar file (repeatable)")

    parser = argparse.ArgumentParser(prog="localner", description="Rule-based named-entity extraction.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="validate resources and exit")
    run = sub.add_parser("run", parents=[common], help="annotate a document")
    run.add_argument("input", nargs="?", type=Path, help="input text file (default: standard input)")
    run.add_argument("--mode", choices=MODES, default="inline")
    run.add_argument("--keep-unrecognized", action="store_true",
                     help="also output NonReconnu sequences left after the second pass")
    run.add_argument("--out", type=Path, metavar="PATH",
                     help="output file; with --mode all, an output directory")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    config = RunConfig(
        dictionary_paths=args.dicts,
        taxonomy_path=args.taxonomy,
        grammar_paths=args.grammars,
    )
    if args.command == "check":
        return cmd_check(config)
    if args.mode == "all" and args.out is None:
        parser.error("--mode all writes three files and needs --out DIRECTORY")
    config.input_path = args.input
    config.output_mode = args.mode
    config.include_unrecognized = args.keep_unrecognized
    config.out = args.out
    return cmd_run(config)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
