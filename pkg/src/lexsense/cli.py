"""Command-line front end: ``lexsense extract|disambiguate|evaluate|stats``.

Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 dictionary error,
4 lexicon error, 5 rule-base error, 6 corpus or relation-file error,
7 gold or alignment error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import List, Optional

from .dictionary import Dictionary, DictionaryError, dictionary_stats, parse_dictionary
from .disambiguator import (AssignmentFormatError, DEFAULT_WEIGHTS, Disambiguator,
                            WeightOrderError, format_assignments, parse_weights, read_assignments)
from .evaluation import AlignmentError, GoldFormatError, evaluate, read_gold
from .parser import CorpusFormatError, read_relation_file, read_tagged_corpus
from .rulebase import RuleBaseFormatError, build_rulebase, dump_rulebase, parse_rulebase
from .semlex import LexiconError, load_lexicon
from .tagging import ExampleTagger, load_tag_lexicon

log = logging.getLogger("lexsense")

EXIT_IO, EXIT_USAGE, EXIT_DICT, EXIT_LEXICON, EXIT_RULES, EXIT_CORPUS, EXIT_EVAL = range(1, 8)

_CONFIG_KEYS = ("dict", "lexicon", "rules", "corpus", "relations", "gold", "assignments",
                "out", "weights", "jobs", "quiet", "tag_lexicon")


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def _write(path: Optional[str], text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


def _require(args, *names):
    for name in names:
        if not getattr(args, name):
            raise UsageError(f"{args.command} needs --{name.replace('_', '-')}")


def _dictionary(args) -> Dictionary:
    entries = []
    for path in args.dict:
        entries.extend(parse_dictionary(_read(path)))
    return Dictionary(entries)


def cmd_extract(args) -> int:
    _require(args, "dict", "lexicon")
    dictionary = _dictionary(args)
    semlex = load_lexicon(_read(args.lexicon))
    tag_lexicon = load_tag_lexicon(_read(args.tag_lexicon)) if args.tag_lexicon else None
    rb = build_rulebase(dictionary, semlex, tagger=ExampleTagger(dictionary, tag_lexicon))
    _write(args.out, dump_rulebase(rb))
    if not args.quiet:
        stats = dictionary_stats(dictionary, rb)
        sys.stderr.write(f"{stats}rules={rb.total} lexical={rb.lexical_count} "
                         f"semantic={rb.semantic_count} warnings={len(rb.warnings)}\n")
    return 0


def cmd_disambiguate(args) -> int:
    _require(args, "dict", "rules", "lexicon")
    if bool(args.corpus) == bool(args.relations):
        raise UsageError("disambiguate needs exactly one of --corpus and --relations")
    if args.jobs is not None and args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    weights = parse_weights(args.weights) if args.weights else dict(DEFAULT_WEIGHTS)
    dis = Disambiguator(parse_rulebase(_read(args.rules)), load_lexicon(_read(args.lexicon)),
                        _dictionary(args), weights)
    jobs = args.jobs or 1
    if args.corpus:
        results = dis.corpus(read_tagged_corpus(_read(args.corpus)), jobs)
    else:
        results = dis.relation_corpus(read_relation_file(_read(args.relations)), jobs)
    _write(args.out, format_assignments(results))
    if not args.quiet:
        counts = {}
        for sent in results:
            for a in sent:
                counts[str(a.method)] = counts.get(str(a.method), 0) + 1
        summary = " ".join(f"{k}={v}" for k, v in sorted(counts.items()))
        sys.stderr.write(f"sentences={len(results)} {summary}".rstrip() + "\n")
    return 0


def cmd_evaluate(args) -> int:
    _require(args, "gold", "assignments")
    report = evaluate(read_assignments(_read(args.assignments)), read_gold(_read(args.gold)))
    _write(args.out, report.render())
    return 0


def cmd_stats(args) -> int:
    _require(args, "rules", "dict")
    rb = parse_rulebase(_read(args.rules))
    stats = dictionary_stats(_dictionary(args), rb)
    _write(args.out, f"{stats}rules={rb.total} lexical={rb.lexical_count} "
                     f"semantic={rb.semantic_count}\n")
    return 0


COMMANDS = {"extract": cmd_extract, "disambiguate": cmd_disambiguate,
            "evaluate": cmd_evaluate, "stats": cmd_stats}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lexsense",
                                     description="Dictionary-rule word sense disambiguation.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__name__.replace("cmd_", ""))
        p.add_argument("--config", help="JSON file with default option values")
        p.add_argument("--dict", action="append", help="dictionary XML (repeatable)")
        p.add_argument("--lexicon", help="semantic class lexicon")
        p.add_argument("--rules", help="rule-base file")
        p.add_argument("--tag-lexicon", help="surface-form tag lexicon for examples")
        p.add_argument("--corpus", help="tagged corpus")
        p.add_argument("--relations", help="relation file")
        p.add_argument("--gold", help="gold annotation file")
        p.add_argument("--assignments", help="assignment file produced by disambiguate")
        p.add_argument("--out", help="output path, '-' for stdout (default)")
        p.add_argument("--weights", help="weight overrides, e.g. co=6,lc=5,li=4")
        p.add_argument("--jobs", type=int, help="worker processes for disambiguate")
        p.add_argument("--quiet", action="store_true", default=None,
                       help="no summary on stderr")
    return parser


def _apply_config(args):
    if not args.config:
        return
    try:
        with open(args.config, encoding="utf-8") as f:
            config = json.load(f)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {args.config}: {exc}") from None
    if not isinstance(config, dict):
        raise UsageError(f"config {args.config}: expected a JSON object")
    unknown = sorted(set(config) - set(_CONFIG_KEYS))
    if unknown:
        raise UsageError(f"config {args.config}: unknown keys {', '.join(unknown)}")
    for key, value in config.items():
        if getattr(args, key) is None:
            if key == "dict" and isinstance(value, str):
                value = [value]
            setattr(args, key, value)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        _apply_config(args)
        return COMMANDS[args.command](args)
    except (UsageError, WeightOrderError) as exc:
        code, msg = EXIT_USAGE, exc
    except DictionaryError as exc:
        code, msg = EXIT_DICT, exc
    except LexiconError as exc:
        code, msg = EXIT_LEXICON, exc
    except RuleBaseFormatError as exc:
        code, msg = EXIT_RULES, exc
    except CorpusFormatError as exc:
        code, msg = EXIT_CORPUS, exc
    except (AlignmentError, GoldFormatError, AssignmentFormatError) as exc:
        code, msg = EXIT_EVAL, exc
    except OSError as exc:
        code, msg = EXIT_IO, exc
    sys.stderr.write(f"lexsense {args.command}: {msg}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
