"""Command-line driver.

    nabla tokenize ARGUMENT_FILE
    nabla parse TOKEN ...
    nabla formula TOKEN ...
    nabla check ARGUMENT_FILE          (or: nabla check --tokens "John smile so ok")
    nabla lexicon validate LEXICON_FILE

Exit codes: 0 valid, 1 invalid, 2 unknown, 3 no parse, 4 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import terms as tm
from .categories import CategorySyntaxError, parse_category
from .lexicon import LexiconError, default_lexicon, load_lexicon
from .pipeline import (EXIT_CODES, Options, PipelineError, render_report, report_to_dict,
                       run_pipeline, run_tokens)
from .tokenizer import TokenizeError, TokenString, detokenize, parse_argument, tokenize
from .validity import DEFAULT_DEPTH, DEFAULT_MAX_SIZE

EXIT_USAGE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _category(text):
    try:
        return parse_category(text)
    except CategorySyntaxError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--lexicon", metavar="PATH", help="lexicon file (default: the bundled one)")
    shared.add_argument("--goal", type=_category, default=None, metavar="CAT",
                        help="goal category (default: Dot)")
    shared.add_argument("--max-model-size", type=_positive, default=DEFAULT_MAX_SIZE, metavar="N")
    shared.add_argument("--depth", type=_positive, default=DEFAULT_DEPTH, metavar="N",
                        help="instantiations per universal formula in the tableau")
    shared.add_argument("--all-derivations", action="store_true",
                        help="list every cut-free derivation, not one per reading")
    shared.add_argument("--no-simplify", action="store_true",
                        help="keep equalities and trivial truths in formulas")
    shared.add_argument("--strict", action="store_true",
                        help="an ambiguous argument is valid only if every reading is")
    shared.add_argument("--format", choices=("text", "json"), default="text")
    shared.add_argument("--ascii", action="store_true", help="ASCII output instead of Unicode")

    parser = _Parser(prog="nabla", description="Categorial grammar and validity checking for arguments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("tokenize", parents=[shared], help="argument file to token string")
    p.add_argument("file", help="argument file, or - for standard input")

    for name, text in (("parse", "token string to derivations"),
                       ("formula", "token string to terms and formulas")):
        p = sub.add_parser(name, parents=[shared], help=text)
        p.add_argument("tokens", nargs="+", help="tokens, separately or as one quoted string")

    p = sub.add_parser("check", parents=[shared], help="full pipeline with verdict")
    p.add_argument("file", nargs="?", help="argument file, or - for standard input")
    p.add_argument("--tokens", help="check a token string instead of an argument file")

    p = sub.add_parser("lexicon", help="lexicon tools")
    lsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    v = lsub.add_parser("validate", parents=[shared], help="type-check a lexicon file")
    v.add_argument("path")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _options(args) -> Options:
    lex = load_lexicon(_read(args.lexicon)) if args.lexicon else default_lexicon()
    opts = Options(lexicon=lex, depth=args.depth, max_model_size=args.max_model_size,
                   all_derivations=args.all_derivations, simplify=not args.no_simplify,
                   strict=args.strict)
    if args.goal is not None:
        opts.goal = args.goal
    return opts


def _emit(data, text: str, args):
    if args.format == "json":
        print(json.dumps(data, ensure_ascii=args.ascii, indent=2))
    else:
        print(text)


def _tokens(words: List[str]) -> TokenString:
    return TokenString(tuple(" ".join(words).split()))


def _cmd_tokenize(args, opts):
    tokens = tokenize(parse_argument(_read(args.file)), opts.lex())
    _emit({"tokens": str(tokens)}, str(tokens), args)
    return 0


def _cmd_parse(args, opts, with_formulas: bool):
    opts.check = False
    tokens = _tokens(args.tokens)
    try:
        argument = detokenize(tokens, opts.lex())
    except TokenizeError:
        argument = None  # other goal categories need not be arguments
    report = run_tokens(tokens, opts, argument)
    unicode = not args.ascii
    data = report_to_dict(report, unicode)
    for r in data["readings"]:
        r.pop("verdict")
        if not with_formulas:
            for key in ("formula", "simplified"):
                r.pop(key)
    data.pop("verdict")
    data["status"] = "parsed" if report.readings else "no parse"
    _emit(data, _parse_text(data, with_formulas), args)
    return 0 if report.readings else EXIT_CODES["no parse"]


def _parse_text(data, with_formulas):
    lines = [f"tokens: {data['tokens']}"]
    if not data["readings"]:
        lines.append("no parse")
    for i, r in enumerate(data["readings"], 1):
        lines += ["", f"reading {i}"]
        lines += ["  " + ln for ln in r["derivation_text"].splitlines()]
        lines.append(f"  lexical:    {r['lexical_term']}")
        lines.append(f"  term:       {r['term']}")
        if with_formulas:
            lines.append(f"  formula:    {r['formula']}")
            lines.append(f"  simplified: {r['simplified']}")
    return "\n".join(lines)


def _cmd_check(args, opts):
    if (args.file is None) == (args.tokens is None):
        raise _UsageError("check needs an argument file or --tokens, not both")
    if args.tokens is not None:
        tokens = _tokens([args.tokens])
        try:
            argument = detokenize(tokens, opts.lex())
        except TokenizeError as exc:
            raise PipelineError("tokenize", str(exc)) from None
        report = run_tokens(tokens, opts, argument)
    else:
        report = run_pipeline(_read(args.file), opts)
    data = report_to_dict(report, not args.ascii)
    _emit(data, render_report(data), args)
    return report.exit_code


def _cmd_lexicon(args, opts):
    lex = load_lexicon(_read(args.path))
    data = {"entries": len(lex.entries), "inflections": len(lex.inflections), "status": "ok"}
    _emit(data, f"ok: {data['entries']} entries, {data['inflections']} inflections", args)
    return 0


class _UsageError(Exception):
    pass


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "lexicon":
            return _cmd_lexicon(args, None)
        opts = _options(args)
        if args.command == "tokenize":
            return _cmd_tokenize(args, opts)
        if args.command in ("parse", "formula"):
            return _cmd_parse(args, opts, args.command == "formula")
        return _cmd_check(args, opts)
    except PipelineError as exc:
        print(f"nabla: {exc}", file=sys.stderr)
        return EXIT_CODES["unknown"] if exc.stage == "search" else EXIT_USAGE
    except (TokenizeError, LexiconError, tm.TermError, OSError, _UsageError) as exc:
        print(f"nabla: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
