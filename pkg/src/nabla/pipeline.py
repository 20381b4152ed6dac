"""From argument text to verdict: tokenize, derive, expand, simplify, check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from . import terms as tm
from .calculus import (MAX_EXPLORED, Derivation, SearchLimitError, UnknownTokenError,
                       derivation_to_dict, derive_string, render_derivation)
from .categories import DOT, Category
from .lexicon import Lexicon, default_lexicon
from .logic import (Formula, LogicError, expand, render_formula, simplify, tidy_variables,
                    to_formula)
from .tokenizer import Argument, TokenizeError, TokenString, parse_argument, tokenize
from .validity import (DEFAULT_DEPTH, DEFAULT_MAX_INTERPRETATIONS, DEFAULT_MAX_SIZE, Invalid,
                       Model, Unknown, Valid, Verdict, check, render_model)

__all__ = ["Options", "ReadingReport", "PipelineReport", "PipelineError", "run_pipeline",
           "run_tokens", "overall_verdict", "EXIT_CODES", "report_to_dict", "render_report"]

EXIT_CODES = {"valid": 0, "invalid": 1, "unknown": 2, "no parse": 3}


class PipelineError(Exception):
    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


@dataclass
class Options:
    lexicon: Optional[Lexicon] = None
    goal: Category = DOT
    depth: int = DEFAULT_DEPTH
    max_model_size: int = DEFAULT_MAX_SIZE
    max_interpretations: int = DEFAULT_MAX_INTERPRETATIONS
    max_explored: int = MAX_EXPLORED
    all_derivations: bool = False
    simplify: bool = True
    strict: bool = False
    check: bool = True

    def lex(self) -> Lexicon:
        return self.lexicon if self.lexicon is not None else default_lexicon()


@dataclass
class ReadingReport:
    derivation: Derivation
    lexical_term: tm.Term
    term: tm.Term
    formula: Formula
    simplified: Formula
    verdict: Optional[Verdict] = None


@dataclass
class PipelineReport:
    argument: Optional[Argument]
    tokens: TokenString
    readings: List[ReadingReport] = field(default_factory=list)
    verdict: Optional[Verdict] = None
    status: str = "no parse"

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


def overall_verdict(verdicts: List[Verdict], strict: bool = False) -> Optional[Verdict]:
    """Combine per-reading verdicts.

    Charitable: valid if some reading is, invalid if all are.  Strict: valid
    only if all are, invalid if some is.  Otherwise unknown.
    """
    if not verdicts:
        return None
    valid = [v for v in verdicts if isinstance(v, Valid)]
    invalid = [v for v in verdicts if isinstance(v, Invalid)]
    if strict:
        if invalid:
            return invalid[0]
        if len(valid) == len(verdicts):
            return Valid()
    else:
        if valid:
            return Valid()
        if len(invalid) == len(verdicts):
            return invalid[0]
    reasons = "; ".join(v.resources for v in verdicts if isinstance(v, Unknown))
    return Unknown(reasons or "readings disagree")


def run_tokens(tokens: TokenString, options: Optional[Options] = None,
               argument: Optional[Argument] = None) -> PipelineReport:
    options = options or Options()
    lex = options.lex()
    report = PipelineReport(argument, tokens)
    try:
        readings = derive_string(tokens.tokens, lex, options.goal, options.max_explored,
                                 all_derivations=options.all_derivations)
    except UnknownTokenError as exc:
        raise PipelineError("parse", str(exc)) from None
    except SearchLimitError as exc:
        raise PipelineError("search", str(exc)) from None
    cache = {}
    for r in readings:
        try:
            formula = to_formula(expand(r.term))
        except (LogicError, tm.TermError) as exc:
            raise PipelineError("logic", str(exc)) from None
        simplified = simplify(formula) if options.simplify else formula
        rr = ReadingReport(r.derivation, r.lexical_term, r.term,
                           tidy_variables(formula), tidy_variables(simplified))
        if options.check:
            if rr.simplified not in cache:
                cache[rr.simplified] = check(rr.simplified, options.depth, options.max_model_size,
                                             options.max_interpretations)
            rr.verdict = cache[rr.simplified]
        report.readings.append(rr)
    if report.readings and options.check:
        report.verdict = overall_verdict([r.verdict for r in report.readings], options.strict)
        report.status = report.verdict.name
    elif report.readings:
        report.status = "unknown"
    return report


def run_pipeline(argument_text: str, options: Optional[Options] = None) -> PipelineReport:
    """Run the whole chain on an argument in the ``---`` text format."""
    options = options or Options()
    try:
        argument = parse_argument(argument_text)
        tokens = tokenize(argument, options.lex())
    except TokenizeError as exc:
        raise PipelineError("tokenize", str(exc)) from None
    return run_tokens(tokens, options, argument)


# ------------------------------------------------------------------ output

def _verdict_dict(v: Optional[Verdict], unicode: bool = True) -> Optional[dict]:
    if v is None:
        return None
    out = {"verdict": v.name, "mark": v.symbol if unicode else v.ascii_symbol}
    if isinstance(v, Invalid):
        out["countermodel"] = v.countermodel.to_dict()
    if isinstance(v, Unknown):
        out["resources"] = v.resources
    return out


def report_to_dict(report: PipelineReport, unicode: bool = True, derivations: bool = True) -> dict:
    """Machine-readable report; the text output is rendered from the same record."""
    arg = report.argument
    out = {
        "argument": None if arg is None else {"premises": list(arg.premises),
                                              "conclusions": list(arg.conclusions)},
        "tokens": str(report.tokens),
        "status": report.status,
        "verdict": _verdict_dict(report.verdict, unicode),
        "readings": [],
    }
    for r in report.readings:
        item = {
            "lexical_term": tm.render(r.lexical_term, unicode),
            "term": tm.render(r.term, unicode),
            "formula": render_formula(r.formula, unicode),
            "simplified": render_formula(r.simplified, unicode),
            "verdict": _verdict_dict(r.verdict, unicode),
        }
        if derivations:
            item["derivation"] = derivation_to_dict(r.derivation, unicode)
            item["derivation_text"] = render_derivation(r.derivation, unicode)
        out["readings"].append(item)
    return out


def _verdict_text(v: dict) -> List[str]:
    lines = [f"verdict: {v['mark']} {v['verdict']}"]
    if "countermodel" in v:
        m = v["countermodel"]
        model = Model(m["domain_size"], m["constants"],
                      {k: frozenset(tuple(r) for r in rows) for k, rows in m["predicates"].items()})
        lines.append("countermodel:")
        lines += ["  " + ln for ln in render_model(model).splitlines()]
    if "resources" in v:
        lines.append(f"resources: {v['resources']}")
    return lines


def render_report(data: dict) -> str:
    """Text form of :func:`report_to_dict` output."""
    lines = []
    arg = data["argument"]
    if arg is not None:
        lines += arg["premises"] + ["---"] + arg["conclusions"] + [""]
    lines.append(f"tokens: {data['tokens']}")
    if not data["readings"]:
        lines.append("no parse")
    for i, r in enumerate(data["readings"], 1):
        lines.append("")
        lines.append(f"reading {i}")
        if "derivation_text" in r:
            lines += ["  " + ln for ln in r["derivation_text"].splitlines()]
        lines.append(f"  lexical:    {r['lexical_term']}")
        lines.append(f"  term:       {r['term']}")
        lines.append(f"  formula:    {r['formula']}")
        lines.append(f"  simplified: {r['simplified']}")
        if r["verdict"] is not None:
            lines += ["  " + ln for ln in _verdict_text(r["verdict"])]
    if data["verdict"] is not None:
        lines.append("")
        lines += _verdict_text(data["verdict"])
    lines.append(f"status: {data['status']}")
    return "\n".join(lines)

