"""Acceptance checks, one test per criterion.

Each test records a PASS/FAIL line, printed in the pytest summary (see
``conftest.py``).  Running the file directly prints the same lines:

    python tests/test_acceptance.py
"""

import itertools
import random
import sys
import time
import unicodedata
from pathlib import Path


sys.path.insert(0, str(Path(__file__).parent))

from nabla import terms as tm  # noqa: E402
from nabla.calculus import Sequent, prove  # noqa: E402
from nabla.categories import DOT, G, N, S, render, sem_type  # noqa: E402
from nabla.corpus import load_corpus  # noqa: E402
from nabla.lexicon import default_lexicon  # noqa: E402
from nabla.logic import render_formula  # noqa: E402
from nabla.pipeline import Options, run_pipeline, run_tokens  # noqa: E402
from nabla.tokenizer import TokenString, detokenize, tokenize  # noqa: E402
from nabla.validity import Invalid, Valid, find_countermodel, prove_valid  # noqa: E402

from generators import random_formula, random_open_term, random_term, TYPES  # noqa: E402
from oracles import (_atom_balance, count_derivations, derivable_with_cut,  # noqa: E402
                     universe)

RESULTS = {}


def record(number, ok, detail, seconds):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}  ({seconds:6.2f}s)  {detail}"
    RESULTS[number] = line
    return line


def nfc(text):
    return unicodedata.normalize("NFC", text)


def pretty(t):
    return nfc(tm.render(t, unicode=True))


def criterion(number):
    def wrap(fn):
        def test():
            start = time.perf_counter()
            try:
                ok, detail = fn()
            except Exception as exc:
                record(number, False, f"{type(exc).__name__}: {exc}", time.perf_counter() - start)
                raise
            record(number, ok, detail, time.perf_counter() - start)
            assert ok, detail
        test.__name__ = fn.__name__
        test.criterion = number
        return test
    return wrap


# ---------------------------------------------------------------- goldens

@criterion(1)
def test_popular_man_golden():
    start = time.perf_counter()
    report = run_pipeline("John is a popular man.\n---\nJohn is popular.\n")
    elapsed = time.perf_counter() - start
    expected = tm.parse_term(r"Pdot (Odot (\x. Cdot (P x) (M x)) (\x. Qdot J x)) "
                             r"(Cdot (P J) (Qdot J J))")
    [r] = report.readings
    formula = render_formula(r.simplified)
    ok = (tm.alpha_equiv(r.term, expected) and formula == "P J ∧ M J ⇒ P J"
          and isinstance(report.verdict, Valid) and elapsed < 1.0)
    return ok, f"term {pretty(r.term)}; formula {formula}; {report.status}; {elapsed:.3f}s"


SMILE_TREE = [
    (0, "N  N\\S  S\\(•/S)  S ≻ •", "\\L"),
    (1, "N  N\\S ≻ S", "\\L"),
    (2, "N ≻ N", "="),
    (2, "S ≻ S", "="),
    (1, "•/S  S ≻ •", "/L"),
    (2, "S ≻ S", "="),
    (2, "• ≻ •", "="),
]


def _tree_rows(d, level=0):
    ants = "  ".join(render(c, unicode=True) for c in d.conclusion.categories)
    rows = [(level, f"{ants} ≻ {render(d.conclusion.goal, unicode=True)}", str(d.rule))]
    for p in d.premises:
        rows += _tree_rows(p, level + 1)
    return rows


@criterion(2)
def test_smile_golden():
    report = run_pipeline("John smiles.\n---\n")
    [r] = report.readings
    rows = _tree_rows(r.derivation)
    steps = (pretty(r.term), render_formula(r.formula), render_formula(r.simplified))
    ok = (steps == ("Ṗ (S J) Ṫ", "S J ⇒ ⊤", "⊤") and isinstance(report.verdict, Valid)
          and rows == SMILE_TREE)
    rules = " ".join(rule for _, _, rule in rows)
    return ok, f"{' ~> '.join(steps)}; {report.status}; tree rules {rules}"


@criterion(3)
def test_nick_golden():
    report = run_pipeline("John runs.\nJohn is Nick.\n---\nNick runs.\n", Options(depth=1))
    [r] = report.readings
    formula = render_formula(r.simplified)
    ok = formula == "R J ∧ J = N ⇒ R N" and isinstance(report.verdict, Valid)
    return ok, f"{formula}; {report.status} at depth 1"


@criterion(4)
def test_intro_verdicts():
    start = time.perf_counter()
    strong = run_pipeline("John is a man.\nVictoria is a woman.\nJohn loves Victoria.\n---\n"
                          "John loves a woman.\nA man loves Victoria.\n")
    weak = run_pipeline("John loves Victoria.\n---\nJohn loves a woman.\nA man loves Victoria.\n")
    elapsed = time.perf_counter() - start
    size = weak.verdict.countermodel.domain_size if isinstance(weak.verdict, Invalid) else None
    ok = (isinstance(strong.verdict, Valid) and size is not None and size <= 2
          and elapsed < 5.0)
    return ok, (f"three premises {strong.status}; one premise {weak.status} "
                f"(countermodel size {size}); {elapsed:.3f}s")


# ----------------------------------------------------------------- typing

@criterion(5)
def test_lexicon_well_typed():
    lex = default_lexicon()
    failures, principal, checked = [], 0, 0
    for e in lex.entries:
        expected = sem_type(e.category)
        try:
            try:
                ty = tm.type_of(e.definition)
            except tm.TermTypeError:
                # polymorphic definitions (copula, negation) have no ground
                # principal type; check them against the category's type
                tm.check_type(e.definition, expected)
                checked += 1
            else:
                principal += 1
                if ty != expected:
                    failures.append(f"{e.combinator_name}: {ty} != {expected}")
        except Exception as exc:  # noqa: BLE001 - every exception is a failure here
            failures.append(f"{e.combinator_name}: {exc}")
    detail = (f"{len(lex.entries)} entries: {principal} by principal type, {checked} "
              f"polymorphic checked against the category; {len(failures)} failures")
    return not failures, detail + ("; " + "; ".join(failures) if failures else "")


@criterion(6)
def test_type_preservation():
    lex = default_lexicon()
    cats = sorted({e.category for e in lex.entries}, key=str)
    sequents = derivations = 0
    bad = []
    for length in range(1, 6):
        for ants in itertools.product(cats, repeat=length):
            for goal in (N, G, S, DOT):
                if not _atom_balance(ants, goal):
                    continue  # no derivation exists
                sequents += 1
                names = [str(i) for i in range(1, length + 1)]
                s = Sequent(tuple(zip(names, ants)), goal)
                env = dict(zip(names, map(sem_type, ants)))
                for d in prove(s):
                    derivations += 1
                    try:
                        tm.check_type(tm.normalize(d.term), sem_type(goal), env)
                    except tm.TermTypeError as exc:
                        bad.append(f"{s}: {exc}")
    ok = not bad and derivations > 0
    return ok, (f"{len(cats)} lexical categories, length <= 5, {sequents} balanced sequents, "
                f"{derivations} derivations, {len(bad)} ill-typed")


# ------------------------------------------------------------- calculus

def oracle_universe():
    yield from universe(max_length=3, max_connectives=3)
    for ants, goal in universe(max_length=4, max_connectives=2):
        if len(ants) == 4:
            yield ants, goal


@criterion(7)
def test_cut_admissibility_and_completeness():
    total = balanced = derivable = 0
    mismatches = []
    for ants, goal in oracle_universe():
        total += 1
        names = [str(i) for i in range(1, len(ants) + 1)]
        found = len(prove(Sequent(tuple(zip(names, ants)), goal)))
        expected = count_derivations(ants, goal)
        if found != expected:
            mismatches.append(("count", ants, goal, found, expected))
        if _atom_balance(ants, goal):
            balanced += 1
            derivable += found > 0
            if derivable_with_cut(ants, goal) != (found > 0):
                mismatches.append(("cut", ants, goal))
        elif found:
            mismatches.append(("balance", ants, goal))
    detail = (f"{total} sequents over N,G,S,Dot (length <= 3 with <= 3 slashes, length 4 with "
              f"<= 2), {balanced} balanced, {derivable} derivable, {len(mismatches)} mismatches")
    return not mismatches, detail


# ------------------------------------------------------------ lambda kernel

def _steps(t):
    while True:
        t = tm._step_outer(t)
        if t is None:
            return
        yield t


@criterion(8)
def test_lambda_kernel():
    rng = random.Random(20260101)
    failures = 0
    redexes = 0
    for _ in range(1000):
        ty = rng.choice(TYPES)
        t = random_term(rng, ty, max_nodes=12)
        redexes += tm.beta_normalize(t) != t
        a, b = tm.beta_normalize(t, "outermost"), tm.beta_normalize(t, "innermost")
        if not tm.alpha_equiv(a, b):
            failures += 1
        try:
            for step in itertools.chain(_steps(t), [a, b]):
                tm.check_type(step, ty)
        except tm.TermTypeError:
            failures += 1
    E, T, ET = tm.ENTITY, tm.TRUTH, tm.Arrow(tm.ENTITY, tm.TRUTH)
    env = {"x": E, "y": ET, "z": T}
    for _ in range(300):
        t = random_open_term(rng, env, T)
        s = random_open_term(rng, env, E)
        u = random_open_term(rng, {"z": T}, ET)
        left = tm.substitute(tm.substitute(t, "x", s), "y", u)
        right = tm.substitute(tm.substitute(t, "y", u), "x", tm.substitute(s, "y", u))
        fv = (tm.free_vars(t) - {"x"}) | (tm.free_vars(s) if "x" in tm.free_vars(t) else set())
        ok = (tm.alpha_equiv(left, right)
              and tm.alpha_equiv(tm.substitute(t, "x", tm.Var("x")), t)
              and tm.free_vars(tm.substitute(t, "x", s)) == fv)
        try:
            tm.check_type(tm.substitute(t, "x", s), T, env)
        except tm.TermTypeError:
            ok = False
        failures += not ok
    return failures == 0, (f"1000 random typed terms ({redexes} with redexes): confluence "
                           f"and subject reduction; 300 substitution cases; {failures} failures")


# ---------------------------------------------------------------- tokenizer

@criterion(9)
def test_tokenizer_bijection():
    lex = default_lexicon()
    corpus = load_corpus()
    worked = {"01-loves-valid", "02-loves-invalid", "03-popular", "04-smiles", "05-nick"}
    bad = []
    for item in corpus:
        tokens = tokenize(item.argument, lex)
        again = TokenString.from_text(str(tokens))
        if detokenize(again, lex) != item.argument or tokenize(detokenize(again, lex), lex) != again:
            bad.append(item.name)
    names = {i.name for i in corpus}
    ok = len(corpus) == 20 and worked <= names and not bad
    return ok, f"{len(corpus)} arguments (5 from the worked examples), {len(bad)} failures"


# ----------------------------------------------------------------- validity

@criterion(10)
def test_validity_soundness():
    lex = default_lexicon()
    formulas = []
    for item in load_corpus():
        report = run_tokens(tokenize(item.argument, lex), Options(lexicon=lex, check=False))
        for r in report.readings:
            formulas += [r.formula, r.simplified]
    n_corpus = len(formulas)
    rng = random.Random(2026)
    formulas += [random_formula(rng) for _ in range(500)]
    both = proved = refuted = 0
    for f in formulas:
        p = prove_valid(f, depth=3)
        m = find_countermodel(f, max_size=3)
        proved += p
        refuted += m is not None
        both += p and m is not None
    return both == 0, (f"{n_corpus} corpus formulas + 500 random: {proved} proved, "
                       f"{refuted} refuted, {both} with both")


def main():
    tests = [v for v in globals().values() if callable(v) and hasattr(v, "criterion")]
    failed = 0
    for test in sorted(tests, key=lambda t: t.criterion):
        try:
            test()
        except AssertionError:
            failed += 1
        print(RESULTS[test.criterion], flush=True)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
