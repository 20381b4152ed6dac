"""Typed lambda-calculus kernel.

Terms are immutable trees of :class:`Var`, :class:`Const`, :class:`Abs` and
:class:`App`.  Binders carry no type annotation; types of bound variables are
inferred (see :func:`type_of`).  Constants carry their semantic type, which may
be ``None`` for freshly parsed text until :func:`infer_constants` fills it in.

Concrete syntax::

    \\x y. L x y        abstraction with multi-binder sugar
    f a b              application, left-associative
    (M x)              grouping

Constants start with an uppercase letter, variables with a lowercase letter or
a digit.  Identifiers may carry trailing primes (``x'``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import count
from typing import Dict, Iterator, Mapping, Optional, Union

__all__ = [
    "SemType", "Base", "Arrow", "ENTITY", "TRUTH", "arrow",
    "Term", "Var", "Const", "Abs", "App",
    "free_vars", "substitute", "normalize", "beta_normalize", "eta_reduce",
    "alpha_equiv", "type_of", "check_type", "infer_constants", "parse_term", "parse_type",
    "apply", "lam", "size",
    "TermError", "TermSyntaxError", "TermTypeError", "ReductionLimitError",
]


class TermError(Exception):
    pass


class TermSyntaxError(TermError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
        self.position = position


class TermTypeError(TermError):
    def __init__(self, message, subterm=None):
        if subterm is not None:
            message = f"{message} in {subterm}"
        super().__init__(message)
        self.subterm = subterm


class ReductionLimitError(TermError):
    pass


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self):
        return _BASE_ABBREV.get(self.name, self.name)


@dataclass(frozen=True)
class Arrow:
    domain: "SemType"
    codomain: "SemType"

    def __str__(self):
        dom = f"({self.domain})" if isinstance(self.domain, Arrow) else str(self.domain)
        return f"{dom} -> {self.codomain}"


SemType = Union[Base, Arrow]

ENTITY = Base("entity")
TRUTH = Base("truth")
_BASE_ABBREV = {"entity": "e", "truth": "t"}
_BASE_BY_ABBREV = {"e": ENTITY, "t": TRUTH, "entity": ENTITY, "truth": TRUTH}


def arrow(*types: SemType) -> SemType:
    """Right-nested arrow: ``arrow(a, b, c)`` is ``a -> (b -> c)``."""
    result = types[-1]
    for t in reversed(types[:-1]):
        result = Arrow(t, result)
    return result


def parse_type(text: str) -> SemType:
    """Parse ``e``, ``t``, ``e -> t``, ``(e -> t) -> t`` and the like."""
    tokens = re.findall(r"->|[()]|[A-Za-z]+|\S", text)
    pos = 0

    def atom():
        nonlocal pos
        if pos >= len(tokens):
            raise TermSyntaxError("unexpected end of type", pos)
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            inner = arr()
            if pos >= len(tokens) or tokens[pos] != ")":
                raise TermSyntaxError("expected ')'", pos)
            pos += 1
            return inner
        if tok in _BASE_BY_ABBREV:
            return _BASE_BY_ABBREV[tok]
        raise TermSyntaxError(f"unknown base type {tok!r}", pos - 1)

    def arr():
        nonlocal pos
        left = atom()
        if pos < len(tokens) and tokens[pos] == "->":
            pos += 1
            return Arrow(left, arr())
        return left

    result = arr()
    if pos != len(tokens):
        raise TermSyntaxError(f"trailing input {tokens[pos]!r}", pos)
    return result


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Const:
    name: str
    type: Optional[SemType] = None

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Abs:
    bound: str
    body: "Term"

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"

    def __str__(self):
        return render(self)


Term = Union[Var, Const, Abs, App]


def apply(fun: Term, *args: Term) -> Term:
    for a in args:
        fun = App(fun, a)
    return fun


def lam(names: str, body: Term) -> Term:
    """``lam("x y", body)`` builds ``\\x y. body``."""
    for name in reversed(names.split()):
        body = Abs(name, body)
    return body


def size(t: Term) -> int:
    if isinstance(t, Abs):
        return 1 + size(t.body)
    if isinstance(t, App):
        return 1 + size(t.fun) + size(t.arg)
    return 1


# ---------------------------------------------------------------- binding


def free_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Const):
        return frozenset()
    if isinstance(t, Abs):
        return free_vars(t.body) - {t.bound}
    return free_vars(t.fun) | free_vars(t.arg)


def all_var_names(t: Term) -> set:
    """Every variable name occurring in ``t``, bound or free."""
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Const):
        return set()
    if isinstance(t, Abs):
        return {t.bound} | all_var_names(t.body)
    return all_var_names(t.fun) | all_var_names(t.arg)


def fresh_name(base: str, avoid) -> str:
    name = base + "'"
    while name in avoid:
        name += "'"
    return name


def substitute(t: Term, x: str, s: Term) -> Term:
    """Replace free occurrences of ``x`` in ``t`` by ``s``.

    Bound variables of ``t`` that would capture a free variable of ``s`` are
    renamed by appending primes.
    """
    fv_s = free_vars(s)
    return _subst(t, x, s, fv_s)


def _subst(t, x, s, fv_s):
    if isinstance(t, Var):
        return s if t.name == x else t
    if isinstance(t, Const):
        return t
    if isinstance(t, App):
        fun = _subst(t.fun, x, s, fv_s)
        arg = _subst(t.arg, x, s, fv_s)
        if fun is t.fun and arg is t.arg:
            return t
        return App(fun, arg)
    if t.bound == x:
        return t
    fv_body = free_vars(t.body)
    if x not in fv_body:
        return t
    if t.bound in fv_s:
        new = fresh_name(t.bound, fv_s | fv_body | {x})
        body = _subst(t.body, t.bound, Var(new), frozenset((new,)))
        return Abs(new, _subst(body, x, s, fv_s))
    return Abs(t.bound, _subst(t.body, x, s, fv_s))


def alpha_equiv(t1: Term, t2: Term) -> bool:
    """Equality modulo consistent renaming of bound variables.

    Constants are compared by name only; within one signature a name
    determines its type.
    """
    return _alpha(t1, t2, {}, {}, 0)


def _alpha(a, b, env_a, env_b, depth):
    if isinstance(a, Var) and isinstance(b, Var):
        da, db = env_a.get(a.name), env_b.get(b.name)
        if da is None and db is None:
            return a.name == b.name
        return da == db
    if isinstance(a, Const) and isinstance(b, Const):
        return a.name == b.name
    if isinstance(a, App) and isinstance(b, App):
        return (_alpha(a.fun, b.fun, env_a, env_b, depth)
                and _alpha(a.arg, b.arg, env_a, env_b, depth))
    if isinstance(a, Abs) and isinstance(b, Abs):
        return _alpha(a.body, b.body, {**env_a, a.bound: depth},
                      {**env_b, b.bound: depth}, depth + 1)
    return False


# ---------------------------------------------------------------- reduction

MAX_STEPS = 10_000


def _step_outer(t):
    """One leftmost-outermost beta step, or None if ``t`` is beta-normal."""
    if isinstance(t, App):
        if isinstance(t.fun, Abs):
            return substitute(t.fun.body, t.fun.bound, t.arg)
        r = _step_outer(t.fun)
        if r is not None:
            return App(r, t.arg)
        r = _step_outer(t.arg)
        if r is not None:
            return App(t.fun, r)
        return None
    if isinstance(t, Abs):
        r = _step_outer(t.body)
        return None if r is None else Abs(t.bound, r)
    return None


def _step_inner(t):
    """One rightmost-innermost beta step."""
    if isinstance(t, App):
        r = _step_inner(t.arg)
        if r is not None:
            return App(t.fun, r)
        r = _step_inner(t.fun)
        if r is not None:
            return App(r, t.arg)
        if isinstance(t.fun, Abs):
            return substitute(t.fun.body, t.fun.bound, t.arg)
        return None
    if isinstance(t, Abs):
        r = _step_inner(t.body)
        return None if r is None else Abs(t.bound, r)
    return None


_STRATEGIES = {"outermost": _step_outer, "innermost": _step_inner}


def beta_normalize(t: Term, strategy: str = "outermost", max_steps: int = MAX_STEPS) -> Term:
    if strategy not in _STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; use 'outermost' or 'innermost'")
    step = _STRATEGIES[strategy]
    for _ in range(max_steps):
        r = step(t)
        if r is None:
            return t
        t = r
    if step(t) is None:
        return t
    raise ReductionLimitError(f"no beta-normal form within {max_steps} steps")


def eta_reduce(t: Term) -> Term:
    """Exhaustive eta-reduction, bottom-up."""
    if isinstance(t, App):
        return App(eta_reduce(t.fun), eta_reduce(t.arg))
    if isinstance(t, Abs):
        body = eta_reduce(t.body)
        if (isinstance(body, App) and isinstance(body.arg, Var)
                and body.arg.name == t.bound
                and t.bound not in free_vars(body.fun)):
            return body.fun
        return Abs(t.bound, body)
    return t


def normalize(t: Term, strategy: str = "outermost", eta: bool = True,
              max_steps: int = MAX_STEPS) -> Term:
    """Beta-normalize, then eta-reduce.

    Callers must type-check first; untyped terms may not terminate and hit
    the ``max_steps`` ceiling, raising :class:`ReductionLimitError`.
    """
    t = beta_normalize(t, strategy, max_steps)
    return eta_reduce(t) if eta else t


# ---------------------------------------------------------------- typing


class _TVar:
    """Unification variable; only lives inside inference."""
    _ids = count()

    def __init__(self):
        self.id = next(self._ids)
        self.ref = None

    def __repr__(self):
        return f"?{self.id}"


def _prune(t):
    while isinstance(t, _TVar) and t.ref is not None:
        t = t.ref
    return t


def _occurs(v, t):
    t = _prune(t)
    if t is v:
        return True
    if isinstance(t, Arrow):
        return _occurs(v, t.domain) or _occurs(v, t.codomain)
    return False


def _unify(a, b, where):
    a, b = _prune(a), _prune(b)
    if a is b:
        return
    if isinstance(a, _TVar):
        if _occurs(a, b):
            raise TermTypeError("infinite type", where)
        a.ref = b
    elif isinstance(b, _TVar):
        _unify(b, a, where)
    elif isinstance(a, Arrow) and isinstance(b, Arrow):
        _unify(a.domain, b.domain, where)
        _unify(a.codomain, b.codomain, where)
    elif a != b:
        raise TermTypeError(f"type mismatch: {_show(a)} vs {_show(b)}", where)


def _resolve(t):
    t = _prune(t)
    if isinstance(t, _TVar):
        return None
    if isinstance(t, Arrow):
        d, c = _resolve(t.domain), _resolve(t.codomain)
        return None if d is None or c is None else Arrow(d, c)
    return t


def _show(t):
    t = _prune(t)
    if isinstance(t, Arrow):
        dom = _show(t.domain)
        if isinstance(_prune(t.domain), Arrow):
            dom = f"({dom})"
        return f"{dom} -> {_show(t.codomain)}"
    return repr(t) if isinstance(t, _TVar) else str(t)


def _infer(t, env, consts):
    if isinstance(t, Var):
        if t.name not in env:
            raise TermTypeError(f"unbound variable {t.name}", t)
        return env[t.name]
    if isinstance(t, Const):
        if t.type is not None:
            return t.type
        if consts is None:
            raise TermTypeError(f"constant {t.name} carries no type", t)
        if t.name not in consts:
            consts[t.name] = _TVar()
        return consts[t.name]
    if isinstance(t, Abs):
        v = _TVar()
        body = _infer(t.body, {**env, t.bound: v}, consts)
        return Arrow(v, body)
    fun = _infer(t.fun, env, consts)
    arg = _infer(t.arg, env, consts)
    res = _TVar()
    _unify(fun, Arrow(arg, res), t)
    return res


def type_of(t: Term, env: Optional[Mapping[str, SemType]] = None) -> SemType:
    """The unique simple type of ``t`` under ``env``.

    Raises :class:`TermTypeError` for unbound variables, untyped constants,
    mismatched applications, and terms whose type is not fully determined
    (such as a bare identity ``\\x. x``).
    """
    result = _infer(t, dict(env or {}), None)
    resolved = _resolve(result)
    if resolved is None:
        raise TermTypeError(f"type not determined: {_show(result)}", t)
    return resolved


def check_type(t: Term, expected: SemType, env: Optional[Mapping[str, SemType]] = None) -> None:
    """Raise :class:`TermTypeError` unless ``t`` can be given type ``expected``.

    Unlike :func:`type_of` this accepts binders whose type only the expected
    type determines, such as the vacuous ``\\z. C`` at ``e -> t``.
    """
    _unify(_infer(t, dict(env or {}), None), expected, t)


def infer_constants(t: Term, expected: SemType,
                    signature: Optional[Dict[str, SemType]] = None) -> Term:
    """Fill in the types of untyped constants so that ``t`` has ``expected`` type.

    ``signature`` maps constant names to known types; it is updated in place
    with every newly determined constant, so passing the same dict across
    several calls keeps constant types consistent.
    """
    signature = {} if signature is None else signature
    consts = {name: ty for name, ty in signature.items()}
    result = _infer(t, {}, consts)
    _unify(result, expected, t)
    resolved = {}
    for name, ty in consts.items():
        r = _resolve(ty)
        if r is None:
            raise TermTypeError(f"cannot determine type of constant {name}", t)
        resolved[name] = r
    signature.update(resolved)
    return _retype(t, resolved)


def _retype(t, table):
    if isinstance(t, Const):
        return t if t.type is not None else Const(t.name, table[t.name])
    if isinstance(t, Abs):
        return Abs(t.bound, _retype(t.body, table))
    if isinstance(t, App):
        return App(_retype(t.fun, table), _retype(t.arg, table))
    return t


def with_types(t: Term, signature: Mapping[str, SemType]) -> Term:
    """Attach types from ``signature`` to constants that lack one."""
    if isinstance(t, Const):
        if t.type is None and t.name in signature:
            return Const(t.name, signature[t.name])
        return t
    if isinstance(t, Abs):
        return Abs(t.bound, with_types(t.body, signature))
    if isinstance(t, App):
        return App(with_types(t.fun, signature), with_types(t.arg, signature))
    return t


# ---------------------------------------------------------------- syntax

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z0-9_]+'*)|(?P<sym>[\\λ.()]))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", pos)
        out.append((m.group("ident") or m.group("sym"), m.start(m.lastindex)))
        pos = m.end()
    return out


def parse_term(text: str, signature: Optional[Mapping[str, SemType]] = None) -> Term:
    """Parse concrete term syntax; ``signature`` types the constants it names."""
    tokens = _tokenize(text)
    if not tokens:
        raise TermSyntaxError("empty term", 0)
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def expr():
        nonlocal pos
        if peek() in ("\\", "λ"):
            pos += 1
            names = []
            while peek() not in (".", None):
                name, at = tokens[pos]
                if not _is_var_name(name):
                    raise TermSyntaxError(f"bad binder {name!r}", at)
                names.append(name)
                pos += 1
            if not names or peek() != ".":
                raise TermSyntaxError("malformed abstraction", _at())
            pos += 1
            return lam(" ".join(names), expr())
        fun = atom()
        while peek() not in (None, ")"):
            if peek() in ("\\", "λ"):
                fun = App(fun, expr())
                break
            fun = App(fun, atom())
        return fun

    def atom():
        nonlocal pos
        tok = peek()
        if tok is None:
            raise TermSyntaxError("unexpected end of term", _at())
        if tok == "(":
            pos += 1
            inner = expr()
            if peek() != ")":
                raise TermSyntaxError("expected ')'", _at())
            pos += 1
            return inner
        if tok in (")", "."):
            raise TermSyntaxError(f"unexpected {tok!r}", _at())
        pos += 1
        if _is_var_name(tok):
            return Var(tok)
        return Const(tok, (signature or {}).get(tok))

    def _at():
        return tokens[pos][1] if pos < len(tokens) else len(text)

    result = expr()
    if pos != len(tokens):
        raise TermSyntaxError(f"unexpected {tokens[pos][0]!r}", tokens[pos][1])
    return result


def _is_var_name(name):
    return name[0].islower() or name[0].isdigit()


# ---------------------------------------------------------------- printing

DOTTED_UNICODE = {
    "Qdot": "Q̇", "Ndot": "Ṅ", "Cdot": "Ċ", "Ddot": "Ḋ",
    "Odot": "Ȯ", "Idot": "İ", "Tdot": "Ṫ", "Pdot": "Ṗ",
}


def render(t: Term, unicode: bool = False) -> str:
    """Print a term.

    ASCII mode produces parseable concrete syntax.  Unicode mode follows the
    notation of the combinator literature: ``λxy(M x y)``, dotted logical
    combinators, abstractions as arguments without extra parentheses.
    """
    if unicode:
        return _render_unicode(t)
    return _render_ascii(t)


def _render_ascii(t):
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, Abs):
        names = []
        while isinstance(t, Abs):
            names.append(t.bound)
            t = t.body
        return "\\" + " ".join(names) + ". " + _render_ascii(t)
    head, args = _spine(t)
    parts = [_wrap_ascii(head, True)] + [_wrap_ascii(a, False) for a in args]
    return " ".join(parts)


def _wrap_ascii(t, is_head):
    s = _render_ascii(t)
    if isinstance(t, Abs) or (isinstance(t, App) and not is_head):
        return f"({s})"
    return s


def _render_unicode(t):
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return DOTTED_UNICODE.get(t.name, t.name)
    if isinstance(t, Abs):
        names = []
        while isinstance(t, Abs):
            names.append(t.bound)
            t = t.body
        sep = "" if all(len(n) == 1 for n in names) else " "
        return "λ" + sep.join(names) + "(" + _render_unicode(t) + ")"
    head, args = _spine(t)
    parts = [_render_unicode(head) if not isinstance(head, Abs) else f"({_render_unicode(head)})"]
    for a in args:
        s = _render_unicode(a)
        parts.append(f"({s})" if isinstance(a, App) else s)
    return " ".join(parts)


def _spine(t):
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    return t, args[::-1]


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Abs):
        yield from subterms(t.body)
    elif isinstance(t, App):
        yield from subterms(t.fun)
        yield from subterms(t.arg)


def constants(t: Term) -> Dict[str, Optional[SemType]]:
    return {s.name: s.type for s in subterms(t) if isinstance(s, Const)}
