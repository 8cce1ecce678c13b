"""Core calculus: second-order typed lambda terms over declared sorts.

Types are base sorts, type variables, arrows and Pi quantification; terms add
type abstraction and type application to the simply typed core.  The built-in
constants make the calculus a glue language for a multisorted logic: `eps`,
`ieps` and `tau` are the polymorphic choice operators used as determiners,
`exists`/`forall` the classical quantifiers, plus the connectives.

Everything here is immutable and pure; the operations are safe to share
across threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .errors import (StepBudgetExceeded, ParseError, TyLamEscape, TypeClash,
                     UnboundName, UnknownSort)
from .sexpr import Atom, SExpr, expect_atom, read_one

# ---------------------------------------------------------------------------
# types


class Type:
    __slots__ = ()


@dataclass(frozen=True)
class BaseSort(Type):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class TypeVar(Type):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Arrow(Type):
    dom: Type
    cod: Type

    def __str__(self):
        d = f"({self.dom})" if isinstance(self.dom, (Arrow, Pi)) else str(self.dom)
        return f"{d} -> {self.cod}"


@dataclass(frozen=True)
class Pi(Type):
    var: str
    body: Type

    def __str__(self):
        return f"pi {self.var}. {self.body}"


T = BaseSort("t")
E = BaseSort("e")
EVENT = BaseSort("event")

BUILTIN_SORTS = frozenset({"t", "e", "event"})


def arrow(*types: Type) -> Type:
    """Right-fold a chain of types into nested arrows."""
    out = types[-1]
    for ty in reversed(types[:-1]):
        out = Arrow(ty, out)
    return out


def free_tyvars(ty: Type) -> frozenset[str]:
    match ty:
        case TypeVar(name):
            return frozenset({name})
        case Arrow(dom, cod):
            return free_tyvars(dom) | free_tyvars(cod)
        case Pi(var, body):
            return free_tyvars(body) - {var}
        case _:
            return frozenset()


def subst_type(ty: Type, var: str, repl: Type) -> Type:
    """ty[repl/var], renaming Pi binders when capture threatens."""
    match ty:
        case TypeVar(name):
            return repl if name == var else ty
        case Arrow(dom, cod):
            return Arrow(subst_type(dom, var, repl), subst_type(cod, var, repl))
        case Pi(v, body):
            if v == var:
                return ty
            if v in free_tyvars(repl) and var in free_tyvars(body):
                fresh = _fresh_name(v, free_tyvars(repl) | free_tyvars(body))
                body = subst_type(body, v, TypeVar(fresh))
                v = fresh
            return Pi(v, subst_type(body, var, repl))
        case _:
            return ty


def _fresh_name(base: str, avoid) -> str:
    base = base.rstrip("0123456789'")
    if not base:
        base = "v"
    for i in itertools.count(1):
        cand = f"{base}{i}"
        if cand not in avoid:
            return cand
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# terms


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str
    type: Type

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const(Term):
    name: str
    type: Type

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True)
class Lam(Term):
    var: str
    var_type: Type
    body: Term

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True)
class TyApp(Term):
    fun: Term
    ty: Type

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True)
class TyLam(Term):
    tyvar: str
    body: Term

    def __str__(self):
        return print_term(self)


CHOICE_TYPE = Pi("a", Arrow(Arrow(TypeVar("a"), T), TypeVar("a")))
QUANT_TYPE = Pi("a", Arrow(Arrow(TypeVar("a"), T), T))

BUILTIN_CONSTANTS: dict[str, Type] = {
    "eps": CHOICE_TYPE,
    "ieps": CHOICE_TYPE,
    "tau": CHOICE_TYPE,
    "exists": QUANT_TYPE,
    "forall": QUANT_TYPE,
    "and": arrow(T, T, T),
    "or": arrow(T, T, T),
    "implies": arrow(T, T, T),
    "not": arrow(T, T),
}

CHOICE_CONSTANTS = frozenset({"eps", "ieps", "tau"})
CONNECTIVES = frozenset({"and", "or", "implies", "not"})
QUANTIFIER_CONSTANTS = frozenset({"exists", "forall"})


# ---------------------------------------------------------------------------
# typing context


@dataclass(frozen=True)
class TypingContext:
    """Declared sorts plus typed names.  Constants and variables live in
    separate maps so the parser can tell them apart; both feed type_of."""

    sorts: frozenset[str] = BUILTIN_SORTS
    consts: dict[str, Type] = field(default_factory=dict)
    vars: dict[str, Type] = field(default_factory=dict)

    @staticmethod
    def default() -> TypingContext:
        return TypingContext(consts=dict(BUILTIN_CONSTANTS))

    def with_sorts(self, names) -> TypingContext:
        return replace(self, sorts=self.sorts | frozenset(names))

    def with_const(self, name: str, ty: Type) -> TypingContext:
        return replace(self, consts={**self.consts, name: ty})

    def with_var(self, name: str, ty: Type) -> TypingContext:
        return replace(self, vars={**self.vars, name: ty})

    def lookup(self, name: str) -> Type | None:
        if name in self.vars:
            return self.vars[name]
        return self.consts.get(name)


# ---------------------------------------------------------------------------
# parsing

_TERM_KEYWORDS = frozenset({"lam", "tylam", "tyapp"})


def parse_type(e: SExpr, sorts: frozenset[str], tyvars: frozenset[str]) -> Type:
    if isinstance(e, Atom):
        if e.text in tyvars:
            return TypeVar(e.text)
        if e.text in sorts:
            return BaseSort(e.text)
        raise UnknownSort(e.text, e.line, e.col)
    if len(e) == 3 and isinstance(e[0], Atom) and e[0].text == "->":
        return Arrow(parse_type(e[1], sorts, tyvars),
                     parse_type(e[2], sorts, tyvars))
    if len(e) == 3 and isinstance(e[0], Atom) and e[0].text == "pi":
        v = expect_atom(e[1], "type variable").text
        return Pi(v, parse_type(e[2], sorts, tyvars | {v}))
    raise ParseError("malformed type", e.line, e.col)


def parse_term(text: str, ctx: TypingContext | None = None) -> Term:
    """Parse the s-expression term grammar.

    `(lam x TYPE BODY)` binds a term variable, `(tylam a BODY)` a type
    variable, `(tyapp F TYPE)` instantiates, and `(F A B ...)` is
    application, associated to the left.  Free symbols resolve against
    `ctx`; constants win over variables of the same name.
    """
    ctx = ctx or TypingContext.default()
    return _term_of(read_one(text), ctx, {}, frozenset())


def term_of_sexpr(e: SExpr, ctx: TypingContext) -> Term:
    return _term_of(e, ctx, {}, frozenset())


def _term_of(e: SExpr, ctx: TypingContext, bound: dict[str, Type],
             tyvars: frozenset[str]) -> Term:
    if isinstance(e, Atom):
        name = e.text
        if name in bound:
            return Var(name, bound[name])
        if name in ctx.consts:
            return Const(name, ctx.consts[name])
        if name in ctx.vars:
            return Var(name, ctx.vars[name])
        raise UnboundName(name, e.line, e.col)
    if len(e) == 0:
        raise ParseError("empty application", e.line, e.col)
    head = e[0]
    if isinstance(head, Atom) and head.text == "lam":
        if len(e) != 4:
            raise ParseError("lam needs a variable, a type and a body",
                               e.line, e.col)
        v = expect_atom(e[1], "variable name").text
        ty = parse_type(e[2], ctx.sorts, tyvars)
        body = _term_of(e[3], ctx, {**bound, v: ty}, tyvars)
        return Lam(v, ty, body)
    if isinstance(head, Atom) and head.text == "tylam":
        if len(e) != 3:
            raise ParseError("tylam needs a type variable and a body",
                               e.line, e.col)
        v = expect_atom(e[1], "type variable").text
        return TyLam(v, _term_of(e[2], ctx, bound, tyvars | {v}))
    if isinstance(head, Atom) and head.text == "tyapp":
        if len(e) != 3:
            raise ParseError("tyapp needs a term and a type", e.line, e.col)
        return TyApp(_term_of(e[1], ctx, bound, tyvars),
                     parse_type(e[2], ctx.sorts, tyvars))
    if len(e) < 2:
        raise ParseError("application needs at least one argument",
                           e.line, e.col)
    out = _term_of(e[0], ctx, bound, tyvars)
    for sub in e.items[1:]:
        out = App(out, _term_of(sub, ctx, bound, tyvars))
    return out


# ---------------------------------------------------------------------------
# printing


def type_to_sexpr(ty: Type) -> str:
    match ty:
        case BaseSort(name) | TypeVar(name):
            return name
        case Arrow(dom, cod):
            return f"(-> {type_to_sexpr(dom)} {type_to_sexpr(cod)})"
        case Pi(var, body):
            return f"(pi {var} {type_to_sexpr(body)})"
    raise AssertionError(ty)


def print_term(term: Term) -> str:
    """Render a term back into the s-expression grammar.  Application
    spines are flattened: ((f a) b) prints as (f a b)."""
    match term:
        case Var(name, _) | Const(name, _):
            return name
        case Lam(var, var_type, body):
            return f"(lam {var} {type_to_sexpr(var_type)} {print_term(body)})"
        case TyLam(tyvar, body):
            return f"(tylam {tyvar} {print_term(body)})"
        case TyApp(fun, ty):
            return f"(tyapp {print_term(fun)} {type_to_sexpr(ty)})"
        case App():
            spine = []
            head = term
            while isinstance(head, App):
                spine.append(head.arg)
                head = head.fun
            spine.append(head)
            return "(" + " ".join(print_term(s) for s in reversed(spine)) + ")"
    raise AssertionError(term)


# ---------------------------------------------------------------------------
# free variables and substitution


def free_vars(term: Term) -> dict[str, Type]:
    """Free term variables with their annotated types."""
    match term:
        case Var(name, ty):
            return {name: ty}
        case Const():
            return {}
        case App(fun, arg):
            return {**free_vars(fun), **free_vars(arg)}
        case Lam(var, _, body):
            fv = free_vars(body)
            fv.pop(var, None)
            return fv
        case TyApp(fun, _):
            return free_vars(fun)
        case TyLam(_, body):
            return free_vars(body)
    raise AssertionError(term)


def subst_term(term: Term, var: str, repl: Term) -> Term:
    """Capture-avoiding term substitution term[repl/var]."""
    match term:
        case Var(name, _):
            return repl if name == var else term
        case Const():
            return term
        case App(fun, arg):
            return App(subst_term(fun, var, repl), subst_term(arg, var, repl))
        case Lam(v, vty, body):
            if v == var:
                return term
            repl_fv = free_vars(repl)
            if v in repl_fv and var in free_vars(body):
                fresh = _fresh_name(v, set(repl_fv) | set(free_vars(body)))
                body = subst_term(body, v, Var(fresh, vty))
                v = fresh
            return Lam(v, vty, subst_term(body, var, repl))
        case TyApp(fun, ty):
            return TyApp(subst_term(fun, var, repl), ty)
        case TyLam(a, body):
            return TyLam(a, subst_term(body, var, repl))
    raise AssertionError(term)


def subst_type_in_term(term: Term, var: str, repl: Type) -> Term:
    """Substitute a type for a type variable throughout a term's
    annotations, respecting tylam shadowing."""
    match term:
        case Var(name, ty):
            return Var(name, subst_type(ty, var, repl))
        case Const(name, ty):
            return Const(name, subst_type(ty, var, repl))
        case App(fun, arg):
            return App(subst_type_in_term(fun, var, repl),
                       subst_type_in_term(arg, var, repl))
        case Lam(v, vty, body):
            return Lam(v, subst_type(vty, var, repl),
                       subst_type_in_term(body, var, repl))
        case TyApp(fun, ty):
            return TyApp(subst_type_in_term(fun, var, repl),
                         subst_type(ty, var, repl))
        case TyLam(a, body):
            if a == var:
                return term
            if a in free_tyvars(repl):
                fresh = _fresh_name(a, free_tyvars(repl) | _tyvars_in_term(body))
                body = subst_type_in_term(body, a, TypeVar(fresh))
                a = fresh
            return TyLam(a, subst_type_in_term(body, var, repl))
    raise AssertionError(term)


def _tyvars_in_term(term: Term) -> frozenset[str]:
    match term:
        case Var(_, ty) | Const(_, ty):
            return free_tyvars(ty)
        case App(fun, arg):
            return _tyvars_in_term(fun) | _tyvars_in_term(arg)
        case Lam(_, vty, body):
            return free_tyvars(vty) | _tyvars_in_term(body)
        case TyApp(fun, ty):
            return _tyvars_in_term(fun) | free_tyvars(ty)
        case TyLam(a, body):
            return _tyvars_in_term(body) - {a}
    raise AssertionError(term)


# ---------------------------------------------------------------------------
# type checking


def check_type(ty: Type, ctx: TypingContext, tyvars: frozenset[str] = frozenset()):
    match ty:
        case BaseSort(name):
            if name not in ctx.sorts:
                raise UnknownSort(name)
        case TypeVar(name):
            if name not in tyvars:
                raise UnboundName(name)
        case Arrow(dom, cod):
            check_type(dom, ctx, tyvars)
            check_type(cod, ctx, tyvars)
        case Pi(var, body):
            check_type(body, ctx, tyvars | {var})


def type_of(ctx: TypingContext, term: Term) -> Type:
    """Derive the unique type of a term, or raise.

    Application demands an exact match between the function domain and the
    argument type; a mismatch on base sorts is the selectional-restriction
    clash surfaced to users.  Type application instantiates a Pi type;
    type abstraction checks that the bound variable does not occur in the
    type of any free term variable.
    """
    return _type_of(term, ctx, frozenset())


def _type_of(term: Term, ctx: TypingContext, tyvars: frozenset[str]) -> Type:
    match term:
        case Var(name, ty):
            declared = ctx.vars.get(name)
            if declared is None:
                raise UnboundName(name)
            if declared != ty:
                raise TypeClash(declared, ty, where=name)
            return ty
        case Const(name, ty):
            declared = ctx.consts.get(name)
            if declared is None:
                raise UnboundName(name)
            if declared != ty:
                raise TypeClash(declared, ty, where=name)
            return ty
        case App(fun, arg):
            fun_ty = _type_of(fun, ctx, tyvars)
            arg_ty = _type_of(arg, ctx, tyvars)
            if not isinstance(fun_ty, Arrow):
                raise TypeClash("a function type", fun_ty,
                                where=print_term(fun))
            if fun_ty.dom != arg_ty:
                raise TypeClash(fun_ty.dom, arg_ty, where=print_term(term))
            return fun_ty.cod
        case Lam(var, var_type, body):
            check_type(var_type, ctx, tyvars)
            body_ty = _type_of(body, ctx.with_var(var, var_type), tyvars)
            return Arrow(var_type, body_ty)
        case TyApp(fun, ty):
            fun_ty = _type_of(fun, ctx, tyvars)
            if not isinstance(fun_ty, Pi):
                raise TypeClash("a pi type", fun_ty, where=print_term(fun))
            check_type(ty, ctx, tyvars)
            return subst_type(fun_ty.body, fun_ty.var, ty)
        case TyLam(a, body):
            for v, vty in free_vars(body).items():
                if a in free_tyvars(vty):
                    raise TyLamEscape(a, v)
            body_ty = _type_of(body, ctx, tyvars | {a})
            return Pi(a, body_ty)
    raise AssertionError(term)


# ---------------------------------------------------------------------------
# alpha equivalence


def alpha_eq(a: Term, b: Term) -> bool:
    """Equality up to consistent renaming of bound term and type variables,
    via conversion to a canonical indexed form."""
    return canon(a) == canon(b)


def canon(term: Term) -> Term:
    return _canon(term, {}, {}, [0, 0])


def canon_type(ty: Type) -> Type:
    return _canon_ty(ty, {}, [0])


def _canon_ty(ty: Type, tmap: dict[str, str], counter: list[int]) -> Type:
    match ty:
        case TypeVar(name):
            return TypeVar(tmap.get(name, name))
        case Arrow(dom, cod):
            return Arrow(_canon_ty(dom, tmap, counter),
                         _canon_ty(cod, tmap, counter))
        case Pi(var, body):
            fresh = f"!t{counter[0]}"
            counter[0] += 1
            return Pi(fresh, _canon_ty(body, {**tmap, var: fresh}, counter))
        case _:
            return ty


def _canon(term: Term, vmap: dict[str, str], tmap: dict[str, str],
           counters: list[int]) -> Term:
    tcounter = [counters[1]]

    def cty(ty: Type) -> Type:
        # bound type vars were renamed via tmap; Pi binders inside
        # annotations are canonicalized independently
        out = ty
        for old, new in tmap.items():
            out = subst_type(out, old, TypeVar(new))
        return _canon_ty(out, {}, tcounter)

    match term:
        case Var(name, ty):
            return Var(vmap.get(name, name), cty(ty))
        case Const(name, ty):
            return Const(name, cty(ty))
        case App(fun, arg):
            return App(_canon(fun, vmap, tmap, counters),
                       _canon(arg, vmap, tmap, counters))
        case Lam(var, var_type, body):
            fresh = f"!v{counters[0]}"
            counters[0] += 1
            new_ty = cty(var_type)
            return Lam(fresh, new_ty,
                       _canon(body, {**vmap, var: fresh}, tmap, counters))
        case TyApp(fun, ty):
            return TyApp(_canon(fun, vmap, tmap, counters), cty(ty))
        case TyLam(a, body):
            fresh = f"!a{counters[1]}"
            counters[1] += 1
            return TyLam(fresh, _canon(body, vmap, {**tmap, a: fresh}, counters))
    raise AssertionError(term)


# ---------------------------------------------------------------------------
# normalization

DEFAULT_STEP_BUDGET = 100_000


def _find_redex_lo(term: Term):
    """Leftmost-outermost redex: returns a (kind, rebuild) pair or None."""
    match term:
        case App(Lam() as lam, arg):
            return subst_term(lam.body, lam.var, arg)
        case TyApp(TyLam() as tl, ty):
            return subst_type_in_term(tl.body, tl.tyvar, ty)
        case App(fun, arg):
            red = _find_redex_lo(fun)
            if red is not None:
                return App(red, arg)
            red = _find_redex_lo(arg)
            if red is not None:
                return App(fun, red)
            return None
        case TyApp(fun, ty):
            red = _find_redex_lo(fun)
            return None if red is None else TyApp(red, ty)
        case Lam(var, vty, body):
            red = _find_redex_lo(body)
            return None if red is None else Lam(var, vty, red)
        case TyLam(a, body):
            red = _find_redex_lo(body)
            return None if red is None else TyLam(a, red)
        case _:
            return None


def _find_redex_ri(term: Term):
    """Rightmost-innermost redex, the dual strategy used by the confluence
    checks."""
    match term:
        case App(fun, arg):
            red = _find_redex_ri(arg)
            if red is not None:
                return App(fun, red)
            red = _find_redex_ri(fun)
            if red is not None:
                return App(red, arg)
            if isinstance(fun, Lam):
                return subst_term(fun.body, fun.var, arg)
            return None
        case TyApp(fun, ty):
            red = _find_redex_ri(fun)
            if red is not None:
                return TyApp(red, ty)
            if isinstance(fun, TyLam):
                return subst_type_in_term(fun.body, fun.tyvar, ty)
            return None
        case Lam(var, vty, body):
            red = _find_redex_ri(body)
            return None if red is None else Lam(var, vty, red)
        case TyLam(a, body):
            red = _find_redex_ri(body)
            return None if red is None else TyLam(a, red)
        case _:
            return None


def reduction_steps(term: Term, strategy: str = "lo",
                    budget: int = DEFAULT_STEP_BUDGET):
    """Yield each successive term after firing one beta or type-beta redex.

    The calculus is strongly normalizing, so exhausting the budget means a
    bug; we raise rather than loop.
    """
    step = {"lo": _find_redex_lo, "ri": _find_redex_ri}[strategy]
    fired = 0
    while True:
        nxt = step(term)
        if nxt is None:
            return
        fired += 1
        if fired > budget:
            raise StepBudgetExceeded(budget)
        term = nxt
        yield term


def normalize(term: Term, strategy: str = "lo",
              budget: int = DEFAULT_STEP_BUDGET) -> Term:
    """Reduce to beta/type-beta normal form."""
    for term in reduction_steps(term, strategy, budget):
        pass
    return term


def is_normal(term: Term) -> bool:
    return _find_redex_lo(term) is None
