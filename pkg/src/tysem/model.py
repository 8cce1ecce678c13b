"""Finite multisorted models with choice-function semantics.

A model lists one finite carrier per sort — the listing order doubles as
the choice and salience order — and interprets constants as elements,
predicate extensions, or function tables (tuples whose last component is
the result).  Indefinite and definite choice terms denote the first carrier
element satisfying their restriction, falling back to the first element;
the universal choice term denotes the first element falsifying it.  With
this semantics `B(choice_x B)` agrees with the corresponding quantifier on
every finite model, which the brute-force equivalence checker verifies by
enumerating all small models.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (EmptyCarrier, EvalError, ModelError, ParseError,
                     UninterpretedConstant)
from .logic import (And, Eps, Eq, Exists, Forall, Formula, Implies, LApp,
                    LConst, LTerm, LVar, Not, Or, Pred, TruthConst, UNIVERSAL,
                    free_formula_vars)
from .sexpr import expect_atom, expect_list, read_one

Interp = str | frozenset[tuple[str, ...]]


@dataclass(frozen=True)
class Model:
    """Carriers in choice order plus interpretations.

    carrier(e) defaults to the ordered union of all declared carriers;
    `hat_<sort>` is always interpreted as membership in that sort's carrier.
    """
    carriers: dict[str, tuple[str, ...]] = field(default_factory=dict)
    interps: dict[str, Interp] = field(default_factory=dict)

    def carrier(self, sort: str) -> tuple[str, ...]:
        if sort in self.carriers:
            return self.carriers[sort]
        if sort == "e":
            seen: list[str] = []
            for elems in self.carriers.values():
                for el in elems:
                    if el not in seen:
                        seen.append(el)
            if not seen:
                raise EmptyCarrier("e")
            return tuple(seen)
        raise ModelError(f"no carrier declared for sort '{sort}'")


@dataclass(frozen=True)
class InterpPredicate:
    """A one-place predicate with its domain sort and extension."""
    name: str
    domain: str
    extension: frozenset[str]


# ---------------------------------------------------------------------------
# model files


def load_model(text: str) -> Model:
    """`(model (carrier SYM (ID+))+ (interp SYM ((ID*)+))*)`; the carrier
    listing order is the choice order."""
    form = expect_list(read_one(text), "(model ...)")
    if len(form) == 0 or expect_atom(form[0], "model").text != "model":
        raise ParseError("expected (model ...)", form.line, form.col)
    carriers: dict[str, tuple[str, ...]] = {}
    interps: dict[str, Interp] = {}
    for decl in form.items[1:]:
        decl = expect_list(decl, "(carrier ...) or (interp ...)")
        head = expect_atom(decl[0], "carrier or interp").text
        if head == "carrier":
            if len(decl) != 3:
                raise ParseError("(carrier SYM (ID+))", decl.line, decl.col)
            sort = expect_atom(decl[1], "sort").text
            elems = tuple(expect_atom(el, "element id").text
                          for el in expect_list(decl[2], "(ID+)"))
            if not elems:
                raise ModelError(f"carrier for '{sort}' is empty")
            if sort in carriers:
                raise ModelError(f"duplicate carrier for '{sort}'")
            carriers[sort] = elems
        elif head == "interp":
            if len(decl) != 3:
                raise ParseError("(interp SYM ((ID*)+))", decl.line, decl.col)
            name = expect_atom(decl[1], "constant").text
            rows = expect_list(decl[2], "tuple list")
            tuples = frozenset(
                tuple(expect_atom(el, "element id").text
                      for el in expect_list(row, "tuple"))
                for row in rows)
            interps[name] = tuples
        else:
            raise ParseError(f"unknown model clause '{head}'",
                               decl.line, decl.col)
    known = {el for elems in carriers.values() for el in elems}
    for name, tuples in interps.items():
        for row in tuples:
            for el in row:
                if el not in known:
                    raise ModelError(
                        f"interp of '{name}' uses unknown element '{el}'")
    return Model(carriers, interps)


def print_model(m: Model) -> str:
    parts = ["(model"]
    for sort, elems in m.carriers.items():
        parts.append(f"  (carrier {sort} ({' '.join(elems)}))")
    for name, interp in m.interps.items():
        if isinstance(interp, str):
            parts.append(f"  (interp {name} (({interp})))")
        else:
            rows = " ".join(f"({' '.join(row)})" for row in sorted(interp))
            parts.append(f"  (interp {name} ({rows}))")
    return "\n".join(parts) + ")"


# ---------------------------------------------------------------------------
# evaluation


def eval_formula(m: Model, f: Formula) -> bool:
    """Tarskian evaluation with choice semantics for choice terms."""
    return _eval(f, m, {})


def _eval(f: Formula, m: Model, env: dict[str, str]) -> bool:
    match f:
        case TruthConst(v):
            return v
        case Pred(name, args):
            elems = tuple(_resolve(a, m, env) for a in args)
            return _pred_holds(m, name, elems)
        case And(l, r):
            return _eval(l, m, env) and _eval(r, m, env)
        case Or(l, r):
            return _eval(l, m, env) or _eval(r, m, env)
        case Implies(l, r):
            return (not _eval(l, m, env)) or _eval(r, m, env)
        case Not(op):
            return not _eval(op, m, env)
        case Eq(l, r):
            return _resolve(l, m, env) == _resolve(r, m, env)
        case Exists(var, sort, body):
            carrier = _nonempty_carrier(m, sort)
            return any(_eval(body, m, {**env, var: el}) for el in carrier)
        case Forall(var, sort, body):
            carrier = _nonempty_carrier(m, sort)
            return all(_eval(body, m, {**env, var: el}) for el in carrier)
    raise AssertionError(f)


def _nonempty_carrier(m: Model, sort: str) -> tuple[str, ...]:
    carrier = m.carrier(sort)
    if not carrier:
        raise EmptyCarrier(sort)
    return carrier


def _pred_holds(m: Model, name: str, elems: tuple[str, ...]) -> bool:
    interp = m.interps.get(name)
    if interp is None:
        if name.startswith("hat_"):
            sort = name[4:]
            if sort in m.carriers or sort == "e":
                return len(elems) == 1 and elems[0] in m.carrier(sort)
        raise UninterpretedConstant(name)
    if isinstance(interp, str):
        raise EvalError(f"'{name}' is an individual, not a predicate")
    return elems in interp


def _resolve(t: LTerm, m: Model, env: dict[str, str]) -> str:
    match t:
        case LVar(name, _):
            if name not in env:
                raise EvalError(f"unbound variable '{name}'")
            return env[name]
        case LConst(name, _):
            interp = m.interps.get(name)
            if interp is None:
                raise UninterpretedConstant(name)
            if isinstance(interp, str):
                return interp
            rows = list(interp)
            if len(rows) == 1 and len(rows[0]) == 1:
                return rows[0][0]
            raise EvalError(f"'{name}' is not interpreted as an individual")
        case LApp(fn, args):
            interp = m.interps.get(fn)
            if interp is None:
                raise UninterpretedConstant(fn)
            if isinstance(interp, str):
                raise EvalError(f"'{fn}' is an individual, not a function")
            elems = tuple(_resolve(a, m, env) for a in args)
            for row in interp:
                if len(row) == len(elems) + 1 and row[:-1] == elems:
                    return row[-1]
            raise EvalError(f"function '{fn}' undefined at ({', '.join(elems)})")
        case Eps(mode, sort, hole, body):
            outer = free_formula_vars(body) - {hole}
            if outer:
                raise EvalError(
                    "choice term depends on enclosing binders "
                    f"({', '.join(sorted(outer))}); such Henkin-style "
                    "dependencies are not evaluated")
            carrier = _nonempty_carrier(m, sort)
            want = mode != UNIVERSAL
            for el in carrier:
                if _eval(body, m, {**env, hole: el}) == want:
                    return el
            return carrier[0]
    raise AssertionError(t)


# ---------------------------------------------------------------------------
# brute-force equivalence


@dataclass(frozen=True)
class Verdict:
    equivalent: bool
    counter_model: Model | None
    models_checked: int

    def __bool__(self):
        return self.equivalent


PredicateSig = tuple[str, tuple[str, ...]]  # name, argument sorts


def enumerate_models(sorts: list[str], max_carrier: int,
                     predicates: list[PredicateSig]):
    """All models over the given sorts with carrier sizes 1..max_carrier
    and every extension of the given predicates."""
    for sizes in itertools.product(range(1, max_carrier + 1),
                                   repeat=len(sorts)):
        carriers = {s: tuple(f"{s}{i + 1}" for i in range(n))
                    for s, n in zip(sorts, sizes)}
        spaces = []
        for name, arg_sorts in predicates:
            space = list(itertools.product(
                *(carriers[s] for s in arg_sorts)))
            subsets = [frozenset(rows)
                       for k in range(len(space) + 1)
                       for rows in itertools.combinations(space, k)]
            spaces.append((name, subsets))
        for choice in itertools.product(*(subs for _, subs in spaces)):
            yield Model(carriers, {name: ext
                                   for (name, _), ext in zip(spaces, choice)})


def check_equivalence(f1: Formula, f2: Formula, sorts: list[str],
                      max_carrier: int,
                      predicates: list[PredicateSig]) -> Verdict:
    """Brute force: evaluate both formulas on every enumerated model and
    return the first counter-model, or `equivalent`."""
    if max_carrier < 1:
        raise ValueError("max_carrier must be at least 1")
    checked = 0
    for model in enumerate_models(sorts, max_carrier, predicates):
        checked += 1
        if eval_formula(model, f1) != eval_formula(model, f2):
            return Verdict(False, model, checked)
    return Verdict(True, None, checked)


# ---------------------------------------------------------------------------
# predicate extension and restriction


def extend_interp(m: Model, p: InterpPredicate,
                  to_sort: str) -> InterpPredicate:
    """Extend a predicate to a larger sort: same satisfying set, false
    outside the original domain."""
    dom, target = set(m.carrier(p.domain)), set(m.carrier(to_sort))
    if not dom <= target:
        raise ModelError(
            f"carrier of '{p.domain}' is not contained in '{to_sort}'")
    return InterpPredicate(p.name, to_sort, p.extension)


def restrict_interp(m: Model, p: InterpPredicate,
                    to_sort: str) -> InterpPredicate:
    """Restrict a predicate to a smaller sort: intersect the extension
    with the smaller carrier."""
    dom, target = set(m.carrier(p.domain)), set(m.carrier(to_sort))
    if not target <= dom:
        raise ModelError(
            f"carrier of '{to_sort}' is not contained in '{p.domain}'")
    return InterpPredicate(p.name, to_sort,
                           p.extension & frozenset(m.carrier(to_sort)))
