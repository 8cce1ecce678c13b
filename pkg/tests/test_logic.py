import pytest

from tysem.composer import compose, parse_tree
from tysem.errors import NotNormal, NotTruthType, ResidualLambda
from tysem.kernel import (App, Arrow, BaseSort, Const, Lam, T, TypingContext,
                          Var, normalize, parse_term)
from tysem.logic import (And, Eps, Exists, Forall, Implies, LApp, LConst,
                         LVar, Not, Or, Pred, TruthConst, conjoin,
                         extract_formula, formula_alpha_eq, formula_to_json,
                         parse_formula, presuppositions, print_formula,
                         rewrite_hilbert)

ANI = BaseSort("ani")


@pytest.fixture
def ctx():
    return (TypingContext.default()
            .with_sorts({"ani"})
            .with_const("chat", Arrow(ANI, T))
            .with_const("dort", Arrow(ANI, T))
            .with_const("p", T)
            .with_const("q", T))


# ---------------------------------------------------------------------------
# extraction


def test_extract_figure_one(fig1):
    ctx = fig1.typing_context()
    term = normalize(compose(parse_tree("((un club) (a_battu Leeds))"),
                             fig1).term)
    f = extract_formula(term, ctx)
    assert f == Exists("x", "e", And(
        Pred("club", (LVar("x", "e"),)),
        Pred("a_battu", (LVar("x", "e"), LConst("Leeds", "e")))))


def test_extract_choice_argument(chat_lex):
    ctx = chat_lex.typing_context()
    term = parse_term("(dort ((tyapp eps ani) chat))", ctx)
    f = extract_formula(term, ctx)
    assert f == Pred("dort", (Eps("indef", "ani", "x",
                                  Pred("chat", (LVar("x", "ani"),))),))


def test_extract_connective_constants(ctx):
    f = extract_formula(parse_term("(and p q)", ctx), ctx)
    assert f == And(Pred("p", ()), Pred("q", ()))


def test_extract_rejects_redex(ctx):
    term = parse_term("((lam x ani (chat x)) ((tyapp eps ani) chat))", ctx)
    with pytest.raises(NotNormal):
        extract_formula(term, ctx)


def test_extract_rejects_non_truth(ctx):
    with pytest.raises(NotTruthType):
        extract_formula(parse_term("chat", ctx), ctx)


def test_extract_rejects_residual_lambda(ctx):
    term = Lam("x", ANI, App(Const("chat", Arrow(ANI, T)), Var("x", ANI)))
    with pytest.raises((NotTruthType, ResidualLambda)):
        extract_formula(term, ctx)


def test_extract_rejects_predicate_variable(ctx):
    term = App(Var("P", Arrow(ANI, T)), Const("fido", ANI))
    with pytest.raises(ResidualLambda):
        extract_formula(term, ctx.with_var("P", Arrow(ANI, T))
                              .with_const("fido", ANI))


def test_extract_eta_reduced_quantifier(ctx):
    # exists applied to a bare predicate constant, not an abstraction
    f = extract_formula(parse_term("((tyapp exists ani) chat)", ctx), ctx)
    assert f == Exists("x", "ani", Pred("chat", (LVar("x", "ani"),)))


def test_extract_coerced_arguments(fig2):
    ctx = fig2.typing_context()
    term = parse_term(
        "(and (est_vaste (t3 Liverpool)) (a_vote (t2 Liverpool)))", ctx)
    f = extract_formula(term, ctx)
    assert f == And(
        Pred("est_vaste", (LApp("t3", (LConst("Liverpool", "T"),)),)),
        Pred("a_vote", (LApp("t2", (LConst("Liverpool", "T"),)),)))


# ---------------------------------------------------------------------------
# presuppositions


def test_presupposition_of_indefinite(chat_lex):
    ctx = chat_lex.typing_context()
    term = parse_term("(dort ((tyapp eps ani) chat))", ctx)
    ps = presuppositions(term)
    assert len(ps) == 1
    assert print_formula(ps[0]) == "chat(eps[ani](x. chat(x)))"


def test_no_choice_no_presupposition(fig1):
    term = normalize(compose(parse_tree("((un club) (a_battu Leeds))"),
                             fig1).term)
    assert presuppositions(term) == []


def test_two_choice_terms_two_presuppositions(chat_lex):
    ctx = chat_lex.typing_context()
    ctx = ctx.with_const("voit", Arrow(ANI, Arrow(ANI, T)))
    term = parse_term(
        "((voit ((tyapp eps ani) chat)) ((tyapp eps ani) chien))", ctx)
    ps = presuppositions(term)
    assert len(ps) == 2
    texts = {print_formula(p) for p in ps}
    assert texts == {"chat(eps[ani](x. chat(x)))",
                     "chien(eps[ani](x. chien(x)))"}


def test_duplicate_presuppositions_emitted_once(chat_lex):
    ctx = chat_lex.typing_context()
    term = parse_term(
        "(and (dort ((tyapp eps ani) chat)) (aboie ((tyapp eps ani) chat)))",
        ctx)
    assert len(presuppositions(term)) == 1


def test_universal_has_no_presupposition(chat_lex):
    ctx = chat_lex.typing_context()
    term = parse_term("(dort ((tyapp tau ani) chat))", ctx)
    assert presuppositions(term) == []


def test_unresolved_definite_presupposes(chat_lex):
    ctx = chat_lex.typing_context()
    term = parse_term("(dort ((tyapp ieps ani) chat))", ctx)
    ps = presuppositions(term)
    assert len(ps) == 1
    assert print_formula(ps[0]) == "chat(the[ani](x. chat(x)))"


# ---------------------------------------------------------------------------
# hilbert rewriting


def _eps_chat():
    return Eps("indef", "ani", "x", Pred("chat", (LVar("x", "ani"),)))


def test_rewrite_exact_pattern():
    f = Pred("chat", (_eps_chat(),))
    assert rewrite_hilbert(f) == \
        Exists("x", "ani", Pred("chat", (LVar("x", "ani"),)))


def test_rewrite_universal_pattern():
    e = Eps("universal", "ani", "x", Pred("dort", (LVar("x", "ani"),)))
    f = Pred("dort", (e,))
    assert rewrite_hilbert(f) == \
        Forall("x", "ani", Pred("dort", (LVar("x", "ani"),)))


def test_rewrite_mismatch_left_intact():
    f = Pred("dort", (_eps_chat(),))
    assert rewrite_hilbert(f) == f


def test_rewrite_conjoined_presupposition():
    e = _eps_chat()
    f = And(Pred("chat", (e,)), Pred("dort", (e,)))
    assert rewrite_hilbert(f) == Exists("x", "ani", And(
        Pred("chat", (LVar("x", "ani"),)),
        Pred("dort", (LVar("x", "ani"),))))


def test_rewrite_two_independent_choices():
    e1 = _eps_chat()
    e2 = Eps("indef", "ani", "y", Pred("chien", (LVar("y", "ani"),)))
    f = And(And(Pred("chat", (e1,)), Pred("chien", (e2,))),
            And(Pred("dort", (e1,)), Pred("court", (e2,))))
    out = rewrite_hilbert(f)
    assert isinstance(out, Exists)
    assert isinstance(out.body, Exists)
    assert "eps" not in print_formula(out)


def test_rewrite_definite_becomes_existential():
    e = Eps("def", "ani", "x", Pred("chat", (LVar("x", "ani"),)))
    f = Pred("chat", (e,))
    assert isinstance(rewrite_hilbert(f), Exists)


def test_rewrite_inside_connectives():
    f = Or(Pred("chat", (_eps_chat(),)), TruthConst(False))
    out = rewrite_hilbert(f)
    assert out == Or(Exists("x", "ani", Pred("chat", (LVar("x", "ani"),))),
                     TruthConst(False))


def test_rewrite_avoids_capture():
    # an outer quantifier already uses the hole name; the conjunct match
    # fires at the conjunction and must pick a fresh variable
    inner = Pred("chat", (_eps_chat(),))
    f = Exists("x", "ani", And(Pred("dort", (LVar("x", "ani"),)), inner))
    out = rewrite_hilbert(f)
    assert isinstance(out.body, Exists)
    fresh = out.body.var
    assert fresh != "x"
    assert out.body.body == And(Pred("dort", (LVar("x", "ani"),)),
                                Pred("chat", (LVar(fresh, "ani"),)))


# ---------------------------------------------------------------------------
# printing and parsing


def test_print_ascii_strings():
    f = Exists("x", "e", And(Pred("club", (LVar("x", "e"),)),
                             Pred("a_battu", (LVar("x", "e"),
                                              LConst("Leeds", "e")))))
    assert print_formula(f) == "exists x:e. (club(x) & a_battu(x,Leeds))"
    assert print_formula(Pred("chat", (_eps_chat(),))) == \
        "chat(eps[ani](x. chat(x)))"


def test_print_unicode():
    f = Forall("x", "ani", Not(Pred("chat", (LVar("x", "ani"),))))
    assert print_formula(f, "unicode") == "∀x:ani. ¬chat(x)"


def test_print_sexpr_interface():
    f = Exists("x", "ani", And(Pred("chat", (LVar("x", "ani"),)),
                               Pred("dort", (LVar("x", "ani"),))))
    assert print_formula(f, "sexpr") == \
        "(exists (x ani) (and (chat x) (dort x)))"


def test_precedence_minimal_parens():
    a, b, c = Pred("a", ()), Pred("b", ()), Pred("c", ())
    assert print_formula(Implies(And(a, b), c)) == "a & b -> c"
    assert print_formula(And(a, Or(b, c))) == "a & (b | c)"
    assert print_formula(Or(And(a, b), c)) == "a & b | c"
    assert print_formula(Not(And(a, b))) == "not (a & b)"
    assert print_formula(And(And(a, b), c)) == "a & b & c"
    assert print_formula(And(a, And(b, c))) == "a & (b & c)"
    assert print_formula(Implies(a, Implies(b, c))) == "a -> b -> c"


def test_parse_round_trip_simple():
    f = Exists("x", "ani", Implies(Pred("chat", (LVar("x", "ani"),)),
                                   Not(TruthConst(False))))
    assert parse_formula(print_formula(f, "sexpr")) == f


def test_parse_eps_round_trip():
    f = Pred("dort", (_eps_chat(),))
    text = print_formula(f, "sexpr")
    assert text == "(dort (eps ani x (chat x)))"
    assert parse_formula(text) == f


def test_parse_with_constant_sorts():
    f = parse_formula("(chat fido)", constants={"fido": "ani"})
    assert f == Pred("chat", (LConst("fido", "ani"),))


def test_json_rendering():
    doc = formula_to_json(Pred("chat", (_eps_chat(),)))
    assert doc["node"] == "pred"
    assert doc["args"][0]["term"] == "choice"
    assert doc["args"][0]["mode"] == "indef"


def test_extraction_total_on_golden_sentences(fig1, fig2, chat_lex,
                                              homme_lex):
    """extract_formula after normalize succeeds on every sentence the
    golden lexica compose."""
    battery = [
        (fig1, "((un club) (a_battu Leeds))"),
        (fig2, "((et est_vaste a_vote) Liverpool)"),
        (fig2, "(est_vaste Liverpool)"),
        (fig2, "(a_vote Liverpool)"),
        (chat_lex, "(dort (un chat))"),
        (chat_lex, "(dort (le chat))"),
        (chat_lex, "(dort (tout chat))"),
        (chat_lex, "(aboie (un chien))"),
        (homme_lex, "(est_entre (un homme))"),
        (homme_lex, "(a_hurle (le homme))"),
    ]
    for lex, text in battery:
        term = normalize(compose(parse_tree(text), lex).term)
        extract_formula(term, lex.typing_context())


def test_conjoin_and_alpha_eq():
    f1 = Exists("x", "ani", Pred("chat", (LVar("x", "ani"),)))
    f2 = Exists("y", "ani", Pred("chat", (LVar("y", "ani"),)))
    assert formula_alpha_eq(f1, f2)
    assert conjoin([f1]) == f1
    assert conjoin([f1, f2]) == And(f1, f2)
    assert conjoin([]) == TruthConst(True)
