import json

from tysem.cli import main

LEXICA = "lexica"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# analyze


def test_analyze_figure_one(capsys):
    code, out, _ = run(capsys, "analyze", "--lexicon", f"{LEXICA}/fig1.lex",
                       "--tree", "((un club) (a_battu Leeds))", "--rewrite")
    assert code == 0
    assert out.splitlines()[-1] == \
        "formula: exists x:e. (club(x) & a_battu(x,Leeds))"


def test_analyze_copredication(capsys):
    code, out, _ = run(capsys, "analyze", "--lexicon", f"{LEXICA}/fig2.lex",
                       "--tree", "((et est_vaste a_vote) Liverpool)")
    assert code == 0
    assert "normal: (and (est_vaste (t3 Liverpool)) (a_vote (t2 Liverpool)))" \
        in out.splitlines()
    assert any(line.startswith("coercions: Liverpool#") for
               line in out.splitlines())


def test_analyze_rigidity_exit_code(capsys):
    code, _, err = run(capsys, "analyze", "--lexicon", f"{LEXICA}/fig2.lex",
                       "--tree", "((et a_gagne a_vote) Liverpool)")
    assert code == 2
    assert "t1" in err


def test_analyze_type_clash_exit_code(capsys, tmp_path):
    lex = tmp_path / "mini.lex"
    lex.write_text("""
    (sort ani) (sort furniture)
    (const aboie (-> ani t))
    (const chaise (-> furniture t))
    (entry "une" (principal eps) (mode indefinite))
    (entry "aboie" (principal aboie))
    (entry "chaise" (principal chaise))
    """)
    code, _, err = run(capsys, "analyze", "--lexicon", str(lex),
                       "--tree", "(aboie (une chaise))")
    assert code == 2
    assert "aboie" in err and "chaise" in err


def test_analyze_io_error(capsys):
    code, _, err = run(capsys, "analyze", "--lexicon", "no-such-file.lex",
                       "--tree", "(a b)")
    assert code == 1


def test_analyze_syntax_error(capsys):
    code, _, err = run(capsys, "analyze", "--lexicon", f"{LEXICA}/chat.lex",
                       "--tree", "(dort (un chat")
    assert code == 1
    assert "parenthesis" in err


def test_analyze_presupposition_modes(capsys):
    base = ("analyze", "--lexicon", f"{LEXICA}/chat.lex",
            "--tree", "(dort (un chat))")
    _, out, _ = run(capsys, *base)
    assert "presupposition: chat(eps[ani](x. chat(x)))" in out
    assert out.splitlines()[-1] == \
        "formula: dort(eps[ani](x. chat(x)))"

    _, out, _ = run(capsys, *base, "--presuppositions", "conjoin",
                    "--rewrite")
    assert "presupposition:" not in out
    assert out.splitlines()[-1] == \
        "formula: exists x:ani. (chat(x) & dort(x))"

    _, out, _ = run(capsys, *base, "--presuppositions", "off")
    assert "presupposition" not in out


def test_analyze_trace(capsys):
    base = ("analyze", "--lexicon", f"{LEXICA}/fig1.lex",
            "--tree", "((un club) (a_battu Leeds))")
    _, plain, _ = run(capsys, *base)
    _, traced, _ = run(capsys, *base, "--trace")
    steps = [l for l in traced.splitlines() if l.startswith("step ")]
    assert steps, "trace must show reduction steps"
    assert traced.splitlines()[-1] == plain.splitlines()[-1]
    # the steps replay the reduction: the last step is the normal form
    normal_line = next(l for l in plain.splitlines()
                       if l.startswith("normal: "))
    assert steps[-1].split(": ", 1)[1] == normal_line.split(": ", 1)[1]


def test_analyze_deterministic_output(capsys):
    args = ("analyze", "--lexicon", f"{LEXICA}/fig2.lex",
            "--tree", "((et est_vaste a_vote) Liverpool)", "--rewrite")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2


def test_analyze_json_format(capsys):
    code, out, _ = run(capsys, "analyze", "--lexicon",
                       f"{LEXICA}/chat.lex", "--tree", "(dort (un chat))",
                       "--format", "json", "--rewrite",
                       "--presuppositions", "conjoin")
    assert code == 0
    doc = json.loads(out)
    sent = doc["sentences"][0]
    assert sent["formula"] == "exists x:ani. (chat(x) & dort(x))"
    assert sent["formula_json"]["node"] == "exists"


def test_analyze_sexpr_format(capsys):
    code, out, _ = run(capsys, "analyze", "--lexicon",
                       f"{LEXICA}/chat.lex", "--tree", "(dort (un chat))",
                       "--format", "sexpr")
    assert code == 0
    assert "(formula (dort (eps ani x (chat x))))" in out


def test_analyze_unicode_style(capsys):
    _, out, _ = run(capsys, "analyze", "--lexicon", f"{LEXICA}/chat.lex",
                    "--tree", "(dort (un chat))", "--style", "unicode",
                    "--presuppositions", "conjoin", "--rewrite")
    assert out.splitlines()[-1] == \
        "formula: ∃x:ani. (chat(x) ∧ dort(x))"


def test_session_mode(capsys):
    code, out, _ = run(capsys, "analyze", "--lexicon",
                       f"{LEXICA}/homme.lex", "--session",
                       "sessions/homme.session", "--rewrite")
    assert code == 0
    assert out.splitlines()[-1] == ("discourse: exists x:humain. "
                                    "(homme(x) & est_entre(x) & a_hurle(x))")


# ---------------------------------------------------------------------------
# eval


def test_eval_true(capsys, tmp_path):
    model = tmp_path / "m.model"
    model.write_text("(model (carrier ani (c1 c2)) (interp chat ((c1)))"
                     " (interp dort ((c1))))")
    code, out, _ = run(capsys, "eval", "--model", str(model),
                       "--formula", "(dort (eps ani x (chat x)))")
    assert code == 0
    assert out.strip() == "true"


def test_eval_missing_interp(capsys, tmp_path):
    model = tmp_path / "m.model"
    model.write_text("(model (carrier ani (c1)))")
    code, _, err = run(capsys, "eval", "--model", str(model),
                       "--formula", "(dort (eps ani x (chat x)))")
    assert code == 1
    assert "chat" in err


def test_eval_equivalence(capsys, tmp_path):
    model = tmp_path / "m.model"
    model.write_text("(model (carrier s (s1)))")
    code, out, _ = run(capsys, "eval", "--model", str(model),
                       "--formula", "(F (eps s x (F x)))",
                       "--equiv", "(exists (x s) (F x))",
                       "--max-carrier", "4")
    assert code == 0
    assert out.startswith("equivalent (30 models)")


def test_eval_counter_model(capsys, tmp_path):
    model = tmp_path / "m.model"
    model.write_text("(model (carrier s (s1)))")
    code, out, _ = run(capsys, "eval", "--model", str(model),
                       "--formula", "(G (eps s x (F x)))",
                       "--equiv", "(exists (x s) (G x))")
    assert code == 0
    assert "not equivalent" in out
    assert "(model" in out


# ---------------------------------------------------------------------------
# check-lexicon


def test_check_lexicon_ok(capsys):
    code, out, _ = run(capsys, "check-lexicon", f"{LEXICA}/fig2.lex")
    assert code == 0
    assert out.startswith("ok:")


def test_check_lexicon_bad(capsys, tmp_path):
    bad = tmp_path / "bad.lex"
    bad.write_text('(entry "w" (principal nonsense))')
    code, _, err = run(capsys, "check-lexicon", str(bad))
    assert code == 1
    assert "nonsense" in err or "w" in err
