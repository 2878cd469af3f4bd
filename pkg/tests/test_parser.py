from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nfgeom.dsl import DSLError, parse_script, parse_statement, render_script, run_script
from nfgeom.examples import scenario_text
from nfgeom.parser import BinOp, Call, Name, Neg, Num, ParseError, parse_expr

leaves = st.one_of(st.integers(0, 20).map(lambda k: Num(Fraction(k))),
                   st.sampled_from(["x1", "y2", "a", "b"]).map(Name))


def _extend(children):
    return st.one_of(
        st.tuples(st.sampled_from("+-*/^"), children, children).map(lambda t: BinOp(*t)),
        children.map(Neg),
        st.tuples(st.sampled_from(["exp", "sqrt"]), children).map(lambda t: Call(*t)),
    )


trees = st.recursive(leaves, _extend, max_leaves=12)


@given(trees)
def test_render_round_trip(t):
    assert parse_expr(t.render()) == t


@pytest.mark.parametrize("text, tree", [
    ("-x^2", Neg(BinOp("^", Name("x"), Num(Fraction(2))))),
    ("2^3^2", BinOp("^", Num(Fraction(2)), BinOp("^", Num(Fraction(3)), Num(Fraction(2))))),
    ("a-b-c", BinOp("-", BinOp("-", Name("a"), Name("b")), Name("c"))),
    ("a/b*c", BinOp("*", BinOp("/", Name("a"), Name("b")), Name("c"))),
])
def test_precedence(text, tree):
    assert parse_expr(text) == tree


@pytest.mark.parametrize("text, col", [("y1 + * 2", 6), ("(y1 + 2", 8), ("foo(y1)", 1), ("y1 $ 2", 4)])
def test_errors_carry_columns(text, col):
    with pytest.raises(ParseError) as e:
        parse_expr(text, line=3)
    assert e.value.line == 3 and e.value.col == col


@pytest.mark.parametrize("name", ["ex1", "ex2", "ex3"])
def test_scenarios_round_trip(name):
    stmts = parse_script(scenario_text(name))
    text = render_script(stmts)
    assert parse_script(text) == stmts
    assert render_script(parse_script(text)) == text


@pytest.mark.parametrize("line", [
    "space dim=3",
    "F2 := y1^2 + y2^2",
    "assume y1 <> 0",
    "assume y1 + y2 = 0",
    "definetensor T[i,-k] = RG[i,-j,-k]*W[j]",
    "show RC[h,-i,-j,-k]",
    "solve nullity RC split_depth=1",
    "solve kernel RC",
    "bracket (h1, h2 + y1*h3)",
    "check numeric N RC points=3 tol=1e-9 seed=2",
    "check symmetry RG 2 3 sign=-1",
    "check homogeneity",
    "example ex2",
])
def test_statement_round_trip(line):
    st_ = parse_statement(line, 1)
    assert parse_statement(st_.render(), 1) == st_


@pytest.mark.parametrize("script, code", [
    ("space dim=2\nshow N[i,-j\n", 2),
    ("space dim=two\n", 2),
    ("frobnicate\n", 2),
    ("F2 := y1^2\n", 2),                                   # metric before space
    ("space dim=2\nF2 := y1^2 + y2^2\nshow Q[i]\n", 2),    # unknown tensor
    ("space dim=2\nF2 := y1^2\nshow N[i,-j]\n", 3),        # degenerate metric
])
def test_script_errors(script, code):
    with pytest.raises(DSLError) as e:
        run_script(script)
    assert e.value.code == code and e.value.line >= 1


def test_comments_and_blank_lines():
    stmts = parse_script("# header\n\nspace dim=2   # trailing\n")
    assert len(stmts) == 1 and stmts[0].line == 3
