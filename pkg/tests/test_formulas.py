from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import sympy_equal
from test_exactalg import rfs
from tetra.errors import ArityMismatch, FormulaSyntaxError, UnknownSymbol
from tetra.exactalg import rf_equal, var
from tetra.formulas import (
    Const,
    Expr,
    Var,
    ast_to_rf,
    builtin_file_names,
    load_builtin_file,
    parse_expr,
    parse_rf,
    parse_transform_file,
    render,
)


def test_precedence_and_associativity():
    assert parse_expr("a - b - c") == Expr("sub", None, (Expr("sub", None, (Var("a"), Var("b"))), Var("c")))
    assert parse_expr("a/b/c") == Expr("div", None, (Expr("div", None, (Var("a"), Var("b"))), Var("c")))
    assert parse_expr("-a^2") == Expr("neg", None, (Expr("pow", 2, (Var("a"),)),))


def test_rational_literal():
    assert parse_expr("1/2") == Const(Fraction(1, 2))
    assert rf_equal(parse_rf("3/4*a"), Fraction(3, 4) * var("a"))


def test_values_against_sympy():
    for src in ["(a+b)^3/(a-b)", "a1*a3 - a2 + 1/2", "x/(1 + x/(1 + x))", "-(a - b)^2 + 4*a*b"]:
        assert sympy_equal(parse_rf(src), src)


@pytest.mark.parametrize(
    "src, offset, expected",
    [
        ("a + ", 4, {"nat", "ident", "("}),
        ("a * (b + c", 10, {")"}),
        ("a $ b", 2, {"nat", "ident", "(", "-"}),
        ("a^b", 2, {"nat"}),
        ("a b", 2, {"eof"}),
    ],
)
def test_syntax_errors_carry_offset_and_expected(src, offset, expected):
    with pytest.raises(FormulaSyntaxError) as err:
        parse_expr(src)
    assert err.value.offset == offset
    assert expected <= err.value.expected


def test_offsets_are_bytes():
    with pytest.raises(FormulaSyntaxError) as err:
        parse_expr("a + é")
    assert err.value.offset == 4
    with pytest.raises(FormulaSyntaxError) as err:
        parse_expr("é")
    assert err.value.offset == 0


def test_universe_binding():
    assert rf_equal(ast_to_rf(parse_expr("a + b"), {"a": 1, "b": "c"}), var("c") + 1)


SMALL_TF = """# test map
name: swap3
width: 1
blocks: 3
inputs: a, b, c
free:
out[1] = c
out[2] = b
out[3] = a
"""


def test_transform_file_parses():
    tf = parse_transform_file(SMALL_TF)
    assert tf.name == "swap3" and tf.block_width == 1 and tf.input_names == ["a", "b", "c"]
    assert [render(e) for e in tf.outputs] == ["c", "b", "a"]


def test_transform_file_errors():
    with pytest.raises(ArityMismatch):
        parse_transform_file(SMALL_TF.replace("out[3] = a\n", ""))
    with pytest.raises(UnknownSymbol):
        parse_transform_file(SMALL_TF.replace("out[3] = a", "out[3] = z"))
    with pytest.raises(FormulaSyntaxError) as err:
        parse_transform_file(SMALL_TF.replace("out[2] = b", "out[2] = b +"))
    line_start = SMALL_TF.encode().index(b"out[2]")
    assert err.value.offset == line_start + len("out[2] = b +")
    with pytest.raises(FormulaSyntaxError):
        parse_transform_file(SMALL_TF.replace("width: 1", "colour: 1"))


def test_builtin_files_all_parse():
    names = builtin_file_names()
    assert {"lusztig", "sergeev_alpha", "very_small", "smaller2", "full3", "triple13"} <= set(names)
    for n in names:
        tf = load_builtin_file(n)
        assert len(tf.outputs) == tf.block_width * tf.block_count


# ---- round trip
idents = st.sampled_from(["a", "b", "c1", "a3p", "x"])
leaves = st.one_of(idents.map(Var), st.integers(0, 40).map(Const), st.fractions(min_value=0, max_value=5, max_denominator=7).map(Const))


def _extend(children):
    bin_ops = st.sampled_from(["add", "sub", "mul", "div"])
    return st.one_of(
        st.tuples(bin_ops, children, children).map(lambda t: Expr(t[0], None, (t[1], t[2]))),
        children.map(lambda c: Expr("neg", None, (c,))),
        st.tuples(children, st.integers(0, 4)).map(lambda t: Expr("pow", t[1], (t[0],))),
    )


asts = st.recursive(leaves, _extend, max_leaves=12)


@given(asts)
def test_render_parse_round_trip(ast):
    assert parse_expr(render(ast)) == ast


@given(asts)
def test_render_is_a_fixed_point(ast):
    text = render(ast)
    assert render(parse_expr(text)) == text


@given(rfs())
def test_rational_function_rendering_reparses(p):
    assert rf_equal(parse_rf(p.render()), p)
