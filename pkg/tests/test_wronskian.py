from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import to_sympy
from tetra.errors import IndexOutOfRange, InsufficientTruncationOrder, NotInGeneralPosition
from tetra.exactalg import TruncatedSeries, const, var
from tetra.words import ReducedWord
from tetra.wronskian import (
    a_on_collection,
    a_on_wrtuple,
    commutation_report,
    normalize_collection,
    ode_residual_ok,
    poly_derivative,
    solve_evolution_ode,
    standard_collection,
    wr_map,
    wronskian_coordinates,
    wronskian_det,
)

x = var("x")
X = sympy.Symbol("x")


def series_to_sympy(s: TruncatedSeries):
    return sum(to_sympy(c) * X**k for k, c in enumerate(s.coeffs))


def truncated(expr, order):
    return sympy.expand(sympy.series(expr, X, 0, order + 1).removeO())


def test_poly_derivative():
    a = var("a")
    assert poly_derivative(a * x**3 + x / a) == 3 * a * x**2 + 1 / a
    with pytest.raises(ValueError):
        poly_derivative(1 / (1 + x))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_wronskian_det_against_sympy(k):
    a, b = var("a"), var("b")
    pool = [1 + a * x, x + b * x**2, x**2 / 2 + a * x**3, x**3 / 6 + x**4, b + x**4]
    us = pool[:k]
    got = to_sympy(wronskian_det(us))
    want = sympy.wronskian([to_sympy(u) for u in us], X)
    assert sympy.simplify(got - want) == 0


def test_wronskian_det_of_series_and_order_check():
    s = [TruncatedSeries.from_rf(1 + x, "x", 4), TruncatedSeries.from_rf(x * x, "x", 4)]
    w = wronskian_det(s)
    assert series_to_sympy(w) == truncated(sympy.wronskian([1 + X, X**2], X), w.order)
    with pytest.raises(InsufficientTruncationOrder):
        wronskian_det([TruncatedSeries.from_rf(1 + x, "x", 0)] * 2)


@pytest.mark.parametrize("r1", [2, 3, 4, 5])
def test_standard_collection_has_wronskians_one(r1):
    f = wr_map(standard_collection(r1))
    assert all(s.coeffs[0] == 1 and all(c.is_zero() for c in s.coeffs[1:]) for s in f.f)


def test_normalize_collection():
    a = var("a")
    us = [1 + 2 * x + x**2, 3 + x + a * x**2, 1 + x**2]
    u = normalize_collection(us)
    for i, p in enumerate(u.polys):
        cs = [to_sympy(c) for c in sympy.Poly(to_sympy(p), X).all_coeffs()[::-1]]
        cs += [0] * (i + 1 - len(cs))
        assert all(sympy.simplify(c) == 0 for c in cs[:i])
        assert sympy.simplify(cs[i] - sympy.Rational(1, sympy.factorial(i))) == 0
    # same flag: each u_i lies in the span of the first i originals
    for i in range(1, 4):
        M = sympy.Matrix([sympy.Poly(to_sympy(p), X).all_coeffs()[::-1] + [0] * 3 for p in us[:i] + [u.polys[i - 1]]])
        M = M[:, :3].applyfunc(sympy.simplify)
        assert M.rank(simplify=True) == i
    with pytest.raises(NotInGeneralPosition):
        normalize_collection([x, x**2])


def test_a_on_collection_and_index_errors():
    u = standard_collection(3)
    a = var("a")
    v = a_on_collection(u, 2, a)
    assert v.polys[1] == x / a + x**2 / 2 and v.polys[2] == a * x**2 / 2
    with pytest.raises(IndexOutOfRange):
        a_on_collection(u, 3, a)
    with pytest.raises(ZeroDivisionError):
        a_on_collection(u, 1, 0)


def test_wr_of_evolved_collection_against_sympy():
    a, b = sympy.symbols("a b")
    u = [1, X, X**2 / 2, X**3 / 6]
    u2 = [u[0], u[1] / a + u[2], a * u[2], u[3]]
    u12 = [u2[0] / b + u2[1], b * u2[1], u2[2], u2[3]]
    ours = a_on_collection(a_on_collection(standard_collection(4), 2, var("a")), 1, var("b"))
    want = [sympy.simplify(sympy.wronskian(u12[:i], X)) for i in range(1, 5)]
    got = wr_map(ours)
    for s, w in zip(got.f, want):
        assert sympy.expand(series_to_sympy(s) - truncated(w, s.order)) == 0
    # the third and fourth Wronskians stay 1: the operator has determinant one
    assert want[2] == 1 and want[3] == 1


@pytest.mark.parametrize("r1,i", [(3, 1), (3, 2), (4, 2), (4, 3)])
def test_commutation_holds_under_wronskian_convention(r1, i):
    rep = commutation_report(standard_collection(r1), i, var("a"), convention="wronskian")
    assert rep["equal"]


@pytest.mark.parametrize("r1,i", [(3, 1), (4, 2)])
def test_printed_operator_differs_only_in_component_i_plus_1(r1, i):
    rep = commutation_report(standard_collection(r1), i, var("a"), convention="printed")
    assert rep["mismatches"] == [i + 1]


@given(
    st.lists(st.fractions(min_value=Fraction(1, 9), max_value=9), min_size=4, max_size=4),
    st.integers(1, 3),
    st.fractions(min_value=Fraction(1, 9), max_value=9),
)
def test_commutation_property(c, i, a):
    u = standard_collection(4, c)
    u = a_on_collection(u, 1, Fraction(3, 2))
    assert commutation_report(u, i, a, convention="wronskian")["equal"]


def test_ode_solution_satisfies_ode():
    u = a_on_collection(standard_collection(4), 2, var("a"))
    f = wr_map(u)
    for i in (1, 2, 3):
        g = solve_evolution_ode(f, i)
        assert g.coeffs[0].is_zero()
        assert ode_residual_ok(f, i, g)


def test_a_on_wrtuple_conventions():
    f = wr_map(standard_collection(3))
    a = var("a")
    p = a_on_wrtuple(f, 1, a, "printed")
    w = a_on_wrtuple(f, 1, a, "wronskian")
    assert p.f[0] == w.f[0]
    assert p.f[1] == f.f[1].scale(a) and w.f[1] == f.f[1]
    with pytest.raises(ValueError):
        a_on_wrtuple(f, 1, a, "other")


def test_wronskian_coordinates_constants_nonzero():
    rows = wronskian_coordinates(ReducedWord(3, (1, 2, 1)))
    assert [r["k"] for r in rows] == [0, 1, 2, 3]
    assert all(not r["constant_rf"].is_zero() for r in rows[1:])
    assert rows[0]["w"] == "1"


def test_standard_collection_constants():
    c = [var("c1"), var("c2"), var("c3")]
    f = wr_map(standard_collection(3, c))
    assert [s.coeffs[0] for s in f.f] == [c[0], c[0] * c[1], c[0] * c[1] * c[2]]
    assert f.a[2] == c[0] * c[1] * c[2] * const(1)
