"""Wronskians of normalized polynomial collections and the two A_i(a) actions.

Polynomials in the distinguished variable (default ``x``) are stored as
RationalFunction values whose denominators do not involve ``x``; Wronskian
tuples are truncated series, since the evolution ODE need not produce a
polynomial.

>>> from tetra.exactalg import var
>>> u = standard_collection(3)
>>> [str(f) for f in wr_map(u).f]
['1 + O(x^7)', '1 + O(x^7)', '1 + O(x^7)']
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import List, Optional, Sequence

from .errors import (
    IndexOutOfRange,
    InsufficientTruncationOrder,
    NotInGeneralPosition,
    ODEInconsistent,
    TheoremViolated,
)
from .evolve import (
    MatrixRF,
    TEMPLATES,
    permutation_factorization,
    permutation_matrix,
    product_along_word,
    symbolic_blocks,
)
from .exactalg import Polynomial, RationalFunction, TruncatedSeries, as_rf, const, rf_equal, var
from .words import ReducedWord

__all__ = [
    "PolyTuple",
    "WrTuple",
    "poly_derivative",
    "wronskian_det",
    "standard_collection",
    "normalize_collection",
    "a_on_collection",
    "wr_map",
    "a_on_wrtuple",
    "solve_evolution_ode",
    "ode_residual_ok",
    "check_commutation",
    "commutation_report",
    "wronskian_coordinates",
    "default_order",
]

X = "x"


def default_order(r_plus_1: int) -> int:
    return 2 * r_plus_1


# ------------------------------------------------------------------ polynomials in x
def _poly_coeffs(p, x: str = X) -> List[RationalFunction]:
    """Coefficients of a polynomial in ``x`` (denominator free of ``x``)."""
    p = as_rf(p)
    if x in p.den.variables():
        raise ValueError(f"{p.render()} is not a polynomial in {x}")
    cs = p.num.coeffs_in(x)
    deg = max(cs) if cs else 0
    den = RationalFunction(p.den)
    return [(RationalFunction(cs.get(k, Polynomial())) / den).simplify() for k in range(deg + 1)]


def poly_derivative(p, x: str = X) -> RationalFunction:
    """d/dx of a polynomial in ``x`` with rational-function coefficients."""
    cs = _poly_coeffs(p, x)
    xv = var(x)
    acc = const(0)
    for k in range(1, len(cs)):
        if not cs[k].is_zero():
            acc = acc + cs[k] * k * xv ** (k - 1)
    return acc.simplify()


def _series_derivative(s: TruncatedSeries, times: int) -> TruncatedSeries:
    for _ in range(times):
        if s.order == 0:
            raise InsufficientTruncationOrder("series order too low for the required derivatives")
        s = s.derivative()
    return s


def _series_det(rows: List[List[TruncatedSeries]]) -> TruncatedSeries:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = None
    for j in range(n):
        entry = rows[0][j]
        if entry.is_zero():
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = entry * _series_det(minor)
        term = term if j % 2 == 0 else -term
        acc = term if acc is None else acc + term
    if acc is None:
        order = min(e.order for r in rows for e in r)
        return TruncatedSeries(rows[0][0].dist_var, [0], order)
    return acc


def wronskian_det(us: Sequence, x: str = X):
    """Determinant of the matrix of derivatives u_j^(k), k = 0..i-1.

    Polynomial inputs give an exact polynomial; series inputs give a series
    whose order drops by i-1 (InsufficientTruncationOrder if that is negative).
    """
    if not us:
        raise ValueError("Wronskian of an empty tuple; use 1 by convention")
    i = len(us)
    if all(isinstance(u, TruncatedSeries) for u in us):
        if min(u.order for u in us) < i - 1:
            raise InsufficientTruncationOrder(f"{i} functions need series order at least {i - 1}")
        cols = []
        for u in us:
            col = [u]
            for _ in range(i - 1):
                col.append(col[-1].derivative())
            cols.append(col)
        rows = [[cols[j][k] for j in range(i)] for k in range(i)]
        return _series_det(rows)
    if any(isinstance(u, TruncatedSeries) for u in us):
        raise TypeError("mix of series and polynomials; convert first")
    cols = []
    for u in us:
        col = [as_rf(u)]
        for _ in range(i - 1):
            col.append(poly_derivative(col[-1], x))
        cols.append(col)
    return MatrixRF([[cols[j][k] for j in range(i)] for k in range(i)]).det().simplify()


# ------------------------------------------------------------------ collections
@dataclass(frozen=True)
class PolyTuple:
    polys: tuple
    params: tuple
    dist_var: str = X

    @property
    def r_plus_1(self) -> int:
        return len(self.polys)

    def render(self) -> List[str]:
        return [p.render() for p in self.polys]


@dataclass(frozen=True)
class WrTuple:
    f: tuple
    a: tuple

    @property
    def r_plus_1(self) -> int:
        return len(self.f)

    def render(self) -> List[str]:
        return [s.render() for s in self.f]


def standard_collection(r_plus_1: int, c: Optional[Sequence] = None, x: str = X) -> PolyTuple:
    """(c_1, c_2 x, c_3 x^2/2, ...); c defaults to all ones."""
    c = [as_rf(v) for v in (c or [1] * r_plus_1)]
    xv = var(x)
    polys = tuple((c[i] * xv ** i / factorial(i)).simplify() for i in range(r_plus_1))
    return PolyTuple(polys, tuple(c), x)


def _leading_constants(polys, x: str) -> List[RationalFunction]:
    """c_i with u_i = c_i x^(i-1)/(i-1)! + higher order; NotInGeneralPosition otherwise."""
    out = []
    for i, p in enumerate(polys):
        cs = _poly_coeffs(p, x)
        cs += [const(0)] * (i + 1 - len(cs))
        if any(not cs[k].is_zero() for k in range(i)):
            raise NotInGeneralPosition(f"u_{i + 1} has terms below x^{i}")
        if cs[i].is_zero():
            raise NotInGeneralPosition(f"u_{i + 1} has zero x^{i} coefficient")
        out.append((cs[i] * factorial(i)).simplify())
    return out


def normalize_collection(us: Sequence, c: Optional[Sequence] = None, x: str = X) -> PolyTuple:
    """Triangular elimination to the unique u_i = c_i x^(i-1)/(i-1)! + ... spanning the same flag."""
    us = [as_rf(u) for u in us]
    n = len(us)
    c = [as_rf(v) for v in (c or [1] * n)]
    if len(c) != n:
        raise ValueError(f"{len(c)} constants for {n} polynomials")
    done: List[RationalFunction] = []
    for i, u in enumerate(us):
        v = u
        # v_j has lowest term x^j with coefficient 1/j!, so clear x^0 .. x^(i-1) in order
        for j, w in enumerate(done):
            cj = _poly_coeffs(v, x)
            coeff = cj[j] if j < len(cj) else const(0)
            if not coeff.is_zero():
                v = (v - coeff * factorial(j) * w).simplify()
        cs = _poly_coeffs(v, x)
        lead = cs[i] if i < len(cs) else const(0)
        if lead.is_zero():
            raise NotInGeneralPosition(f"leading coefficient of u_{i + 1} vanishes at x^{i}")
        v = (v / (lead * factorial(i))).simplify()
        done.append(v)
    polys = tuple((ci * v).simplify() for ci, v in zip(c, done))
    return PolyTuple(polys, tuple(c), x)


def _check_index(i: int, r_plus_1: int) -> None:
    if not 1 <= i <= r_plus_1 - 1:
        raise IndexOutOfRange(f"A_i(a) needs 1 <= i <= {r_plus_1 - 1}, got {i}")


def a_on_collection(u: PolyTuple, i: int, a) -> PolyTuple:
    """Row i <- a^-1 u_i + u_(i+1), row i+1 <- a u_(i+1)."""
    _check_index(i, u.r_plus_1)
    a = as_rf(a)
    if a.is_zero():
        raise ZeroDivisionError("A_i(a) needs a != 0")
    polys = list(u.polys)
    polys[i - 1] = (polys[i - 1] / a + polys[i]).simplify()
    polys[i] = (a * polys[i]).simplify()
    c = list(u.params)
    c[i - 1] = (c[i - 1] / a).simplify()
    c[i] = (a * c[i]).simplify()
    return PolyTuple(tuple(polys), tuple(c), u.dist_var)


def wr_map(u: PolyTuple, order: Optional[int] = None) -> WrTuple:
    """f_i = Wr(u_1..u_i) as series through ``order``; checks f_i(0) = c_1 ... c_i."""
    T = order if order is not None else default_order(u.r_plus_1)
    consts = _leading_constants(u.polys, u.dist_var)
    fs, acc, a = [], const(1), []
    for i in range(1, u.r_plus_1 + 1):
        w = wronskian_det(u.polys[:i], u.dist_var)
        s = TruncatedSeries.from_rf(w, u.dist_var, T)
        acc = (acc * consts[i - 1]).simplify()
        if not rf_equal(s.coeffs[0], acc):
            raise TheoremViolated(f"f_{i}(0) = {s.coeffs[0].render()}, expected {acc.render()}")
        fs.append(s)
        a.append(acc)
    return WrTuple(tuple(fs), tuple(a))


# ------------------------------------------------------------------ evolution ODE
def solve_evolution_ode(f: WrTuple, i: int) -> TruncatedSeries:
    """The series g = g_1 x + g_2 x^2 + ... with f_i g' - f_i' g = f_(i-1) f_(i+1), f_0 = 1."""
    _check_index(i, f.r_plus_1)
    fi = f.f[i - 1]
    prev = f.f[i - 2] if i >= 2 else TruncatedSeries(fi.dist_var, [1], fi.order)
    rhs = prev * f.f[i]
    T = min(fi.order, rhs.order)
    F = fi.coeffs
    F0 = F[0]
    if F0.is_zero():
        raise ODEInconsistent(f"f_{i}(0) = 0")
    G = [const(0)] * (T + 1)
    for k in range(T):
        # coefficient of x^k: sum_m F_m (k-m+1) G_(k-m+1) - sum_m (m+1) F_(m+1) G_(k-m)
        acc = rhs.coeffs[k]
        for m in range(1, k + 1):
            acc = acc - F[m] * (k - m + 1) * G[k - m + 1]
        for m in range(0, k):
            acc = acc + (m + 1) * F[m + 1] * G[k - m]
        G[k + 1] = (acc / (F0 * (k + 1))).simplify()
    expected = f.a[i - 2] * f.a[i] / f.a[i - 1] if i >= 2 else f.a[i] / f.a[i - 1]
    if T >= 1 and not rf_equal(G[1], expected):
        raise ODEInconsistent(f"x-coefficient {G[1].render()} differs from {as_rf(expected).render()}")
    return TruncatedSeries(fi.dist_var, G, T)


def ode_residual_ok(f: WrTuple, i: int, g: TruncatedSeries) -> bool:
    """Re-check Wr(f_i, g) = f_(i-1) f_(i+1) through order T-1."""
    fi = f.f[i - 1]
    prev = f.f[i - 2] if i >= 2 else TruncatedSeries(fi.dist_var, [1], fi.order)
    lhs = wronskian_det([fi, g])
    rhs = prev * f.f[i]
    return lhs == rhs


def a_on_wrtuple(f: WrTuple, i: int, a, convention: str = "printed") -> WrTuple:
    """f_i <- a^-1 f_i + g with g from the evolution ODE.

    convention "printed" also sets f_(i+1) <- a f_(i+1); convention
    "wronskian" leaves f_(i+1) alone, which is what Wr(A_i(a)u) gives.
    """
    if convention not in ("printed", "wronskian"):
        raise ValueError("convention must be 'printed' or 'wronskian'")
    a = as_rf(a)
    if a.is_zero():
        raise ZeroDivisionError("A_i(a) needs a != 0")
    g = solve_evolution_ode(f, i)
    fs = list(f.f)
    consts = list(f.a)
    fs[i - 1] = fs[i - 1].scale(1 / a) + g
    consts[i - 1] = (consts[i - 1] / a).simplify()
    if convention == "printed":
        fs[i] = fs[i].scale(a)
        consts[i] = (consts[i] * a).simplify()
    return WrTuple(tuple(fs), tuple(consts))


def commutation_report(u: PolyTuple, i: int, a, order: Optional[int] = None, convention: str = "printed") -> dict:
    """Wr(A_i(a)u) against A_i(a)Wr(u), component by component."""
    _check_index(i, u.r_plus_1)
    T = order if order is not None else default_order(u.r_plus_1)
    left = wr_map(a_on_collection(u, i, a), T)
    right = a_on_wrtuple(wr_map(u, T), i, a, convention)
    mismatches = [k + 1 for k, (p, q) in enumerate(zip(left.f, right.f)) if not p == q]
    return {
        "i": i,
        "order": T,
        "convention": convention,
        "left": left.render(),
        "right": right.render(),
        "mismatches": mismatches,
        "equal": not mismatches,
    }


def check_commutation(u: PolyTuple, i: int, a, order: Optional[int] = None, convention: str = "printed") -> bool:
    return commutation_report(u, i, a, order, convention)["equal"]


# ------------------------------------------------------------------ long products
def wronskian_coordinates(
    word: ReducedWord,
    blocks: Optional[Sequence] = None,
    u0: Optional[PolyTuple] = None,
    template: str = "abc",
) -> List[dict]:
    """w_k(x) = Wr(v_1k .. v_kk) for v = iota(p_k) A_<=k (u_n, ..., u_1), k = 0..n.

    p_k is the unique row permutation making the prefix product c-upper
    triangular, found by search.  Each w_k must have a nonzero constant term.
    """
    n = word.n
    if n > 4:
        raise ValueError("wronskian_coordinates is meant for n <= 4")
    if blocks is None:
        blocks = symbolic_blocks(len(word), TEMPLATES[template][0])
    u0 = u0 or standard_collection(n)
    prefixes = product_along_word(word, blocks, template)
    column = MatrixRF([[p] for p in reversed(u0.polys)])
    out = [{"k": 0, "permutation": tuple(range(1, n + 1)), "w": "1", "constant": "1"}]
    for k in range(1, n + 1):
        M = prefixes[min(k, len(word))]
        perm = permutation_factorization(M, "left", n)
        v = permutation_matrix(perm) * M * column
        vs = [v[r, 0] for r in range(k)]
        w = wronskian_det(vs, u0.dist_var)
        e = _poly_coeffs(w, u0.dist_var)[0]
        if e.is_zero():
            raise TheoremViolated(f"w_{k}(0) vanishes")
        out.append({"k": k, "permutation": perm, "w": w.render(), "constant": e.render(), "constant_rf": e})
    return out
