"""The sixteen acceptance checks, each runnable on its own.

Every check returns a CriterionResult made of labelled lines.  A line
marked ``literal`` restates a printed claim exactly as printed; when such
a line fails while the corrected statement next to it holds, the criterion
is reported as ``partial`` rather than ``pass``.  Reference tuples below
are transcribed from the printed tables and displays.
"""

from __future__ import annotations

import random
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import TetraError
from .evolve import (
    MatrixRF,
    bz_braid_relation,
    elementary_identities,
    factorization_report,
    long_product_triangularity,
    quaternity_check,
    reversal_matrix,
    triple_quadruple_evolution,
)
from .exactalg import Polynomial, RationalFunction, evaluate, rf_equal, substitute, var
from .formulas import Const, Expr, Var, parse_expr, parse_rf, render
from .transforms import (
    FreeSupply,
    builtin,
    check_involution,
    defining_equations,
    flacon_specializations,
    quasiinverse_report,
    symbol_count,
    verify_defining_identity,
)
from .verify import (
    EvolutionTrace,
    certify_random,
    compare_traces,
    run_chain,
    run_flacon,
    run_pairlabel_protocol,
    symbolic_start,
)
from .words import (
    PRINTED_A42_COUNT,
    Chain,
    applicable_moves,
    apply_move,
    canonical_chains_n4,
    chain_union,
    commutation_classes,
    enumerate_reduced_words,
    maximal_word,
    minimal_word,
    move_graph_connected,
)

__all__ = [
    "CheckLine",
    "CriterionResult",
    "CRITERIA",
    "run_criterion",
    "run_all",
    "table_check",
    "LUSZTIG_FIRST_WAY",
    "LUSZTIG_SECOND_WAY",
    "SERGEEV_EVOLUTION_1",
    "SERGEEV_EVOLUTION_2",
]

DEFAULT_SEED = 7


@dataclass
class CheckLine:
    label: str
    passed: bool
    literal: bool = False


@dataclass
class CriterionResult:
    number: int
    title: str
    lines: List[CheckLine]
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def status(self) -> str:
        if all(l.passed for l in self.lines):
            return "pass"
        if all(l.passed for l in self.lines if not l.literal):
            return "partial"
        return "fail"

    def to_dict(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "status": self.status,
            "lines": [{"label": l.label, "passed": l.passed, "literal": l.literal} for l in self.lines],
            "details": self.details,
        }


def _rf(src: str, bindings: Optional[Dict[str, str]] = None) -> RationalFunction:
    expr = parse_rf(src)
    if bindings:
        expr = substitute(expr, {k: parse_rf(v) for k, v in bindings.items()})
    return expr.simplify()


def _tuple_equal(xs: Sequence, ys: Sequence) -> List[int]:
    """1-based positions where the tuples differ."""
    return [k + 1 for k, (x, y) in enumerate(zip(xs, ys)) if not rf_equal(x, y)]


# ------------------------------------------------------------------ 1
def c1_bz() -> CriterionResult:
    rep = bz_braid_relation()
    ok = rep["lhs"] == rep["rhs"]
    return CriterionResult(1, "BZ braid relation", [CheckLine("A1(c)A2(b)A1(a) = A2(c')A1(b')A2(a') symbolically", ok)], rep)


# ------------------------------------------------------------------ 2
VERY_SMALL_FINAL = "a6, a3*a6+a5, a1*a3*a6+a2*a6+a1*a5+a4, a3, a1*a3+a2, a1"
# internal state index -> tuple, for the two chains
VERY_SMALL_PLUS_STEPS = {
    1: "a3, a1*a3+a2, a1, a4, a5, a6",
    2: "a3, a1*a3+a2, a5, a1*a5+a4, a1, a6",
    4: "a3, a5, a1*a3+a2, a1*a5+a4, a6, a1",
    7: VERY_SMALL_FINAL,
}
VERY_SMALL_MINUS_STEPS = {
    3: "a1, a6, a2*a6+a4, a2, a3*a6+a5, a3",
    7: VERY_SMALL_FINAL,
}


def _chain_pair(name: str, width: int = 1):
    plus, minus = canonical_chains_n4()
    t = builtin(name)
    start = symbolic_start(6, width)
    return run_chain(start, plus, t, FreeSupply("u")), run_chain(start, minus, t, FreeSupply("l"))


def _steps_match(trace: EvolutionTrace, steps: Dict[int, str]) -> List[int]:
    bad = []
    for s, tup in steps.items():
        want = [_rf(x) for x in tup.split(",")]
        if _tuple_equal(trace.states[s].components(), want):
            bad.append(s)
    return bad


def c2_very_small() -> CriterionResult:
    tu, tl = _chain_pair("very_small")
    final = [_rf(x) for x in VERY_SMALL_FINAL.split(",")]
    lines = [
        CheckLine("C+ final tuple", not _tuple_equal(tu.final.components(), final)),
        CheckLine("C- final tuple", not _tuple_equal(tl.final.components(), final)),
        CheckLine("C+ intermediate states R1, R3R1, L5L2R3R1", not _steps_match(tu, VERY_SMALL_PLUS_STEPS)),
        CheckLine("C- intermediate state R2R4L3", not _steps_match(tl, VERY_SMALL_MINUS_STEPS)),
    ]
    return CriterionResult(2, "very small sonnet", lines, {"final": [x.render() for x in tu.final.components()]})


# ------------------------------------------------------------------ 3 and 4
LUSZTIG_ABBREV = {
    "alpha": "a1+a3",
    "gamma": "a3+a6",
    "beta": "a1+a3+a6",
    "delta": "a2*a3+a2*a6+a5*a6",
    "eps": "a1*a2+a1*a5+a3*a5",
}
# rows as displayed: word read right to left, parameters listed from the last block
LUSZTIG_FIRST_WAY = [
    ("123121", "a6, a5, a4, a3, a2, a1"),
    ("121321", "a6, a5, a3, a4, a2, a1"),
    ("212321", "a3*a5/gamma, gamma, a5*a6/gamma, a4, a2, a1"),
    ("213231", "a3*a5/gamma, gamma, a2*a4*gamma/delta, delta/gamma, a4*a5*a6/delta, a1"),
    ("231213", "a3*a5/gamma, a2*a4*gamma/delta, gamma, delta/gamma, a1, a4*a5*a6/delta"),
    ("232123", "a3*a5/gamma, a2*a4*gamma/delta, a1*delta/(gamma*beta), beta, delta/beta, a4*a5*a6/delta"),
    ("323123", "a1*a2*a4/eps, eps/beta, a2*a3*a4*a5*beta/(delta*eps), beta, delta/beta, a4*a5*a6/delta"),
]
LUSZTIG_SECOND_WAY = [
    ("123121", "a6, a5, a4, a3, a2, a1"),
    ("123212", "a6, a5, a4, a1*a2/alpha, alpha, a2*a3/alpha"),
    ("132312", "a6, a1*a2*a4/eps, eps/alpha, a4*a5*alpha/eps, alpha, a2*a3/alpha"),
    ("312132", "a1*a2*a4/eps, a6, eps/alpha, alpha, a4*a5*alpha/eps, a2*a3/alpha"),
    ("321232", "a1*a2*a4/eps, eps/beta, beta, a6*eps/(alpha*beta), a4*a5*alpha/eps, a2*a3/alpha"),
    ("321323", "a1*a2*a4/eps, eps/beta, beta, a2*a3*a4*a5*beta/(eps*delta), delta/beta, a4*a5*a6/delta"),
    ("323123", "a1*a2*a4/eps, eps/beta, a2*a3*a4*a5*beta/(delta*eps), beta, delta/beta, a4*a5*a6/delta"),
]
SERGEEV_ABBREV = {
    "alpha": "a1*a3-a2",
    "deltap": "a1*a3-a2",
    "alphap": "a3*a6-a5",
    "delta": "a3*a6-a5",
    "beta": "a1*a5-a4",
    "betap": "a2*a6-a4",
    "gamma": "a1*a3*a6-a1*a5-a2*a6+a4",
    "gammap": "a1*a3*a6-a1*a5-a2*a6+a4",
}
SERGEEV_EVOLUTION_1 = [
    ("123121", "a6, a5, a4, a3, a2, a1"),
    ("121321", "a6, a5, a3, a4, a2, a1"),
    ("212321", "a3, alphap, a6, a4, a2, a1"),
    ("213231", "a3, alphap, a2, betap, a6, a1"),
    ("231213", "a3, a2, alphap, betap, a1, a6"),
    ("232123", "a3, a2, a1, gammap, alphap, a6"),
    ("323123", "a1, deltap, a3, gammap, alphap, a6"),
]
SERGEEV_EVOLUTION_2 = [
    ("123121", "a6, a5, a4, a3, a2, a1"),
    ("123212", "a6, a5, a4, a1, alpha, a3"),
    ("132312", "a6, a1, beta, a5, alpha, a3"),
    ("312132", "a1, a6, beta, alpha, a5, a3"),
    ("321232", "a1, alpha, gamma, a6, a5, a3"),
    ("321323", "a1, alpha, gamma, a3, delta, a6"),
    ("323123", "a1, alpha, a3, gamma, delta, a6"),
]
# the displayed first way is the internal C- chain read right to left; the pair
# of commutation moves is shown as one step, so one internal state is skipped
FIRST_WAY_STATES = (0, 1, 2, 3, 5, 6, 7)
SECOND_WAY_STATES = (0, 1, 2, 4, 5, 6, 7)


def table_check(trace: EvolutionTrace, rows, states: Sequence[int], abbrev: Dict[str, str]) -> List[int]:
    """Displayed row numbers (1-based) whose word or parameters disagree with the trace."""
    bad = []
    for r, ((word, params), s) in enumerate(zip(rows, states), 1):
        st = trace.states[s].reversed()
        want = [_rf(p, abbrev) for p in params.split(",")]
        if st.word_str() != word or _tuple_equal(st.components(), want):
            bad.append(r)
    return bad


def c3_lusztig() -> CriterionResult:
    tu, tl = _chain_pair("lusztig")
    a1, a2, a3, a4, a5, a6 = (var(f"a{i}") for i in range(1, 7))
    al, ga, be = a1 + a3, a3 + a6, a1 + a3 + a6
    de, ep = a2 * a3 + a2 * a6 + a5 * a6, a1 * a2 + a1 * a5 + a3 * a5
    bad1 = table_check(tl, LUSZTIG_FIRST_WAY, FIRST_WAY_STATES, LUSZTIG_ABBREV)
    bad2 = table_check(tu, LUSZTIG_SECOND_WAY, SECOND_WAY_STATES, LUSZTIG_ABBREV)
    lines = [
        CheckLine("first way: 7 displayed states", not bad1),
        CheckLine("second way: 7 displayed states", not bad2),
        CheckLine("cubic1: a6*eps + a2*a3*beta = alpha*delta", rf_equal(a6 * ep + a2 * a3 * be, al * de)),
        CheckLine("cubic2: a1*delta + a3*a5*beta = gamma*eps", rf_equal(a1 * de + a3 * a5 * be, ga * ep)),
        CheckLine("final rows equal", compare_traces(tu, tl).passed),
    ]
    return CriterionResult(3, "Lusztig tetrahedron", lines, {"bad_rows_first": bad1, "bad_rows_second": bad2})


def c4_sergeev() -> CriterionResult:
    tu, tl = _chain_pair("sergeev_alpha")
    bad1 = table_check(tl, SERGEEV_EVOLUTION_1, FIRST_WAY_STATES, SERGEEV_ABBREV)
    bad2 = table_check(tu, SERGEEV_EVOLUTION_2, SECOND_WAY_STATES, SERGEEV_ABBREV)
    m = MatrixRF([[_rf("a1"), _rf("a2"), _rf("a4")], [1, _rf("a3"), _rf("a5")], [0, 1, _rf("a6")]])
    gamma_ok = rf_equal(m.det(), _rf(SERGEEV_ABBREV["gamma"]))
    f1 = [_rf(p, SERGEEV_ABBREV) for p in SERGEEV_EVOLUTION_1[-1][1].split(",")]
    f2 = [_rf(p, SERGEEV_ABBREV) for p in SERGEEV_EVOLUTION_2[-1][1].split(",")]
    lines = [
        CheckLine("Evolution 1: 7 displayed states", not bad1),
        CheckLine("Evolution 2: 7 displayed states", not bad2),
        CheckLine("gamma equals det [[a1,a2,a4],[1,a3,a5],[0,1,a6]]", gamma_ok),
        CheckLine("final rows equal via alpha=delta', delta=alpha', gamma=gamma'", not _tuple_equal(f1, f2)),
        CheckLine("computed final rows equal", compare_traces(tu, tl).passed),
    ]
    state5 = [x.render() for x in tu.states[5].reversed().components()]
    return CriterionResult(4, "Sergeev (alpha) tetrahedron", lines, {"evolution2_state5": state5})


# ------------------------------------------------------------------ 5
def c5_triple13() -> CriterionResult:
    t = builtin("triple13")
    ident = verify_defining_identity(t)
    inv = check_involution(t)
    rep = run_pairlabel_protocol(t)
    lines = [
        CheckLine("defining matrix identity", bool(ident)),
        CheckLine("R^2 = Id", inv["involution"]),
        CheckLine("both sides of the pair-labeled sonnet agree", rep["match"].passed),
        CheckLine("computed final matches the a4a5 print", not rep["lhs_printed_mismatch"]),
        CheckLine("auxiliary identities (a4+a6)F and (a1+a4)E", rep["identity_1"] and rep["identity_2"]),
    ]
    details = {
        "final": rep["final"],
        "matches": "a4a5" if not rep["lhs_printed_mismatch"] else ("a4a6" if not rep["rhs_printed_mismatch"] else "neither"),
        "a4a6_print_differs_in_components": rep["rhs_printed_mismatch"],
    }
    return CriterionResult(5, "pair-labeled triple operation", lines, details)


# ------------------------------------------------------------------ 6
SMALLER2_PRINTED_VALUES = {
    "a1vi": "a6*b4*b5*b6/(b1*b2*b3)",
    "a3pp": "a5*b4/b6",
    "a4vii": "a3*b1*b2/(b5*b6)",
    "a2vi": "a1*b6/b4",
    "a2ppp": "a6*b4*b5*b6/(b1*b2*b3)",
}
SMALLER2_PRINTED_PRODUCT = "a1*a3*a6*b6^2/(b4*(a5*b3+a3*a6*b6))"  # a1' a3^v
SMALLER2_PRINTED_A2_A4 = "a3*a6*b4/b3"  # a2''' a4^vii


def smaller2_report(trials: int = 100, seed: int = DEFAULT_SEED) -> dict:
    tu, tl = _chain_pair("smaller2", 2)
    rep = compare_traces(tu, tl)
    names = {**tu.supply.display_names(), **tl.supply.display_names()}
    by_name = {v: k for k, v in names.items()}
    cert = certify_random(tu, tl, trials, seed)
    # the printed values, written in supply variables
    vals = {by_name[k]: _rf(v) for k, v in SMALLER2_PRINTED_VALUES.items()}
    a3v = var(by_name["a3v"])
    vals[by_name["a1p"]] = _rf(SMALLER2_PRINTED_PRODUCT) / a3v
    L = [substitute(x, vals).simplify() for x in tu.final.components()]
    R = [substitute(x, vals).simplify() for x in tl.final.components()]
    printed_point_ok = not _tuple_equal(L, R)
    # literal: do the solver's assignments equal the printed values?
    named = rep.named_assignments()
    literal = {}
    for k, v in SMALLER2_PRINTED_VALUES.items():
        got = named.get(k)
        literal[k] = got is not None and rf_equal(got, _rf(v))
    return {
        "trace_plus": tu,
        "trace_minus": tl,
        "report": rep,
        "certify": cert,
        "printed_point_ok": printed_point_ok,
        "literal": literal,
        "product_a2_a4": rf_equal(_rf(SMALLER2_PRINTED_VALUES["a2ppp"]) * _rf(SMALLER2_PRINTED_VALUES["a4vii"]), _rf(SMALLER2_PRINTED_A2_A4)),
    }


def c6_smaller2(seed: int = DEFAULT_SEED) -> CriterionResult:
    r = smaller2_report(100, seed)
    rep = r["report"]
    lines = [
        CheckLine("chains agree after solving; all 12 components rf_equal", rep.passed),
        CheckLine("a4'' reported unconstrained", rep.unconstrained == [k for k, v in rep.display_names.items() if v == "a4pp"]),
        CheckLine("a1' and a3^v enter only through their product", _product_only(rep)),
        CheckLine("printed values of a1vi, a2vi, a4vii, a2ppp, a3pp and a1p*a3v lie on the solved family", r["printed_point_ok"] and r["product_a2_a4"]),
        CheckLine(f"certify_random: {r['certify']['passed']}/100 trials (seed {seed})", r["certify"]["passed"] == 100),
        CheckLine("solver assignments equal the printed values", all(r["literal"].values()), literal=True),
    ]
    return CriterionResult(6, "two-parameter correspondence", lines, {**rep.to_dict(), "certify": r["certify"]})


def _product_only(rep) -> bool:
    inv = {v: k for k, v in rep.display_names.items()}
    p, v = var(inv["a1p"]), var(inv["a3v"])
    t = var("t")
    for expr in rep.assignments.values():
        scaled = substitute(expr, {inv["a1p"]: p * t, inv["a3v"]: v / t})
        if not rf_equal(scaled, expr):
            return False
    return True


# ------------------------------------------------------------------ 7
def c7_quasiinverse() -> CriterionResult:
    rep = quasiinverse_report()
    lines = [
        CheckLine("intermediate free cancels in SR", rep["intermediate_free_cancels"]),
        CheckLine("a1''=a1, b1=b3 turns SR into the identity", rep["specialization_identity"]),
        CheckLine("b -> 1 specialization of S equals very_small_inverse", rep["b_to_1_equals_very_small_inverse"]),
        CheckLine("SR equals the displayed tuple", rep["matches_printed"], literal=True),
    ]
    return CriterionResult(7, "quasiinverse", lines, {"composite": rep["composite"], "mismatches": rep["mismatches"]})


# ------------------------------------------------------------------ 8
ENTRY_RELATIONS = {
    "entry1": ("a1*a3 + a2*b1*c3", "a2'"),
    "entry2": ("a1*b3", "b2'*a3'"),
    "entry3": ("b1*b2", "b2'*b3'"),
    "entry4": ("c1*a3", "a1'*c2'"),
    "entry5": ("c2*c3", "c1'*c2'"),
    "entry6": ("c1*b3", "b1'*c3'"),
}
FULL3_PARAMETRIZATION = {  # output position (1-based) -> formula in the chosen frees a1', a3', b1'
    3: "c2*c3*a1p/(a3*c1)",
    5: "a1*b3/a3p",
    6: "a3*c1/a1p",
    8: "b1*b2*a3p/(a1*b3)",
    9: "b3*c1/b1p",
}
R3R1_RESUME = (
    "a1p, b1p, a1p*c2*c3/(a3*c1), a1*a3 + a2*b1*c3, a1*b3/a3p, a3*c1/a1p, a3pp, b3pp, "
    "a3pp*b1p*c4*c5/(a5*b3*c1), a3p*(a5 + a4*b1*b2*c5/(a1*b3)), a3p*b5/a5pp, a5*b3*c1/(a3pp*b1p), "
    "a5pp, a5pp*b1*b2*b4/(a1*b3*b5), b3*b5*c1/(b1p*b3pp), a6, b6, c6"
)
L5L2R3R1 = (
    "a1p, b1p, a1p*c2*c3/(a3*c1), a3pp, b3pp, a3pp*b1p*c4*c5/(a5*b3*c1), "
    "a1*a3 + a2*b1*c3, a1*b3/a3p, a3*c1/a1p, a3p*(a5 + a4*b1*b2*c5/(a1*b3)), a3p*b5/a5pp, "
    "a5*b3*c1/(a3pp*b1p), a6, b6, c6, a5pp, a5pp*b1*b2*b4/(a1*b3*b5), b3*b5*c1/(b1p*b3pp)"
)


def _primed(src: str) -> RationalFunction:
    """Parse a formula whose names may carry a trailing prime."""
    names = set(re.findall(r"([A-Za-z]\w*)'", src))
    expr = parse_rf(src.replace("'", "_q"))
    return substitute(expr, {n + "_q": var(n + "'") for n in names}).simplify()


def c8_full3() -> CriterionResult:
    t = builtin("full3")
    eqs = defining_equations(t)
    diffs = [(l - r).simplify() for l, r in eqs]
    order = []
    for name, (l, r) in ENTRY_RELATIONS.items():
        d = (_primed(l) - _primed(r)).simplify()
        hit = [k for k, e in enumerate(diffs, 1) if rf_equal(e, d) or rf_equal(e, -d)]
        order.append((name, hit[0] if hit else None))
    rel_ok = len(eqs) == 6 and all(h is not None for _, h in order) and len({h for _, h in order}) == 6
    outs = t.outputs_in_names()
    param_ok = all(rf_equal(outs[p - 1], _rf(f)) for p, f in FULL3_PARAMETRIZATION.items())
    plus, _ = canonical_chains_n4()
    tr = run_chain(symbolic_start(6, 3), Chain(plus.start, plus.moves[:4]), t, FreeSupply("u"))
    shown = tr.supply.display_bindings()
    s2 = [substitute(x, shown) for x in tr.states[2].components()]
    s4 = [substitute(x, shown) for x in tr.states[4].components()]
    bad2 = _tuple_equal(s2, [_rf(x) for x in R3R1_RESUME.split(",")])
    bad4 = _tuple_equal(s4, [_rf(x) for x in L5L2R3R1.split(",")])
    d1, d2 = symbol_count(tr.states[1].components()), symbol_count(tr.states[2].components())
    lines = [
        CheckLine("the six entry relations recovered from the matrix identity", rel_ok),
        CheckLine("parametrization by a1', a3', b1'", param_ok),
        CheckLine("R(3)R(1) composite equals the resume tuple", not bad2),
        CheckLine("L(5)L(2)R(3)R(1) composite equals the displayed tuple", not bad4),
        CheckLine(f"dimension bookkeeping {d1} and {d2}", (d1, d2) == (21, 24)),
    ]
    return CriterionResult(8, "three-parameter correspondence", lines, {"relation_entry_positions": dict(order)})


# ------------------------------------------------------------------ 9
def c9_flacon() -> CriterionResult:
    f = run_flacon()
    specs = flacon_specializations()
    expected_system = {"e'": "f~1", "f'": "d1*f1", "d~": "e1/f~1"}
    sys_ok = set(f["system"]) == set(expected_system) and all(
        rf_equal(_tilde(f["system"][k]), _tilde(v)) for k, v in expected_system.items()
    )
    sb = specs["sergeev_beta"]
    lines = [
        CheckLine("single step (a,b,c) -> (b/c', ac, c')", f["single_step"] == ["b/c'", "a*c", "c'"]),
        CheckLine("upper/lower consistency system: f'=d1 f1, e'=f~1, d~=e1/f~1", sys_ok),
        CheckLine("full family: diagonal reproduces the same system", f["full_diagonal_system_agrees"]),
        CheckLine("full family: prefactors agree under the system", f["prefactors_agree_under_system"]),
        CheckLine("six P_i = R_i equations emitted and identically true", len(f["equations"]) == 6 and all(e["identically_equal"] for e in f["equations"])),
        CheckLine("Lusztig specialization a=b=c=c'=1", specs["lusztig"]["matches"]),
        CheckLine("Sergeev (beta) specialization: diagonal is BZ with a, c swapped", sb["diagonal_equals_reversed_bz"] and sb["printed_with_ac_plus_b"]),
        CheckLine("Sergeev (beta) specialization exactly as displayed (a+bc, off-diagonal ones)", sb["diagonal_equals_printed"] and sb["off_diagonal_all_one"], literal=True),
    ]
    details = {k: v for k, v in f.items() if k != "traces"}
    details["sergeev_beta_outputs"] = sb["outputs"]
    return CriterionResult(9, "upper triangular two-parameter family", lines, details)


def _tilde(src: str) -> RationalFunction:
    return parse_rf(src.replace("~", "_t").replace("'", "_p"))


# ------------------------------------------------------------------ 10
def c10_long_products() -> CriterionResult:
    r4 = long_product_triangularity(4)
    r5a = long_product_triangularity(5, minimal_word(5))
    r5b = long_product_triangularity(5, maximal_word(5))
    lines = [
        CheckLine(f"all {r4['count']} reduced words of w0(4): product is c-upper", True),
        CheckLine("n=5 minimal and maximal words: product is c-upper", r5a["count"] == r5b["count"] == 1),
    ]
    return CriterionResult(10, "long products", lines, {"n4_words": r4["count"]})


def _guard(fn: Callable[[], CriterionResult], number: int, title: str) -> CriterionResult:
    try:
        return fn()
    except TetraError as err:
        return CriterionResult(number, title, [CheckLine(f"raised {type(err).__name__}: {err}", False)])


# ------------------------------------------------------------------ 11
def c11_factorization() -> CriterionResult:
    n_rows = 0
    left_literal = right_ok = left_corrected = True
    for n in (3, 4):
        for w in enumerate_reduced_words(n):
            for row in factorization_report(w)["rows"]:
                n_rows += 1
                left_literal &= row["left"] == row["prefix"]
                left_corrected &= row["left"] == row["w0_prefix_inverse"]
                right_ok &= row["right"] == row["suffix"]
    lines = [
        CheckLine("exactly one permutation per side for every word and prefix", True),
        CheckLine("right factor equals the suffix permutation w'_k", right_ok),
        CheckLine("left factor equals w0 w_k^-1", left_corrected),
        CheckLine("left factor equals the prefix permutation w_k", left_literal, literal=True),
    ]
    return CriterionResult(11, "permutation factorization", lines, {"rows_checked": n_rows})


# ------------------------------------------------------------------ 12
QUATERNITY_LOOP = {"UpperB": ["cLowerB", "LowerB", "cUpperB", "UpperB"]}


def c12_quaternity() -> CriterionResult:
    ok_loops = ok_classes = True
    for n in (2, 3, 4):
        for variant in ("B", "N"):
            rep = quaternity_check(n, variant)
            for loop in rep["loops"]:
                ok_loops &= loop["identity"]
            first = rep["loops"][0]
            want = [c.replace("B", variant) for c in QUATERNITY_LOOP["UpperB"]]
            ok_classes &= first["start"] == "Upper" + variant and [s[1] for s in first["steps"]] == want
    sq = all(reversal_matrix(n) * reversal_matrix(n) == MatrixRF.identity(n) for n in range(1, 6))
    lines = [
        CheckLine("four-step loops are the identity from every corner, n <= 4, B and N", ok_loops),
        CheckLine("corner classes B+ -L-> B-^c -R-> B- -L-> B+^c -R-> B+", ok_classes),
        CheckLine("I(n)^2 = I_n", sq),
    ]
    return CriterionResult(12, "quaternity", lines)


# ------------------------------------------------------------------ 13
def c13_sln() -> CriterionResult:
    ids = elementary_identities(4)
    tq = triple_quadruple_evolution()
    triple_ok = tq["A1A2"] == [["a", "-b", "1"], ["1", "0", "0"], ["0", "1", "0"]] and tq["A1A2A1"] == [
        ["a*c - b", "-a", "1"],
        ["c", "-1", "0"],
        ["1", "0", "0"],
    ]
    col = tq["triple_column"]
    col_ok = col[0].startswith("1 ") and col[1].startswith("-x ") and col[2].startswith("1/2*x^2 ")
    quad_diag = tq["quadruple_complementary_diagonal"]
    lines = [
        CheckLine(f"commutator identities: {ids['commutators']} commuting-index cases, {ids['disjoint']} disjoint, {ids['inverses']} inverses", ids["commutators"] > 0),
        CheckLine("triple evolution matrices A1(a)A2(b) and A1(a)A2(b)A1(c)", triple_ok),
        CheckLine("triple column (1 + ..., -x + ..., x^2/2 + ...)", col_ok),
        CheckLine("quadruple product has +-1 on the complementary diagonal", all(d in ("1", "-1") for d in quad_diag)),
        CheckLine("quadruple column leading terms +-1, +-x, +-x^2/2, +-x^3/6", _leading_ok(tq["quadruple_column_leading"])),
    ]
    return CriterionResult(13, "SL_n identities and evolutions", lines, {"quadruple_diagonal": quad_diag})


def _leading_ok(terms: Sequence[str]) -> bool:
    want = ["x^0/1", "x^1/1", "x^2/2", "x^3/6"]
    return all(t.lstrip("-") == w for t, w in zip(terms, want)) and len(terms) == 4


# ------------------------------------------------------------------ 14
def c14_wronskian(seed: int = DEFAULT_SEED) -> CriterionResult:
    from .exactalg import TruncatedSeries
    from .wronskian import (
        a_on_collection,
        a_on_wrtuple,
        check_commutation,
        normalize_collection,
        ode_residual_ok,
        solve_evolution_ode,
        standard_collection,
        wr_map,
        wronskian_det,
    )

    x, a, b = var("x"), var("a"), var("b")
    d1 = all(rf_equal(wronskian_det([x ** k / _fact(k) for k in range(i)]), 1) for i in range(1, 6))
    d2 = all(
        rf_equal(wronskian_det([x ** k / _fact(k) for k in range(i - 1)] + [x ** i / _fact(i)]), x) for i in range(2, 6)
    )
    u = standard_collection(4)
    T = 8
    A2u = a_on_collection(u, 2, a)
    A12u = a_on_collection(A2u, 1, b)
    want_u2 = [_rf(s) for s in ("1", "x/a + x^2/2", "a*x^2/2", "x^3/6")]
    want_u12 = [_rf(s) for s in ("1/b + x/a + x^2/2", "b*(x/a + x^2/2)", "a*x^2/2", "x^3/6")]
    f = wr_map(u, T)
    printed_f2 = a_on_wrtuple(f, 2, a)
    printed_f12 = a_on_wrtuple(printed_f2, 1, b)
    want_f2 = ["1", "1/a + x", "a", "1"]
    want_f12 = ["1/b + x/a + x^2/2", "b*(1/a + x)", "a", "1"]

    def series_eq(fs, strs):
        return all(s == TruncatedSeries.from_rf(_rf(t), "x", T) for s, t in zip(fs.f, strs))

    direct_f2 = wr_map(A2u, T)
    direct_f12 = wr_map(A12u, T)
    literal_thm = corrected_thm = True
    for r1 in (3, 4, 5):
        uu = standard_collection(r1)
        for i in range(1, r1):
            literal_thm &= check_commutation(uu, i, a, convention="printed")
            corrected_thm &= check_commutation(uu, i, a, convention="wronskian")
    # a generic normalized collection with random higher-order terms
    rng = random.Random(seed)
    generic_ok = True
    for r1 in (3, 4):
        polys = []
        for i in range(r1):
            p = x ** i / _fact(i)
            for k in range(i + 1, r1):
                p = p + Fraction(rng.randint(-9, 9), rng.randint(1, 9)) * x ** k
            polys.append(p)
        uu = normalize_collection(polys)
        for i in range(1, r1):
            generic_ok &= check_commutation(uu, i, a, convention="wronskian")
    ode_ok = all(ode_residual_ok(f, i, solve_evolution_ode(f, i)) for i in range(1, 4))
    lines = [
        CheckLine("Wr(1, x, ..., x^(i-1)/(i-1)!) = 1", d1),
        CheckLine("Wr(1, x, ..., x^(i-1)/(i-1)!, x^(i+1)/(i+1)!) = x", d2),
        CheckLine("A1(b)A2(a)u tuple", not _tuple_equal(A12u.polys, want_u12)),
        CheckLine("A2(a)u tuple (without the stray x)", not _tuple_equal(A2u.polys, want_u2)),
        CheckLine("displayed A2(a)f and A1(b)A2(a)f reproduced by the displayed W-side operator", series_eq(printed_f2, want_f2) and series_eq(printed_f12, want_f12)),
        CheckLine("Wr(A_i(a)u) = A_i(a)Wr(u) with f_(i+1) unchanged, r+1 in {3,4,5}, all i", corrected_thm and generic_ok),
        CheckLine("ODE round trip Wr(f_i, f^_i) = f_(i-1) f_(i+1)", ode_ok),
        CheckLine("Wr(A_i(a)u) = A_i(a)Wr(u) with f_(i+1) scaled by a", literal_thm, literal=True),
    ]
    details = {"Wr(A2(a)u)": direct_f2.render(), "Wr(A1(b)A2(a)u)": direct_f12.render()}
    return CriterionResult(14, "Wronskian suite", lines, details)


def _fact(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


# ------------------------------------------------------------------ 15
CHAIN_PLUS_WORDS = ["121321", "212321", "213231", "231231", "231213", "232123", "323123", "321323"]
CHAIN_MINUS_WORDS = ["121321", "123121", "123212", "132312", "132132", "312132", "321232", "321323"]


def c15_combinatorics() -> CriterionResult:
    plus, minus = canonical_chains_n4()
    union = chain_union([plus, minus])
    words4 = enumerate_reduced_words(4)
    involution = True
    for n in (3, 4, 5):
        for w in enumerate_reduced_words(n):
            for m in applicable_moves(w):
                w2 = apply_move(w, m)
                involution &= apply_move(w2, m) == w
    lines = [
        CheckLine("|A(3,2)| = 2", len(enumerate_reduced_words(3)) == 2),
        CheckLine("chain words C+ and C- as listed", [str(w) for w in plus.words()] == CHAIN_PLUS_WORDS and [str(w) for w in minus.words()] == CHAIN_MINUS_WORDS),
        CheckLine(f"chain union size {len(union)} = {PRINTED_A42_COUNT}", len(union) == PRINTED_A42_COUNT),
        CheckLine("commutation classes of w0(4): 8", len(commutation_classes(4)) == 8),
        CheckLine("moves are involutions, n <= 5", involution),
        CheckLine("move graph connected, n <= 5", all(move_graph_connected(n) for n in (2, 3, 4, 5))),
    ]
    details = {"brute_force_reduced_words_n4": len(words4), "printed_count": PRINTED_A42_COUNT}
    return CriterionResult(15, "combinatorics", lines, details)


# ------------------------------------------------------------------ 16
def c16_properties(seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = random.Random(seed)
    names = ["p", "q", "r"]

    def rand_poly():
        p = Polynomial()
        for _ in range(rng.randint(1, 3)):
            term = Polynomial.const(Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
            for n in names:
                e = rng.randint(0, 2)
                if e:
                    term = term * Polynomial.var(n) ** e
            p = p + term
        return p

    def rand_rf():
        d = rand_poly()
        while d.is_zero():
            d = rand_poly()
        return RationalFunction(rand_poly(), d)

    axioms = agree = True
    for _ in range(200):
        x, y, z = rand_rf(), rand_rf(), rand_rf()
        axioms &= rf_equal(x + y, y + x) and rf_equal(x * y, y * x)
        axioms &= rf_equal((x + y) * z, x * z + y * z) and rf_equal((x * y) * z, x * (y * z))
        if not x.is_zero():
            axioms &= rf_equal(x * x.inverse(), 1)
        point = {n: Fraction(rng.randint(1, 50), rng.randint(1, 50)) for n in names}
        lhs, rhs = (x + y) * z, x * z + y * z
        try:
            agree &= evaluate(lhs, point) == evaluate(rhs, point)
        except TetraError:
            pass
    roundtrip = True
    for _ in range(100):
        ast = _rand_ast(rng, 3)
        roundtrip &= parse_expr(render(ast)) == ast
    lines = [
        CheckLine("field axioms on 200 random rational functions", axioms),
        CheckLine("rf_equal agrees with evaluation at random points", agree),
        CheckLine("parse(render(ast)) == ast on 100 random ASTs", roundtrip),
    ]
    return CriterionResult(16, "property suites", lines, {"seed": seed})


def _rand_ast(rng: random.Random, depth: int) -> Expr:
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.5:
            return Var(rng.choice(["a", "b", "c1", "x"]))
        return Const(rng.randint(0, 9))
    kind = rng.choice(["add", "sub", "mul", "div", "pow", "neg"])
    if kind == "neg":
        return Expr("neg", None, (_rand_ast(rng, depth - 1),))
    if kind == "pow":
        return Expr("pow", rng.randint(0, 3), (_rand_ast(rng, depth - 1),))
    return Expr(kind, None, (_rand_ast(rng, depth - 1), _rand_ast(rng, depth - 1)))


# ------------------------------------------------------------------ registry
CRITERIA: Dict[int, Tuple[str, Callable[..., CriterionResult]]] = {
    1: ("BZ braid relation", c1_bz),
    2: ("very small sonnet", c2_very_small),
    3: ("Lusztig tetrahedron", c3_lusztig),
    4: ("Sergeev (alpha) tetrahedron", c4_sergeev),
    5: ("pair-labeled triple operation", c5_triple13),
    6: ("two-parameter correspondence", c6_smaller2),
    7: ("quasiinverse", c7_quasiinverse),
    8: ("three-parameter correspondence", c8_full3),
    9: ("upper triangular two-parameter family", c9_flacon),
    10: ("long products", c10_long_products),
    11: ("permutation factorization", c11_factorization),
    12: ("quaternity", c12_quaternity),
    13: ("SL_n identities and evolutions", c13_sln),
    14: ("Wronskian suite", c14_wronskian),
    15: ("combinatorics", c15_combinatorics),
    16: ("property suites", c16_properties),
}
_SEEDED = {6, 14, 16}


def run_criterion(number: int, seed: int = DEFAULT_SEED) -> CriterionResult:
    if number not in CRITERIA:
        raise KeyError(f"no criterion {number}; valid are 1..{len(CRITERIA)}")
    title, fn = CRITERIA[number]
    t0 = time.perf_counter()
    res = _guard((lambda: fn(seed)) if number in _SEEDED else fn, number, title)
    res.seconds = time.perf_counter() - t0
    return res


def run_all(seed: int = DEFAULT_SEED) -> List[CriterionResult]:
    return [run_criterion(k, seed) for k in sorted(CRITERIA)]
