import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import to_sympy
from test_evolve import sympy_embed, sympy_template
from tetra.criteria import (
    LUSZTIG_ABBREV,
    LUSZTIG_FIRST_WAY,
    FIRST_WAY_STATES,
    VERY_SMALL_FINAL,
    _chain_pair,
    smaller2_report,
    table_check,
)
from tetra.errors import ComparisonFailed, MoveNotApplicable, SolveStuck
from tetra.exactalg import var
from tetra.transforms import FreeSupply, builtin
from tetra.verify import (
    certify_random,
    compare_traces,
    run_chain,
    run_flacon,
    run_pairlabel_protocol,
    solve_frees,
    symbolic_start,
)
from tetra.words import Chain, Move, ReducedWord, canonical_chains_n4

CHAIN_TRANSFORMS = ["lusztig", "very_small", "sergeev_alpha", "bz", "smaller2", "full3", "flacon_diag", "flacon_full"]


def sympy_word_product(state, template):
    """Independent oracle: the model product along a state's word, built in sympy."""
    M = sympy.eye(state.word.n)
    for i, blk in zip(state.word.letters, state.blocks):
        M = M * sympy_embed(sympy_template(template, ["_p0", "_p1", "_p2"][: len(blk)]), i, state.word.n).subs(
            {sympy.Symbol(f"_p{k}"): to_sympy(x) for k, x in enumerate(blk)}, simultaneous=True
        )
    return M


@pytest.mark.parametrize("name", CHAIN_TRANSFORMS)
def test_every_chain_state_keeps_the_matrix_product(name):
    t = builtin(name)
    tu, tl = _chain_pair(name, t.block_width)
    want = sympy_word_product(tu.start, t.model.template)
    for trace in (tu, tl):
        for s in trace.states[1:]:
            assert sympy.simplify(sympy_word_product(s, t.model.template) - want) == sympy.zeros(4)


def test_very_small_finals_against_sympy():
    tu, tl = _chain_pair("very_small")
    want = [sympy.sympify(x) for x in VERY_SMALL_FINAL.split(",")]
    for trace in (tu, tl):
        assert [sympy.expand(to_sympy(x) - w) for x, w in zip(trace.final.components(), want)] == [0] * 6
    assert compare_traces(tu, tl).verdicts == ["equal"] * 6


@pytest.mark.parametrize("name", ["lusztig", "very_small", "sergeev_alpha", "bz"])
def test_maps_agree_without_solving(name):
    tu, tl = _chain_pair(name)
    rep = compare_traces(tu, tl)
    assert rep.passed and rep.assignments == {}


def test_smaller2_solution_family():
    r = smaller2_report(trials=5)
    rep = r["report"]
    assert rep.passed
    assert [rep.display_names[f] for f in rep.unconstrained] == ["a4pp"]
    assert r["certify"]["passed"] == 5
    assert r["printed_point_ok"] and r["product_a2_a4"]
    assert not all(r["literal"].values())


def test_smaller2_finals_agree_after_substitution_in_sympy():
    """Plug the solver's assignments into both finals and compare with sympy."""
    tu, tl = _chain_pair("smaller2", 2)
    rep = compare_traces(tu, tl)
    sub = {sympy.Symbol(k): to_sympy(v) for k, v in rep.assignments.items()}
    for x, y in zip(tu.final.components(), tl.final.components()):
        assert sympy.simplify(to_sympy(x).subs(sub, simultaneous=True) - to_sympy(y).subs(sub, simultaneous=True)) == 0


def test_certify_random_is_deterministic():
    tu, tl = _chain_pair("smaller2", 2)
    assert certify_random(tu, tl, 4, seed=11) == certify_random(tu, tl, 4, seed=11)
    with pytest.raises(ValueError):
        certify_random(tu, tl, 0, seed=1)


def test_table_check_detects_a_perturbed_row():
    _, tl = _chain_pair("lusztig")
    assert table_check(tl, LUSZTIG_FIRST_WAY, FIRST_WAY_STATES, LUSZTIG_ABBREV) == []
    rows = list(LUSZTIG_FIRST_WAY)
    word, params = rows[3]
    rows[3] = (word, params.replace("delta/gamma", "gamma/delta"))
    assert table_check(tl, rows, FIRST_WAY_STATES, LUSZTIG_ABBREV) == [4]
    rows = list(LUSZTIG_FIRST_WAY)
    rows[1] = ("212321", rows[1][1])
    assert table_check(tl, rows, FIRST_WAY_STATES, LUSZTIG_ABBREV) == [2]


def test_solve_frees_triangular():
    s, t, a, b = (var(n) for n in "stab")
    sol, log = solve_frees([s, t * s, a], [a * b, b, a], ["s", "t"])
    assert sol["s"] == a * b and sol["t"] == 1 / a
    assert log == [(1, "s"), (2, "t")]
    with pytest.raises(SolveStuck):
        solve_frees([s + s * s, a], [b, b], ["s"])


@given(st.integers(1, 50), st.integers(1, 50))
def test_solve_frees_recovers_planted_values(p, q):
    s, t, a = var("s"), var("t"), var("a")
    lhs = [s * a, t / s]
    rhs = [p * a, q * a]
    sol, _ = solve_frees(lhs, rhs, ["s", "t"])
    assert sol["s"] == p and sol["t"] == p * q * a


def test_compare_traces_rejects_shared_free_names():
    plus, minus = canonical_chains_n4()
    t = builtin("smaller2")
    start = symbolic_start(6, 2)
    tu = run_chain(start, plus, t, FreeSupply("t"))
    tl = run_chain(start, minus, t, FreeSupply("t"))
    with pytest.raises(ValueError):
        compare_traces(tu, tl)


def test_compare_traces_reports_disagreement():
    plus, minus = canonical_chains_n4()
    tu = run_chain(symbolic_start(6, 1), plus, builtin("very_small"))
    tl = run_chain(symbolic_start(6, 1), minus, builtin("lusztig"))
    with pytest.raises(ComparisonFailed):
        compare_traces(tu, tl)


def test_down_window_without_inverse():
    chain = Chain(ReducedWord(3, (2, 1, 2)), (Move("R", 1),))
    with pytest.raises(MoveNotApplicable):
        run_chain(symbolic_start(3, 2), chain, builtin("smaller2"))
    tr = run_chain(symbolic_start(3, 1), chain, builtin("very_small"))
    assert tr.final.word.letters == (1, 2, 1)


def test_pairlabel_protocol():
    rep = run_pairlabel_protocol()
    assert rep["match"].passed
    assert rep["lhs_printed_mismatch"] == []
    assert rep["rhs_printed_mismatch"] == [3, 5, 6]
    assert rep["identity_1"] and rep["identity_2"]


def test_flacon():
    rep = run_flacon()
    assert rep["system"] == {"e'": "f~1", "f'": "d1*f1", "d~": "e1/f~1"}
    assert rep["full_diagonal_system_agrees"] and rep["prefactors_agree_under_system"]
    assert all(e["identically_equal"] for e in rep["equations"])
