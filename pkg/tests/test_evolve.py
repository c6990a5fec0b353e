from itertools import permutations

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import to_sympy
from tetra.errors import ArityMismatch, IndexOutOfRange, NoPermutation
from tetra.evolve import (
    TEMPLATES,
    MatrixRF,
    TriangularityClass,
    bz_braid_relation,
    classify_triangularity,
    compose_permutations,
    elementary,
    elementary_identities,
    factorization_report,
    generic_member,
    invert_permutation,
    long_product_triangularity,
    pair_embed,
    permutation_factorization,
    permutation_matrix,
    phi_embed,
    product_along_word,
    quaternity_check,
    reversal_matrix,
    symbolic_blocks,
    template_matrix,
    triangularity_classes,
    triple_quadruple_evolution,
)
from tetra.exactalg import var
from tetra.words import ReducedWord, enumerate_reduced_words, longest_permutation, word_to_permutation

C = TriangularityClass


def to_sympy_matrix(M: MatrixRF) -> sympy.Matrix:
    return sympy.Matrix([[to_sympy(x) for x in r] for r in M.rows])


def sympy_template(template: str, params):
    """Independent sympy rebuild of the 2x2 templates."""
    p = [sympy.Symbol(str(s)) for s in params]
    return {
        "abc": lambda: [[p[0], p[1]], [p[2], 0]],
        "ab": lambda: [[p[0], p[1]], [1 / p[1], 0]],
        "a": lambda: [[p[0], 1], [1, 0]],
        "neg": lambda: [[p[0], -1], [1, 0]],
        "bz": lambda: [[1 / p[0], 1], [0, p[0]]],
        "unip": lambda: [[1, p[0]], [0, 1]],
        "diag": lambda: [[1 / p[0], 0], [0, p[0]]],
        "flacon": lambda: [[1 / p[0], p[1]], [0, p[0]]],
    }[template]()


def sympy_embed(block, i, n):
    M = sympy.eye(n)
    M[i - 1, i - 1], M[i - 1, i] = block[0]
    M[i, i - 1], M[i, i] = block[1]
    return M


# ------------------------------------------------------------------ matrices
def test_matrix_arithmetic_and_inverse():
    a, b = var("a"), var("b")
    M = MatrixRF([[a, b], [1, a]])
    assert M * M.inverse() == MatrixRF.identity(2)
    assert M.det() == a * a - b
    assert M.transpose() == MatrixRF([[a, 1], [b, a]])
    with pytest.raises(ArityMismatch):
        MatrixRF([[1, 2]]) * MatrixRF([[1, 2]])


@pytest.mark.parametrize("template", sorted(TEMPLATES))
def test_templates_agree_with_sympy(template):
    width = TEMPLATES[template][0]
    params = [var(n) for n in "pqr"[:width]]
    ours = to_sympy_matrix(template_matrix(template, params))
    assert sympy.simplify(ours - sympy.Matrix(sympy_template(template, "pqr"[:width]))) == sympy.zeros(2)


def test_template_arity_and_unknown():
    with pytest.raises(ArityMismatch):
        template_matrix("abc", [1, 2])
    with pytest.raises(KeyError):
        template_matrix("nope", [1])


def test_embeddings():
    A = MatrixRF([[var("p"), var("q")], [var("r"), var("s")]])
    E = phi_embed(A, 2, 4)
    assert E[1, 1] == var("p") and E[1, 2] == var("q") and E[2, 1] == var("r") and E[0, 0] == 1 and E[3, 3] == 1
    P = pair_embed(A, 1, 3, 3)
    assert P[0, 2] == var("q") and P[2, 0] == var("r") and P[1, 1] == 1
    with pytest.raises(IndexOutOfRange):
        phi_embed(A, 3, 3)
    with pytest.raises(IndexOutOfRange):
        pair_embed(A, 2, 2, 3)


@pytest.mark.parametrize("template", ["abc", "ab", "neg", "bz"])
def test_product_along_word_matches_sympy(template):
    word = ReducedWord(3, (1, 2, 1))
    width = TEMPLATES[template][0]
    blocks = symbolic_blocks(3, width)
    ours = product_along_word(word, blocks, template)[-1]
    M = sympy.eye(3)
    for i, blk in zip(word.letters, blocks):
        M = M * sympy_embed(sympy_template(template, [str(x) for x in blk]), i, 3)
    assert sympy.simplify(to_sympy_matrix(ours) - M) == sympy.zeros(3)


def test_permutation_and_reversal_matrices():
    assert reversal_matrix(3) == permutation_matrix((3, 2, 1))
    u, v = (2, 3, 1), (3, 1, 2)
    assert permutation_matrix(compose_permutations(u, v)) == permutation_matrix(u) * permutation_matrix(v)
    assert compose_permutations(u, invert_permutation(u)) == (1, 2, 3)


# ------------------------------------------------------------------ triangularity
def test_classification_examples():
    a = var("a")
    assert classify_triangularity(MatrixRF([[1, a], [0, 1]])) == C.UpperN
    assert classify_triangularity(MatrixRF([[a, 0], [1, a]])) == C.LowerB
    assert classify_triangularity(MatrixRF([[a, 1], [1, 0]])) == C.cUpperN
    assert classify_triangularity(MatrixRF([[0, 2], [1, a]])) == C.cLowerB
    assert classify_triangularity(MatrixRF([[a, 1], [1, a]])) == C.NONE
    assert triangularity_classes(MatrixRF.identity(2)) >= {C.UpperN, C.LowerN, C.UpperB, C.LowerB}


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("variant", ["B", "N"])
def test_quaternity(n, variant):
    rep = quaternity_check(n, variant)
    assert len(rep["loops"]) == 4 and all(l["identity"] for l in rep["loops"])


@pytest.mark.parametrize("cls", [C.UpperB, C.LowerB, C.cUpperB, C.cLowerB, C.cUpperN])
def test_generic_member_is_in_its_class(cls):
    assert cls in triangularity_classes(generic_member(cls, 4))


@given(st.integers(2, 5), st.sampled_from([C.UpperB, C.LowerB, C.cUpperB, C.cLowerB]))
def test_reversal_swaps_triangular_shapes(n, cls):
    M = generic_member(cls, n)
    I = reversal_matrix(n)
    flip = {C.UpperB: C.cLowerB, C.cLowerB: C.UpperB, C.LowerB: C.cUpperB, C.cUpperB: C.LowerB}
    assert flip[cls] in triangularity_classes(I * M)
    assert I * (I * M) == M


# ------------------------------------------------------------------ SL_n identities
@pytest.mark.parametrize("n", [3, 4])
def test_elementary_identities(n):
    rep = elementary_identities(n)
    assert rep["commutators"] == n * (n - 1) * (n - 2)


def test_elementary_commutator_against_sympy():
    a, b = sympy.symbols("a b")

    def e(i, j, t):
        M = sympy.eye(3)
        M[i - 1, j - 1] = t
        return M

    comm = e(1, 2, a) * e(2, 3, b) * e(1, 2, -a) * e(2, 3, -b)
    assert comm == e(1, 3, a * b)
    ours = elementary(3, 1, 2, var("a")) * elementary(3, 2, 3, var("b"))
    assert sympy.simplify(to_sympy_matrix(ours) - e(1, 2, a) * e(2, 3, b)) == sympy.zeros(3)


def test_triple_product_values():
    rep = triple_quadruple_evolution()
    a, b, c = sympy.symbols("a b c")
    want = sympy.Matrix([[a * c - b, -a, 1], [c, -1, 0], [1, 0, 0]])
    got = sympy.Matrix([[sympy.sympify(x.replace("^", "**")) for x in r] for r in rep["A1A2A1"]])
    assert sympy.simplify(got - want) == sympy.zeros(3)
    assert all(d in ("1", "-1") for d in rep["quadruple_complementary_diagonal"])


def test_bz_braid_relation_against_sympy():
    rep = bz_braid_relation()
    a, b, c = sympy.symbols("a b c")
    A = lambda t, i: sympy_embed([[1 / t, 1], [0, t]], i, 3)
    ap, bp, cp = b * c / (a * c + b), a * c, (a * c + b) / c
    assert sympy.simplify(A(c, 1) * A(b, 2) * A(a, 1) - A(cp, 2) * A(bp, 1) * A(ap, 2)) == sympy.zeros(3)
    assert sympy.simplify(to_sympy(rep["a'"]) - ap) == 0


# ------------------------------------------------------------------ long products
@pytest.mark.parametrize("n,template", [(3, "abc"), (3, "neg"), (4, "neg"), (4, "a")])
def test_long_products_are_c_upper(n, template):
    rep = long_product_triangularity(n, template=template)
    assert rep["count"] == len(enumerate_reduced_words(n))


def test_long_product_abc_n4_single_word():
    rep = long_product_triangularity(4, word=(1, 2, 1, 3, 2, 1))
    assert rep["count"] == 1


@pytest.mark.parametrize("word", [w.letters for w in enumerate_reduced_words(3)] + [(1, 2, 1, 3, 2, 1), (3, 2, 3, 1, 2, 3)])
def test_factorization_statements(word):
    n = max(word) + 1
    rep = factorization_report(ReducedWord(n, word))
    w0 = longest_permutation(n)
    for row in rep["rows"]:
        assert row["right"] == row["suffix"]
        assert row["left"] == row["w0_prefix_inverse"]
        assert row["left"] == compose_permutations(w0, invert_permutation(row["prefix"]))


def test_factorization_left_is_not_prefix_in_general():
    rep = factorization_report(ReducedWord(4, (1, 2, 1, 3, 2, 1)))
    assert any(row["left"] != row["prefix"] for row in rep["rows"])


def test_factorization_by_independent_search():
    """Brute force with sympy: rows permuted to c-upper with nonzero antidiagonal."""
    word = (1, 2, 1)
    blocks = symbolic_blocks(3, 3)
    M = to_sympy_matrix(product_along_word(ReducedWord(3, word), blocks, "abc")[1])
    found = []
    for perm in permutations(range(1, 4)):
        P = to_sympy_matrix(permutation_matrix(perm))
        Q = sympy.simplify(P * M)
        below = all(Q[i, j] == 0 for i in range(3) for j in range(3) if i + j > 2)
        anti = all(Q[i, 2 - i] != 0 for i in range(3))
        if below and anti:
            found.append(perm)
    w0 = longest_permutation(3)
    assert found == [compose_permutations(w0, invert_permutation(word_to_permutation(word[:1], 3)))]


def test_factorization_errors():
    with pytest.raises(NoPermutation):
        permutation_factorization(MatrixRF.zero(3), "left", 3)
    # a row permutation of an invertible c-upper matrix is c-upper only for the identity
    M = MatrixRF([[var("a"), 1, 0], [1, 0, 0], [0, 0, 0]])
    with pytest.raises(NoPermutation):
        permutation_factorization(M, "right", 3)
