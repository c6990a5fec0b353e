from math import factorial, prod

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tetra.errors import LetterOutOfRange, MoveNotApplicable
from tetra.words import (
    PRINTED_A42_COUNT,
    Chain,
    Move,
    ReducedWord,
    applicable_moves,
    apply_move,
    canonical_chains_n4,
    chain_union,
    commutation_classes,
    enumerate_reduced_words,
    inversions,
    is_reduced,
    longest_permutation,
    maximal_word,
    minimal_word,
    move_graph_connected,
    word_to_permutation,
)


def stanley_count(n: int) -> int:
    """Number of reduced words of w0(n): (n choose 2)! / prod (2k-1)^(n-k)."""
    m = n * (n - 1) // 2
    return factorial(m) // prod((2 * k - 1) ** (n - k) for k in range(1, n))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_reduced_word_count_matches_stanley_formula(n):
    assert len(enumerate_reduced_words(n)) == stanley_count(n)


def test_n4_brute_force_count_differs_from_printed_count():
    assert len(enumerate_reduced_words(4)) == 16
    assert PRINTED_A42_COUNT == 14


@pytest.mark.parametrize("n, classes", [(3, 2), (4, 8), (5, 62)])
def test_commutation_class_counts(n, classes):
    # 2, 8, 62 are the numbers of rhombic tilings of the 2n-gon (OEIS A006245)
    assert len(commutation_classes(n)) == classes


def test_canonical_chains():
    plus, minus = canonical_chains_n4()
    assert [str(w) for w in plus.words()] == ["121321", "212321", "213231", "231231", "231213", "232123", "323123", "321323"]
    assert [str(w) for w in minus.words()] == ["121321", "123121", "123212", "132312", "132132", "312132", "321232", "321323"]
    assert str(plus) == "R(1) R(3) L(2) L(5) R(3) R(1) L(3)"
    assert len(chain_union([plus, minus])) == 14


def test_reversed_frame_reads_words_backwards():
    plus, _ = canonical_chains_n4()
    rev = plus.reversed_frame()
    assert [str(w) for w in rev.words()] == [str(w)[::-1] for w in plus.words()]


def test_minimal_and_maximal_words():
    for n in (3, 4, 5):
        assert minimal_word(n).is_longest() and maximal_word(n).is_longest()
        assert minimal_word(n) in enumerate_reduced_words(n)
        assert maximal_word(n) in enumerate_reduced_words(n)
    assert str(minimal_word(4)) == "121321" and str(maximal_word(4)) == "323123"


def test_permutation_convention():
    assert word_to_permutation((1,), 3) == (2, 1, 3)
    assert longest_permutation(4) == (4, 3, 2, 1)
    assert inversions((3, 1, 2)) == 2
    assert not is_reduced((1, 1), 3)


def test_errors():
    w = ReducedWord.parse("121321", 4)
    with pytest.raises(MoveNotApplicable):
        apply_move(w, Move("R", 2))
    with pytest.raises(MoveNotApplicable):
        apply_move(w, Move("L", 1))
    with pytest.raises(MoveNotApplicable):
        Chain(w, (Move("R", 2),))
    with pytest.raises(LetterOutOfRange):
        ReducedWord.parse("12x", 4)
    with pytest.raises(ValueError):
        ReducedWord(3, (1, 1))
    assert Move.parse("R(3)") == Move("R", 3)


def test_move_graph_connected():
    assert all(move_graph_connected(n) for n in (2, 3, 4, 5))


word_index = st.tuples(st.sampled_from([3, 4, 5]), st.integers(0, 10 ** 6))


@given(word_index)
def test_moves_are_involutions_and_preserve_the_permutation(ni):
    n, i = ni
    words = enumerate_reduced_words(n)
    w = words[i % len(words)]
    for m in applicable_moves(w):
        w2 = apply_move(w, m)
        assert w2.permutation == w.permutation
        assert apply_move(w2, m) == w
        assert m in applicable_moves(w2)
