# Two ways around the n = 4 tetrahedron
#
# Every reduced word of the longest permutation of S(4) is reached from
# 121321 by braid (R) and commutation (L) moves.  Two chains of seven moves
# end at the same word 323123.  A transform that solves a braid-type matrix
# identity can be pushed along both chains; the tetrahedron property says the
# two final tuples agree.

from tetra.transforms import FreeSupply, builtin
from tetra.verify import compare_traces, run_chain, symbolic_start
from tetra.words import canonical_chains_n4, chain_union, enumerate_reduced_words

# ## The words
plus, minus = canonical_chains_n4()
print("C+:", plus.start, plus)
print("C-:", minus.start, minus)
print("reduced words of w0(4):", len(enumerate_reduced_words(4)))
print("visited by the two chains:", len(chain_union([plus, minus])))

start = symbolic_start(6, 1)


def both(name):
    t = builtin(name)
    return run_chain(start, plus, t, FreeSupply("u")), run_chain(start, minus, t, FreeSupply("l"))


# ## The one-parameter map [[a, 1], [1, 0]]
# No free parameters, so the finals must agree component by component.
tu, tl = both("very_small")
for label, tr in (("C+", tu), ("C-", tl)):
    print(label, [x.render() for x in tr.final.components()])
print(compare_traces(tu, tl).verdicts)

# ## The Lusztig flip
# Same story for x_1(a) x_2(b) x_1(c) = x_2(bc/(a+c)) x_1(a+c) x_2(ab/(a+c)).
tu, tl = both("lusztig")
for s in tu.states:
    print(s.word_str(), [x.render() for x in s.components()])
print("agree:", compare_traces(tu, tl).passed)
