# Prefix products and permutation factorization
#
# Multiply [[a, b], [c, 0]] blocks along a reduced word of w0(n).  The full
# product is c-upper triangular (zeros below the antidiagonal).  For each
# prefix of length k a unique row permutation puts the prefix product into
# that shape, and a unique column permutation does the same from the right.

from tetra.evolve import factorization_report, long_product_triangularity, product_along_word, symbolic_blocks
from tetra.words import ReducedWord

word = ReducedWord(4, (1, 2, 1, 3, 2, 1))
M = product_along_word(word, symbolic_blocks(6, 3), "abc")[-1]
print(M)

# ## Every reduced word of w0(3)
print(long_product_triangularity(3))

# ## Left and right factors of each prefix
# The right factor is the suffix permutation.  The left factor is w0 w_k^-1,
# which differs from the prefix permutation w_k itself.
for row in factorization_report(word)["rows"]:
    print(row["k"], "left", row["left"], "prefix", row["prefix"], "right", row["right"], "suffix", row["suffix"])
