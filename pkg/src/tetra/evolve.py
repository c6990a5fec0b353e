"""Matrices over the rational-function field and evolutions along reduced words.

A 2x2 block A placed at position i of an n x n identity is written
``phi_embed(A, i, n)``.  Multiplying such blocks along a reduced word gives
the prefix products B_k = phi_{i1}(A_1) ... phi_{ik}(A_k).

The triangularity vocabulary follows one convention throughout:

* ``UpperB``/``LowerB``: zero below/above the diagonal, nonzero diagonal.
* ``cUpperB``/``cLowerB``: zero below/above the complementary diagonal
  (i + j = n + 1), nonzero entries on it.
* ``...N``: the same with 1's on the relevant diagonal.

"Nonzero" means "not the zero rational function".
"""

from __future__ import annotations

from enum import Enum
from itertools import permutations
from typing import Callable, Dict, List, Sequence, Tuple

from .errors import (
    ArityMismatch,
    IdentityFails,
    IndexOutOfRange,
    NonUniquePermutation,
    NoPermutation,
    QuaternityFails,
    TheoremViolated,
)
from .exactalg import RationalFunction, TruncatedSeries, as_rf, const, rf_equal, var
from .words import ReducedWord, enumerate_reduced_words, longest_permutation, word_to_permutation

__all__ = [
    "MatrixRF",
    "TriangularityClass",
    "TEMPLATES",
    "template_matrix",
    "symbolic_blocks",
    "phi_embed",
    "pair_embed",
    "m13_embed",
    "reversal_matrix",
    "permutation_matrix",
    "elementary",
    "product_along_word",
    "triangularity_classes",
    "classify_triangularity",
    "quaternity_check",
    "elementary_identities",
    "triple_quadruple_evolution",
    "long_product_triangularity",
    "permutation_factorization",
    "prefix_permutation",
    "suffix_permutation",
    "bz_braid_relation",
    "factorization_report",
    "invert_permutation",
    "compose_permutations",
    "generic_member",
    "apply_to_column",
]


class MatrixRF:
    """Square or rectangular matrix of rational functions (immutable)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(as_rf(x) for x in r) for r in rows)
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("matrix rows must be non-empty and of equal length")
        self.rows = rows

    @classmethod
    def identity(cls, n: int) -> "MatrixRF":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n: int, m: int | None = None) -> "MatrixRF":
        return cls([[0] * (m or n) for _ in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __mul__(self, other):
        if isinstance(other, MatrixRF):
            n, m = self.shape
            m2, p = other.shape
            if m != m2:
                raise ArityMismatch(f"cannot multiply {self.shape} by {other.shape}")
            out = []
            for i in range(n):
                row = []
                for j in range(p):
                    acc = const(0)
                    for k in range(m):
                        x, y = self.rows[i][k], other.rows[k][j]
                        if not x.is_zero() and not y.is_zero():
                            acc = acc + x * y
                    row.append(acc.simplify())
                out.append(row)
            return MatrixRF(out)
        c = as_rf(other)
        return MatrixRF([[x * c for x in r] for r in self.rows])

    def __rmul__(self, other):
        c = as_rf(other)
        return MatrixRF([[c * x for x in r] for r in self.rows])

    def __add__(self, other: "MatrixRF"):
        return MatrixRF([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "MatrixRF"):
        return MatrixRF([[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __eq__(self, other):
        if not isinstance(other, MatrixRF) or self.shape != other.shape:
            return NotImplemented if not isinstance(other, MatrixRF) else False
        return all(rf_equal(x, y) for r, s in zip(self.rows, other.rows) for x, y in zip(r, s))

    __hash__ = None

    def first_difference(self, other: "MatrixRF"):
        for i, (r, s) in enumerate(zip(self.rows, other.rows)):
            for j, (x, y) in enumerate(zip(r, s)):
                if not rf_equal(x, y):
                    return (i + 1, j + 1), x, y
        return None

    def transpose(self) -> "MatrixRF":
        return MatrixRF(list(zip(*self.rows)))

    def substitute(self, bindings) -> "MatrixRF":
        return MatrixRF([[x.substitute(bindings) for x in r] for r in self.rows])

    def det(self) -> RationalFunction:
        """Cofactor expansion along the sparsest row."""
        n, m = self.shape
        if n != m:
            raise ArityMismatch("determinant of a non-square matrix")
        return _det([list(r) for r in self.rows])

    def inverse(self) -> "MatrixRF":
        d = self.det()
        n = self.n
        cof = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = [[self.rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
                sign = 1 if (i + j) % 2 == 0 else -1
                row.append(_det(minor) * sign if minor else const(1))
            cof.append(row)
        return MatrixRF([[(cof[j][i] / d).simplify() for j in range(n)] for i in range(n)])

    def render(self) -> List[List[str]]:
        return [[x.render() for x in r] for r in self.rows]

    def __str__(self):
        cells = self.render()
        width = max(len(c) for r in cells for c in r)
        return "\n".join("[" + "  ".join(c.rjust(width) for c in r) + "]" for r in cells)

    def __repr__(self):
        return f"MatrixRF({self.render()!r})"


def _det(rows) -> RationalFunction:
    n = len(rows)
    if n == 0:
        return const(1)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    # expand along the row with most zeros
    best = max(range(n), key=lambda i: sum(1 for x in rows[i] if x.is_zero()))
    acc = const(0)
    for j, x in enumerate(rows[best]):
        if x.is_zero():
            continue
        minor = [[r[c] for c in range(n) if c != j] for k, r in enumerate(rows) if k != best]
        sign = 1 if (best + j) % 2 == 0 else -1
        acc = acc + x * _det(minor) * sign
    return acc.simplify()


# ------------------------------------------------------------- 2x2 templates
def _inv(x):
    return as_rf(x).inverse()


TEMPLATES: Dict[str, Tuple[int, Callable]] = {
    "abc": (3, lambda a, b, c: [[a, b], [c, 0]]),
    "ab": (2, lambda a, b: [[a, b], [_inv(b), 0]]),
    "a": (1, lambda a: [[a, 1], [1, 0]]),
    "neg": (1, lambda a: [[a, -1], [1, 0]]),
    "bz": (1, lambda a: [[_inv(a), 1], [0, a]]),
    "unip": (1, lambda a: [[1, a], [0, 1]]),
    "diag": (1, lambda a: [[_inv(a), 0], [0, a]]),
    "flacon": (2, lambda a, x: [[_inv(a), x], [0, a]]),
}


def template_matrix(template: str, block: Sequence) -> MatrixRF:
    try:
        width, f = TEMPLATES[template]
    except KeyError:
        raise KeyError(f"unknown template {template!r}; known: {sorted(TEMPLATES)}") from None
    if len(block) != width:
        raise ArityMismatch(f"template {template!r} takes {width} parameters, got {len(block)}")
    return MatrixRF(f(*[as_rf(x) for x in block]))


def symbolic_blocks(count: int, width: int, letters: str = "abc") -> List[Tuple[RationalFunction, ...]]:
    """[(a1, b1, c1), (a2, b2, c2), ...] truncated to ``width``."""
    return [tuple(var(f"{letters[j]}{k}") for j in range(width)) for k in range(1, count + 1)]


def phi_embed(A: MatrixRF, i: int, n: int) -> MatrixRF:
    """A acting on rows/columns i, i+1 (1-based) of the n x n identity."""
    if not 1 <= i <= n - 1:
        raise IndexOutOfRange(f"block position {i} outside 1..{n - 1}")
    return pair_embed(A, i, i + 1, n)


def pair_embed(A: MatrixRF, p: int, q: int, n: int) -> MatrixRF:
    """A acting on rows/columns p < q (1-based) of the n x n identity."""
    if not (1 <= p < q <= n):
        raise IndexOutOfRange(f"pair ({p}, {q}) invalid for n = {n}")
    if A.shape != (2, 2):
        raise ArityMismatch("block must be 2 x 2")
    rows = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
    idx = (p - 1, q - 1)
    for a in range(2):
        for b in range(2):
            rows[idx[a]][idx[b]] = A.rows[a][b]
    return MatrixRF(rows)


def m13_embed(M: MatrixRF, n: int = 3) -> MatrixRF:
    return pair_embed(M, 1, 3, n)


def reversal_matrix(n: int) -> MatrixRF:
    """I(n): ones on the complementary diagonal."""
    return MatrixRF([[1 if i + j == n - 1 else 0 for j in range(n)] for i in range(n)])


def permutation_matrix(perm: Sequence[int]) -> MatrixRF:
    """iota(w): the matrix sending e_j to e_{w(j)}, for w in one-line notation."""
    n = len(perm)
    rows = [[0] * n for _ in range(n)]
    for j, wj in enumerate(perm):
        rows[wj - 1][j] = 1
    return MatrixRF(rows)


def elementary(n: int, i: int, j: int, a) -> MatrixRF:
    """e^a_{ij} = I_n + a e'_{ij}."""
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise IndexOutOfRange(f"invalid elementary index ({i}, {j}) for n = {n}")
    rows = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
    rows[i - 1][j - 1] = as_rf(a)
    return MatrixRF(rows)


def product_along_word(word, blocks, template: str) -> List[MatrixRF]:
    """Prefix products [B_0 = I, B_1, ..., B_k] along ``word``."""
    letters = word.letters if isinstance(word, ReducedWord) else tuple(word)
    n = word.n if isinstance(word, ReducedWord) else max(letters) + 1
    if len(blocks) != len(letters):
        raise ArityMismatch(f"{len(blocks)} blocks for a word of length {len(letters)}")
    out = [MatrixRF.identity(n)]
    for i, blk in zip(letters, blocks):
        out.append(out[-1] * phi_embed(template_matrix(template, blk), i, n))
    return out


# ------------------------------------------------------------- triangularity
class TriangularityClass(Enum):
    UpperN = "UpperN"
    LowerN = "LowerN"
    UpperB = "UpperB"
    LowerB = "LowerB"
    cUpperN = "cUpperN"
    cLowerN = "cLowerN"
    cUpperB = "cUpperB"
    cLowerB = "cLowerB"
    NONE = "None"


def _zero_pattern_ok(M: MatrixRF, keep) -> bool:
    n = M.n
    return all(M.rows[i][j].is_zero() for i in range(n) for j in range(n) if not keep(i + 1, j + 1))


def _diag(M: MatrixRF, complementary: bool):
    n = M.n
    return [M.rows[i][n - 1 - i] if complementary else M.rows[i][i] for i in range(n)]


def triangularity_classes(M: MatrixRF) -> frozenset:
    n, m = M.shape
    if n != m:
        return frozenset()
    out = set()
    shapes = {
        "Upper": (lambda i, j: i <= j, False),
        "Lower": (lambda i, j: i >= j, False),
        "cUpper": (lambda i, j: i + j <= n + 1, True),
        "cLower": (lambda i, j: i + j >= n + 1, True),
    }
    for name, (keep, comp) in shapes.items():
        if not _zero_pattern_ok(M, keep):
            continue
        d = _diag(M, comp)
        if all(not x.is_zero() for x in d):
            out.add(TriangularityClass[name + "B"])
            if all(rf_equal(x, 1) for x in d):
                out.add(TriangularityClass[name + "N"])
    return frozenset(out)


_PRIORITY = [
    TriangularityClass.cUpperN,
    TriangularityClass.cLowerN,
    TriangularityClass.cUpperB,
    TriangularityClass.cLowerB,
    TriangularityClass.UpperN,
    TriangularityClass.LowerN,
    TriangularityClass.UpperB,
    TriangularityClass.LowerB,
]


def classify_triangularity(M: MatrixRF) -> TriangularityClass:
    """The most specific class containing M (c-classes first), or NONE."""
    cls = triangularity_classes(M)
    for c in _PRIORITY:
        if c in cls:
            return c
    return TriangularityClass.NONE


def generic_member(cls: TriangularityClass, n: int, letter: str = "m") -> MatrixRF:
    """A matrix with independent symbolic entries filling the allowed pattern of ``cls``."""
    name = cls.value
    unit = name.endswith("N")
    base = name[:-1]
    keep = {
        "Upper": lambda i, j: i <= j,
        "Lower": lambda i, j: i >= j,
        "cUpper": lambda i, j: i + j <= n + 1,
        "cLower": lambda i, j: i + j >= n + 1,
    }[base]
    on_diag = (lambda i, j: i + j == n + 1) if base.startswith("c") else (lambda i, j: i == j)
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            if not keep(i, j):
                row.append(0)
            elif unit and on_diag(i, j):
                row.append(1)
            else:
                row.append(var(f"{letter}{i}_{j}"))
        rows.append(row)
    return MatrixRF(rows)


def quaternity_check(n: int, variant: str = "B") -> dict:
    """Go around B+ -L-> B-^c -R-> B- -L-> B+^c -R-> B+ from every corner."""
    if variant not in ("B", "N"):
        raise ValueError("variant must be 'B' or 'N'")
    C = TriangularityClass
    corners = [C[f"Upper{variant}"], C[f"cLower{variant}"], C[f"Lower{variant}"], C[f"cUpper{variant}"]]
    ops = ["L", "R", "L", "R"]
    I = reversal_matrix(n)
    if not I * I == MatrixRF.identity(n):
        raise QuaternityFails("I(n)^2 != I_n")
    report = {"n": n, "variant": variant, "loops": []}
    for start in range(4):
        M = generic_member(corners[start], n)
        cur = M
        steps = []
        for s in range(4):
            idx = (start + s) % 4
            cur = I * cur if ops[idx] == "L" else cur * I
            target = corners[(idx + 1) % 4]
            got = triangularity_classes(cur)
            if target not in got:
                raise QuaternityFails(
                    f"n={n}: {ops[idx]} from {corners[idx].value} landed outside {target.value}"
                )
            steps.append((ops[idx], target.value))
        if not cur == M:
            raise QuaternityFails(f"n={n}: loop from {corners[start].value} is not the identity")
        report["loops"].append({"start": corners[start].value, "steps": steps, "identity": True})
    return report


# ------------------------------------------------------------- SL_n identities
def elementary_identities(n: int) -> dict:
    """Check (e^a_ij)^-1 = e^-a_ij and [e^a_ij, e^b_jk] = e^ab_ik for distinct i, j, k."""
    if n < 3:
        raise ValueError("n must be at least 3")
    a, b = var("a"), var("b")
    I = MatrixRF.identity(n)
    checked = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            if not elementary(n, i, j, a) * elementary(n, i, j, -a) == I:
                raise IdentityFails(f"e^a_{i}{j} e^-a_{i}{j} != I")
            for k in range(1, n + 1):
                if k in (i, j):
                    continue
                comm = elementary(n, i, j, a) * elementary(n, j, k, b) * elementary(n, i, j, -a) * elementary(n, j, k, -b)
                if not comm == elementary(n, i, k, a * b):
                    raise IdentityFails(f"[e^a_{i}{j}, e^b_{j}{k}] != e^ab_{i}{k}")
                checked.append((i, j, k))
    # disjoint index pairs commute
    disjoint = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                for l in range(1, n + 1):
                    if len({i, j, k, l}) == 4:
                        comm = elementary(n, i, j, a) * elementary(n, k, l, b) * elementary(n, i, j, -a) * elementary(n, k, l, -b)
                        if not comm == I:
                            raise IdentityFails(f"[e^a_{i}{j}, e^b_{k}{l}] != I")
                        disjoint.append((i, j, k, l))
    return {"n": n, "commutators": len(checked), "disjoint": len(disjoint), "inverses": n * (n - 1)}


def _standard_column(n: int, order: int) -> List[TruncatedSeries]:
    """(u_n, ..., u_1) with u_i = x^(i-1)/(i-1)!."""
    from math import factorial

    col = []
    for i in range(n, 0, -1):
        col.append(TruncatedSeries.monomial("x", i - 1, const(1) / factorial(i - 1), order))
    return col


def apply_to_column(M: MatrixRF, column: Sequence[TruncatedSeries]) -> List[TruncatedSeries]:
    out = []
    for r in M.rows:
        acc = None
        for x, s in zip(r, column):
            if x.is_zero():
                continue
            t = s.scale(x)
            acc = t if acc is None else acc + t
        out.append(acc if acc is not None else column[0].scale(0))
    return out


def triple_quadruple_evolution() -> dict:
    """The A(a) = [[a,-1],[1,0]] products for 12, 121 and 121321, and their action on (u_n..u_1)."""
    from math import factorial

    a, b, c = var("a"), var("b"), var("c")
    A = lambda t, i, n: phi_embed(template_matrix("neg", (t,)), i, n)
    report = {}
    p12 = A(a, 1, 3) * A(b, 2, 3)
    want12 = MatrixRF([[a, -b, 1], [1, 0, 0], [0, 1, 0]])
    if not p12 == want12:
        raise IdentityFails(f"A1(a)A2(b) = {p12.render()}")
    p121 = p12 * A(c, 1, 3)
    want121 = MatrixRF([[a * c - b, -a, 1], [c, -1, 0], [1, 0, 0]])
    if not p121 == want121:
        raise IdentityFails(f"A1(a)A2(b)A1(c) = {p121.render()}")
    report["A1A2"] = p12.render()
    report["A1A2A1"] = p121.render()
    col3 = apply_to_column(p121, _standard_column(3, 4))
    lead3 = _leading_pattern(col3)
    if lead3 != [(0, 1), (1, -1), (2, 1)]:
        raise IdentityFails(f"triple column leading terms {lead3}")
    report["triple_column"] = [s.render() for s in col3]
    quad = A(a, 1, 4) * A(b, 2, 4) * A(a, 1, 4) * A(c, 3, 4) * A(b, 2, 4) * A(a, 1, 4)
    cls = triangularity_classes(quad)
    if TriangularityClass.cUpperB not in cls:
        raise IdentityFails("quadruple product is not c-upper triangular")
    comp = _diag(quad, True)
    if not all(rf_equal(x, 1) or rf_equal(x, -1) for x in comp):
        raise IdentityFails(f"complementary diagonal {[x.render() for x in comp]} is not +-1")
    col4 = apply_to_column(quad, _standard_column(4, 6))
    lead4 = _leading_pattern(col4)
    for i, (deg, sgn) in enumerate(lead4):
        if deg != i or sgn not in (1, -1):
            raise IdentityFails(f"quadruple column leading terms {lead4}")
    report["quadruple"] = quad.render()
    report["quadruple_complementary_diagonal"] = [x.render() for x in comp]
    report["quadruple_column_leading"] = [
        f"{'-' if s < 0 else ''}x^{d}/{factorial(d)}" for d, s in lead4
    ]
    return report


def _leading_pattern(col: Sequence[TruncatedSeries]):
    """For each entry: (lowest degree, sign of coefficient * degree!)."""
    from math import factorial

    out = []
    for s in col:
        for d, cf in enumerate(s.coeffs):
            if not cf.is_zero():
                if not cf.is_constant():
                    out.append((d, None))
                else:
                    out.append((d, int(cf.constant_value() * factorial(d))))
                break
        else:
            out.append((None, None))
    return out


# ------------------------------------------------------------- long products
def long_product_triangularity(n: int, word=None, template: str = "abc") -> dict:
    """The full product along a reduced word of w0(n), with fully symbolic blocks, must be c-upper."""
    if word is None:
        words = enumerate_reduced_words(n)
    else:
        words = [word if isinstance(word, ReducedWord) else ReducedWord(n, tuple(word))]
    width = TEMPLATES[template][0]
    results = []
    for w in words:
        if not w.is_longest():
            raise ValueError(f"{w} is not a reduced word of the longest permutation")
        blocks = symbolic_blocks(len(w), width)
        M = product_along_word(w, blocks, template)[-1]
        cls = triangularity_classes(M)
        if TriangularityClass.cUpperB not in cls:
            raise TheoremViolated(f"product along {w} is not c-upper triangular:\n{M}")
        results.append(str(w))
    return {"n": n, "template": template, "words": results, "count": len(results)}


def prefix_permutation(word: ReducedWord, k: int) -> Tuple[int, ...]:
    return word_to_permutation(word.letters[:k], word.n)


def suffix_permutation(word: ReducedWord, k: int) -> Tuple[int, ...]:
    return word_to_permutation(word.letters[k:], word.n)


def invert_permutation(perm: Sequence[int]) -> Tuple[int, ...]:
    out = [0] * len(perm)
    for i, p in enumerate(perm, 1):
        out[p - 1] = i
    return tuple(out)


def compose_permutations(u: Sequence[int], v: Sequence[int]) -> Tuple[int, ...]:
    """(u v)(i) = u(v(i)), so that iota(u v) = iota(u) iota(v)."""
    return tuple(u[x - 1] for x in v)


def permutation_factorization(prefix_matrix: MatrixRF, side: str, n: int) -> Tuple[int, ...]:
    """The unique w in S(n) with iota(w) M (side='left') or M iota(w) (side='right') c-upper."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    found = []
    for perm in permutations(range(1, n + 1)):
        P = permutation_matrix(perm)
        M = P * prefix_matrix if side == "left" else prefix_matrix * P
        if TriangularityClass.cUpperB in triangularity_classes(M):
            found.append(perm)
    if not found:
        raise NoPermutation(f"no permutation puts the matrix in B+^c from the {side}")
    if len(found) > 1:
        raise NonUniquePermutation(f"{len(found)} permutations work from the {side}: {found}")
    return found[0]


def factorization_report(word: ReducedWord, template: str = "abc") -> dict:
    """Check both factorization statements for every prefix length k of ``word``."""
    width = TEMPLATES[template][0]
    blocks = symbolic_blocks(len(word), width)
    prefixes = product_along_word(word, blocks, template)
    rows = []
    for k in range(1, len(word) + 1):
        left = permutation_factorization(prefixes[k], "left", word.n)
        right = permutation_factorization(prefixes[k], "right", word.n)
        prefix = prefix_permutation(word, k)
        rows.append(
            {
                "k": k,
                "left": left,
                "prefix": prefix,
                # the row permutation that actually works is w0 w_k^-1
                "w0_prefix_inverse": compose_permutations(
                    longest_permutation(word.n), invert_permutation(prefix)
                ),
                "right": right,
                "suffix": suffix_permutation(word, k),
            }
        )
    return {"word": str(word), "rows": rows}


def bz_braid_relation() -> dict:
    """A_1(c)A_2(b)A_1(a) = A_2(c')A_1(b')A_2(a') for A(t) = [[1/t, 1], [0, t]]."""
    a, b, c = var("a"), var("b"), var("c")
    ap = b * c / (a * c + b)
    bp = a * c
    cp = (a * c + b) / c
    A = lambda t, i: phi_embed(template_matrix("bz", (t,)), i, 3)
    lhs = A(c, 1) * A(b, 2) * A(a, 1)
    rhs = A(cp, 2) * A(bp, 1) * A(ap, 2)
    diff = lhs.first_difference(rhs)
    if diff is not None:
        raise IdentityFails(f"entry {diff[0]}: {diff[1]} != {diff[2]}")
    return {"lhs": lhs.render(), "rhs": rhs.render(), "a'": ap.render(), "b'": bp.render(), "c'": cp.render()}
