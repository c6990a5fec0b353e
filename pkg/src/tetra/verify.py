"""Evolve parameter states along move chains and certify that two chains agree.

A state is a reduced word (or a sequence of pair labels) together with one
parameter block per letter.  A braid move replaces the three blocks under
its window by the transform outputs, a commutation move swaps two blocks.
When the transform has free parameters the two final states are compared
after solving for the frees with a triangular fixpoint procedure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    CertificationFailed,
    ComparisonFailed,
    DenominatorVanishes,
    MoveNotApplicable,
    PoleAtPoint,
    SolveStuck,
)
from .exactalg import RationalFunction, Polynomial, as_rf, rf_equal, substitute, var
from .transforms import FreeRecord, FreeSupply, Transform, apply, builtin
from .words import Chain, Move, ReducedWord, apply_move

__all__ = [
    "ParamState",
    "EvolutionTrace",
    "MatchReport",
    "symbolic_start",
    "run_chain",
    "compare_traces",
    "solve_frees",
    "certify_random",
    "run_pairlabel_protocol",
    "run_labeled",
    "run_flacon",
    "TRIPLE13_LHS",
    "TRIPLE13_RHS",
    "TRIPLE13_START",
]


@dataclass(frozen=True)
class ParamState:
    word: object  # ReducedWord, or a tuple of pair labels
    blocks: Tuple[Tuple[RationalFunction, ...], ...]
    frees: Tuple[FreeRecord, ...] = ()

    def components(self) -> List[RationalFunction]:
        return [x for b in self.blocks for x in b]

    def word_str(self) -> str:
        if isinstance(self.word, ReducedWord):
            return str(self.word)
        return ",".join(self.word)

    def reversed(self) -> "ParamState":
        """Right-to-left presentation: word and blocks read backwards."""
        word = self.word
        if isinstance(word, ReducedWord):
            word = ReducedWord(word.n, word.letters[::-1])
        else:
            word = tuple(word[::-1])
        return ParamState(word, tuple(self.blocks[::-1]), self.frees)


@dataclass
class EvolutionTrace:
    transform: str
    steps: List[Tuple[Optional[Move], ParamState]]
    supply: FreeSupply = field(default_factory=FreeSupply)

    @property
    def start(self) -> ParamState:
        return self.steps[0][1]

    @property
    def final(self) -> ParamState:
        return self.steps[-1][1]

    @property
    def states(self) -> List[ParamState]:
        return [s for _, s in self.steps]

    @property
    def moves(self) -> List[Move]:
        return [m for m, _ in self.steps[1:]]

    def free_records(self) -> List[FreeRecord]:
        return list(self.final.frees)

    def rendered(self, display: bool = True) -> List[List[List[str]]]:
        """Blocks as strings, frees shown under their display names when ``display``."""
        names = self.supply.display_bindings() if display else {}
        return [[[substitute(x, names).render() for x in b] for b in s.blocks] for s in self.states]


@dataclass
class MatchReport:
    verdicts: List[str]
    assignments: Dict[str, RationalFunction]
    unconstrained: List[str]
    residual: List[str]
    display_names: Dict[str, str]
    log: List[Tuple[int, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v != "failed" for v in self.verdicts)

    def named_assignments(self) -> Dict[str, RationalFunction]:
        """Solved frees and their values, both written with display names."""
        ren = {k: var(v) for k, v in self.display_names.items()}
        return {self.display_names.get(k, k): substitute(v, ren) for k, v in self.assignments.items()}

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "verdicts": self.verdicts,
            "solved": {k: v.render() for k, v in sorted(self.named_assignments().items())},
            "unconstrained": [self.display_names.get(f, f) for f in self.unconstrained],
            "residual": [self.display_names.get(f, f) for f in self.residual],
        }


def symbolic_start(count: int, width: int, letters: str = "abc") -> List[Tuple[RationalFunction, ...]]:
    """[(a1,), (a2,), ...] for width 1; [(a1, b1), ...] for width 2 and so on."""
    return [tuple(var(f"{letters[j]}{k}") for j in range(width)) for k in range(1, count + 1)]


# ------------------------------------------------------------------ chains
def _is_up(letters: Sequence[int], k: int) -> bool:
    return letters[k] < letters[k + 1]


def run_chain(
    start_blocks: Sequence[Sequence],
    chain: Chain,
    transform: Transform,
    supply: Optional[FreeSupply] = None,
) -> EvolutionTrace:
    """Evolve ``start_blocks`` along ``chain``; the trace keeps every intermediate state."""
    if len(start_blocks) != len(chain.start):
        raise ValueError(f"{len(start_blocks)} blocks for a word of length {len(chain.start)}")
    supply = supply if supply is not None else FreeSupply()
    blocks = [tuple(as_rf(x) for x in b) for b in start_blocks]
    if any(len(b) != transform.block_width for b in blocks):
        raise ValueError(f"{transform.name} needs blocks of width {transform.block_width}")
    word = chain.start
    frees: List[FreeRecord] = []
    steps: List[Tuple[Optional[Move], ParamState]] = [(None, ParamState(word, tuple(blocks)))]
    for s, m in enumerate(chain.moves, 1):
        new_word = apply_move(word, m)
        k = m.k - 1
        if m.kind == "R":
            t = transform
            if not _is_up(word.letters, k):
                if not transform.inverse_name:
                    raise MoveNotApplicable(
                        f"{m} acts on a (j+1, j, j+1) window and {transform.name} has no inverse"
                    )
                t = builtin(transform.inverse_name)
            before = len(supply.records)
            out, _ = apply(t, blocks[k:k + 3], supply, position=m.k, state=s)
            blocks[k:k + 3] = out
            frees.extend(supply.records[before:])
        else:
            blocks[k], blocks[k + 1] = blocks[k + 1], blocks[k]
        word = new_word
        steps.append((m, ParamState(word, tuple(blocks), tuple(frees))))
    return EvolutionTrace(transform.name, steps, supply)


# ------------------------------------------------------------------ solving
def _isolate(side: RationalFunction, f: str):
    """If side = f^e * C with e in {1, -1} and C free of f, return (e, C)."""
    num, den = side.num, side.den
    dn, dd = num.degree(f), den.degree(f)
    fp = Polynomial.var(f)
    if dn == 1 and dd <= 0:
        rest = num.divexact(fp)
        if rest is not None and rest.degree(f) <= 0:
            return 1, RationalFunction(rest, den)
    if dd == 1 and dn <= 0:
        rest = den.divexact(fp)
        if rest is not None and rest.degree(f) <= 0:
            return -1, RationalFunction(num, rest)
    return None


def _find_step(lhs, rhs, unresolved: Sequence[str]):
    """Lowest component with an isolatable free; lone frees first, then by free order."""
    for i, (l, r) in enumerate(zip(lhs, rhs)):
        if rf_equal(l, r):
            continue
        lv, rv = l.variables(), r.variables()
        cands = []
        for order, f in enumerate(unresolved):
            in_l, in_r = f in lv, f in rv
            if in_l == in_r:
                continue
            side, other = (l, r) if in_l else (r, l)
            iso = _isolate(side, f)
            if iso is None:
                continue
            e, C = iso
            if C.is_zero():
                continue
            value = other / C if e == 1 else C / other
            lone = C.is_constant() and C.constant_value() == 1
            cands.append((0 if lone else 1, order, f, value))
        if cands:
            cands.sort(key=lambda c: (c[0], c[1]))
            _, _, f, value = cands[0]
            return i, f, value.simplify()
    return None


def solve_frees(lhs: Sequence, rhs: Sequence, frees: Sequence[str]):
    """Triangular fixpoint solve of lhs[i] = rhs[i] for the free variables.

    Returns ``(assignments, log)``; assignments are fully back-substituted
    and only mention frees that stayed unresolved.  Raises SolveStuck when
    no free can be isolated and some component still disagrees.
    """
    lhs = [as_rf(x) for x in lhs]
    rhs = [as_rf(x) for x in rhs]
    unresolved = list(frees)
    assignments: Dict[str, RationalFunction] = {}
    log: List[Tuple[int, str]] = []
    while True:
        step = _find_step(lhs, rhs, unresolved)
        if step is None:
            break
        i, f, value = step
        b = {f: value}
        lhs = [substitute(x, b).simplify() for x in lhs]
        rhs = [substitute(x, b).simplify() for x in rhs]
        assignments = {k: substitute(v, b).simplify() for k, v in assignments.items()}
        assignments[f] = value
        unresolved.remove(f)
        log.append((i + 1, f))
    bad = [i for i, (l, r) in enumerate(zip(lhs, rhs)) if not rf_equal(l, r)]
    if bad:
        i = bad[0]
        raise SolveStuck(
            f"component {i + 1} still differs after solving {len(assignments)} frees: "
            f"{lhs[i].render()} != {rhs[i].render()}"
        )
    return assignments, log


def _free_names(trace: EvolutionTrace) -> List[str]:
    return [r.name for r in trace.final.frees]


def compare_traces(tu: EvolutionTrace, tl: EvolutionTrace) -> MatchReport:
    """Compare final states; solve for frees when the transform is a correspondence."""
    if tu.final.word != tl.final.word:
        raise ComparisonFailed(f"chains end at different words {tu.final.word_str()} and {tl.final.word_str()}")
    L, R = tu.final.components(), tl.final.components()
    frees = _free_names(tu) + _free_names(tl)
    if len(set(frees)) != len(frees):
        raise ValueError("the two traces share free variable names; give them supplies with different prefixes")
    names = {**tu.supply.display_names(), **tl.supply.display_names()}
    plain = [rf_equal(l, r) for l, r in zip(L, R)]
    if not frees:
        if not all(plain):
            i = plain.index(False)
            raise ComparisonFailed(f"component {i + 1}: {L[i].render()} != {R[i].render()}")
        return MatchReport(["equal"] * len(L), {}, [], [], names)
    try:
        assignments, log = solve_frees(L, R, frees)
    except SolveStuck as err:
        raise ComparisonFailed(str(err)) from None
    verdicts = ["equal" if p else "equal-after-solving" for p in plain]
    remaining = [f for f in frees if f not in assignments]
    present = set()
    for x in L + R + list(assignments.values()):
        present |= x.variables()
    unconstrained = [f for f in remaining if f not in present]
    residual = [f for f in remaining if f in present]
    return MatchReport(verdicts, assignments, unconstrained, residual, names, log)


# ------------------------------------------------------------------ certification
def _pool(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 97), rng.randint(1, 97))


def certify_random(tu: EvolutionTrace, tl: EvolutionTrace, trials: int, seed: int, retries: int = 20) -> dict:
    """Numeric witness: random inputs, solve the frees per point, compare the evaluated tuples."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = random.Random(seed)
    L, R = tu.final.components(), tl.final.components()
    frees = _free_names(tu) + _free_names(tl)
    fset = set(frees)
    inputs = sorted(set().union(*(x.variables() for x in tu.start.components())) - fset)
    passed = 0
    resampled = 0
    for trial in range(trials):
        for attempt in range(retries + 1):
            point = {v: _pool(rng) for v in inputs}
            try:
                l = [substitute(x, point).simplify() for x in L]
                r = [substitute(x, point).simplify() for x in R]
                try:
                    sol, _ = solve_frees(l, r, frees)
                except SolveStuck as err:
                    raise CertificationFailed(f"trial {trial + 1} at {point}: {err}") from None
                rest = sorted(set().union(*(x.variables() for x in l + r)) & (fset - set(sol)))
                extra = {f: _pool(rng) for f in rest}
                full = {**{k: substitute(v, extra) for k, v in sol.items()}, **extra}
                lv = [substitute(x, full) for x in l]
                rv = [substitute(x, full) for x in r]
            except (DenominatorVanishes, PoleAtPoint, ZeroDivisionError):
                resampled += 1
                continue
            for i, (x, y) in enumerate(zip(lv, rv)):
                if not rf_equal(x, y):
                    raise CertificationFailed(f"trial {trial + 1}, component {i + 1}: {x.render()} != {y.render()}")
            passed += 1
            break
        else:
            raise PoleAtPoint(f"trial {trial + 1}: no pole-free point after {retries} retries")
    return {"trials": trials, "passed": passed, "seed": seed, "resampled": resampled}


# ------------------------------------------------------------------ pair labels
def _pair(label: str) -> Tuple[int, int]:
    return int(label[0]), int(label[1])


def _check_triple(labels: Sequence[str]) -> bool:
    """(ij, ik, jk) with i < j < k, read forwards or backwards."""
    for seq in (labels, labels[::-1]):
        (i, j), (i2, k), (j2, k2) = (_pair(x) for x in seq)
        if i == i2 and j == j2 and k == k2 and i < j < k:
            return True
    return False


TRIPLE13_START = ("12", "13", "14", "23", "24", "34")
# moves in the order applied; a braid move acts on the three positions p, p+1, p+2
TRIPLE13_LHS = (Move("R", 4), Move("R", 2), Move("L", 1), Move("L", 4), Move("R", 2), Move("R", 4), Move("L", 3))
TRIPLE13_RHS = (Move("L", 3), Move("R", 1), Move("R", 3), Move("L", 2), Move("L", 5), Move("R", 3), Move("R", 1))


def run_labeled(start_blocks, labels: Sequence[str], moves: Sequence[Move], transform: Transform) -> EvolutionTrace:
    """Evolve blocks indexed by pair labels; braid windows must read (ij, ik, jk)."""
    supply = FreeSupply()
    blocks = [tuple(as_rf(x) for x in b) for b in start_blocks]
    labels = list(labels)
    steps: List[Tuple[Optional[Move], ParamState]] = [(None, ParamState(tuple(labels), tuple(blocks)))]
    for s, m in enumerate(moves, 1):
        k = m.k - 1
        if m.kind == "R":
            window = labels[k:k + 3]
            if len(window) != 3 or not _check_triple(window):
                raise MoveNotApplicable(f"{m}: labels {window} are not of the form (ij, ik, jk)")
            out, _ = apply(transform, blocks[k:k + 3], supply, position=m.k, state=s)
            blocks[k:k + 3] = out
            labels[k:k + 3] = window[::-1]
        else:
            a, b = labels[k:k + 2]
            if set(a) & set(b):
                raise MoveNotApplicable(f"{m}: labels {a} and {b} share an index")
            blocks[k], blocks[k + 1] = blocks[k + 1], blocks[k]
            labels[k], labels[k + 1] = b, a
        steps.append((m, ParamState(tuple(labels), tuple(blocks))))
    return EvolutionTrace(transform.name, steps, supply)


def run_pairlabel_protocol(transform: Optional[Transform] = None) -> dict:
    """Both sides of the pair-labeled sonnet relation for the 12/13/23 R-matrix."""
    t = transform or builtin("triple13")
    a = [var(f"a{i}") for i in range(1, 7)]
    start = [(x,) for x in a]
    lhs = run_labeled(start, TRIPLE13_START, TRIPLE13_LHS, t)
    rhs = run_labeled(start, TRIPLE13_START, TRIPLE13_RHS, t)
    report = compare_traces(lhs, rhs)
    a1, a2, a3, a4, a5, a6 = a
    D = a2 * a4 + a2 * a6 + a5 * a6
    S = a1 + a4 + a6

    def printed(E):
        return [a3 * a5 * a6 / D, D / S, a2 * a3 * a4 * a5 * S / (E * D), S, E / S, a1 * a2 * a3 / E]

    lhs_print = printed(a1 * a2 + a1 * a5 + a4 * a5)
    rhs_print = printed(a1 * a2 + a1 * a5 + a4 * a6)
    final = lhs.final.components()

    def agree(tup):
        return [k + 1 for k, (x, y) in enumerate(zip(final, tup)) if not rf_equal(x, y)]

    id1 = rf_equal(
        a1 * a2 * a4 + a1 * a2 * a6 + a1 * a5 * a6 + a1 * a4 * a5 + a4 * a4 * a5 + a4 * a5 * a6,
        (a4 + a6) * (a1 * a2 + a1 * a5 + a4 * a5),
    )
    id2 = rf_equal(
        a1 * a2 * a4 + a2 * a4 * a4 + a2 * a4 * a6 + a1 * a2 * a6 + a1 * a5 * a6 + a4 * a5 * a6,
        (a1 + a4) * D,
    )
    return {
        "lhs_trace": lhs,
        "rhs_trace": rhs,
        "match": report,
        "final": [x.render() for x in final],
        "lhs_printed_mismatch": agree(lhs_print),
        "rhs_printed_mismatch": agree(rhs_print),
        "identity_1": id1,
        "identity_2": id2,
    }


# ------------------------------------------------------------------ flacon
_FLACON_UPPER_PREFACTORS = ("1/(e'*d~)", "d~*e'/f'", "f'/(e'^2*d~)", "f'", "e'/f'", "1/e'")
_FLACON_LOWER_PREFACTORS = ("1/e1", "e1/(f1*d1)", "f1*d1/(e1*f~1)", "f1*d1", "f~1/(d1*f1)", "1/f~1")


def run_flacon() -> dict:
    """Upper path (C+) and lower path (C-) for the upper triangular two-parameter family."""
    from .words import canonical_chains_n4

    plus, minus = canonical_chains_n4()
    diag = builtin("flacon_diag")
    letters = "abcdef"
    start = [(var(c),) for c in letters]
    up = run_chain(start, plus, diag, FreeSupply("u"))
    lo = run_chain(start, minus, diag, FreeSupply("l"))
    # display names: upper frees c', e', f', d~ and the lower ones f1, e1, d1, f~1
    up_names = dict(zip([r.name for r in up.supply.records], ["c'", "e'", "f'", "d~"]))
    lo_names = dict(zip([r.name for r in lo.supply.records], ["f1", "e1", "d1", "f~1"]))
    names = {**up_names, **lo_names}
    ren = {k: var(v) for k, v in names.items()}
    L, R = up.final.components(), lo.final.components()
    frees = list(up_names) + list(lo_names)
    sol, log = solve_frees(L, R, frees)
    system = {names[k]: substitute(v, ren) for k, v in sol.items()}
    out = {
        "single_step": [b[0].render() for b in apply(diag, start[:3], free_values=[var("c'")])[0]],
        "upper": [substitute(x, ren).render() for x in L],
        "lower": [substitute(x, ren).render() for x in R],
        "system": {k: v.render() for k, v in system.items()},
        "solve_order": [(i, names[f]) for i, f in log],
    }
    # full family: blocks (a, x), (b, y), ... ; the diagonal part must reproduce the same system
    full = builtin("flacon_full")
    xs = "xyzuvw"
    fstart = [(var(c), var(x)) for c, x in zip(letters, xs)]
    fup = run_chain(fstart, plus, full, FreeSupply("u"))
    flo = run_chain(fstart, minus, full, FreeSupply("l"))
    FL, FR = fup.final.components(), flo.final.components()
    fsol, _ = solve_frees(FL[0::2], FR[0::2], list(up_names) + list(lo_names))
    same_system = set(fsol) == set(sol) and all(rf_equal(fsol[k], sol[k]) for k in sol)
    out["full_diagonal_system_agrees"] = same_system
    # prefactors, then P_i and R_i as the remaining factors of the off-diagonal entries
    cp, ep, fp, dt = (var(r.name) for r in up.supply.records)
    f1, e1, d1, ft1 = (var(r.name) for r in lo.supply.records)
    up_pre = [1 / (ep * dt), dt * ep / fp, fp / (ep * ep * dt), fp, ep / fp, 1 / ep]
    lo_pre = [1 / e1, e1 / (f1 * d1), f1 * d1 / (e1 * ft1), f1 * d1, ft1 / (d1 * f1), 1 / ft1]
    pre_ok = all(rf_equal(substitute(p, sol), q) for p, q in zip(up_pre, lo_pre))
    out["prefactors_agree_under_system"] = pre_ok
    P = [(x / p).simplify() for x, p in zip(FL[1::2], up_pre)]
    Rr = [(x / p).simplify() for x, p in zip(FR[1::2], lo_pre)]
    eqs = []
    for i, (p, r) in enumerate(zip(P, Rr), 1):
        ps, rs = substitute(p, sol).simplify(), r
        eqs.append(
            {
                "i": i,
                "P": substitute(ps, ren).render(),
                "R": substitute(rs, ren).render(),
                "identically_equal": rf_equal(ps, rs),
            }
        )
    out["equations"] = eqs
    out["prefactors"] = {"upper": list(_FLACON_UPPER_PREFACTORS), "lower": list(_FLACON_LOWER_PREFACTORS)}
    out["traces"] = (up, lo, fup, flo)
    return out
