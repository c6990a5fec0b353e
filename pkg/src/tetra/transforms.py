"""Built-in R-transforms and R-correspondences as parametrized rational maps.

A transform of block width w replaces three parameter blocks (3w values)
by three new blocks.  Correspondences carry free parameters; each call to
``apply`` draws fresh variables for them from a ``FreeSupply`` so that
composed maps never reuse a free symbol.

Outputs are stored in formal symbols ``x1..x3w`` (inputs) and ``t1..tf``
(frees).  The defining matrix identity of each builtin is attached as a
``BlockMatrixModel``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ArityMismatch, IdentityFails, UnknownTransform
from .evolve import TEMPLATES, MatrixRF, pair_embed, phi_embed, template_matrix
from .exactalg import RationalFunction, as_rf, rf_equal, substitute, var
from .formulas import TransformFile, load_builtin_file, parse_transform_file

__all__ = [
    "BlockMatrixModel",
    "Transform",
    "FreeSupply",
    "FreeRecord",
    "STATE_MARKS",
    "builtin",
    "builtin_names",
    "transform_from_file",
    "load_transform_file",
    "apply",
    "verify_defining_identity",
    "defining_equations",
    "compose",
    "check_inverse_pair",
    "check_involution",
    "quasiinverse_report",
    "symbol_count",
    "flacon_specializations",
]

# superscripts of the states along a chain: a_1, a_1', a_1'', ..., a_1^{vii}
STATE_MARKS = ["", "p", "pp", "ppp", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii", "xiii", "xiv"]


def state_mark(s: int) -> str:
    if 0 <= s < len(STATE_MARKS):
        return STATE_MARKS[s]
    return f"^{s}"


@dataclass(frozen=True)
class BlockMatrixModel:
    """Matrix identity that a transform solves.

    ``embedding`` is "adjacent" (blocks on letters of a braid window) or
    "pair" (blocks on the pairs 12, 13, 23).  ``direction`` "up" means the
    inputs sit on the window (1,2,1) and the outputs on (2,1,2); "down" is
    the reverse.
    """

    template: str
    embedding: str = "adjacent"
    direction: str = "up"

    def __post_init__(self):
        if self.template not in TEMPLATES:
            raise KeyError(f"unknown template {self.template!r}")
        if self.embedding not in ("adjacent", "pair"):
            raise ValueError("embedding must be 'adjacent' or 'pair'")
        if self.direction not in ("up", "down"):
            raise ValueError("direction must be 'up' or 'down'")

    @property
    def width(self) -> int:
        return TEMPLATES[self.template][0]

    def product(self, blocks: Sequence[Sequence], side: str) -> MatrixRF:
        """side "in" uses the input window, "out" the output window."""
        if self.embedding == "pair":
            places = [(1, 2), (1, 3), (2, 3)] if side == "in" else [(2, 3), (1, 3), (1, 2)]
            mats = [pair_embed(template_matrix(self.template, b), p, q, 3) for b, (p, q) in zip(blocks, places)]
        else:
            up = (side == "in") == (self.direction == "up")
            letters = (1, 2, 1) if up else (2, 1, 2)
            mats = [phi_embed(template_matrix(self.template, b), i, 3) for b, i in zip(blocks, letters)]
        return mats[0] * mats[1] * mats[2]


@dataclass(frozen=True)
class FreeRecord:
    name: str
    display_name: str


class FreeSupply:
    """Monotone supply of fresh variables t1, t2, ... with display-name provenance."""

    def __init__(self, prefix: str = "t", start: int = 1):
        self.prefix = prefix
        self._next = start
        self.records: List[FreeRecord] = []

    def fresh(self, display_name: str = "") -> RationalFunction:
        name = f"{self.prefix}{self._next}"
        self._next += 1
        self.records.append(FreeRecord(name, display_name or name))
        return var(name)

    def display_names(self) -> Dict[str, str]:
        return {r.name: r.display_name for r in self.records}

    def display_bindings(self) -> Dict[str, RationalFunction]:
        """Rename supply variables to their display names (a3pp, b1vi, ...), for printing."""
        return {r.name: var(r.display_name) for r in self.records}


_FREE_PATTERN = re.compile(r"^([A-Za-z]+?)(\d*)(p*)$")


@dataclass(frozen=True)
class Transform:
    name: str
    block_width: int
    input_names: Tuple[str, ...]
    free_names: Tuple[str, ...]
    outputs: Tuple[RationalFunction, ...]
    model: Optional[BlockMatrixModel] = None
    inverse_name: Optional[str] = None
    pair_labeled: bool = False
    source: Optional[TransformFile] = field(default=None, compare=False, repr=False)

    @property
    def free_count(self) -> int:
        return len(self.free_names)

    @property
    def formal_inputs(self) -> Tuple[str, ...]:
        return tuple(f"x{i}" for i in range(1, len(self.input_names) + 1))

    @property
    def formal_frees(self) -> Tuple[str, ...]:
        return tuple(f"t{i}" for i in range(1, self.free_count + 1))

    def outputs_in_names(self) -> Tuple[RationalFunction, ...]:
        """Outputs written in the declared input and free names."""
        back = {x: var(n) for x, n in zip(self.formal_inputs, self.input_names)}
        back.update({t: var(n) for t, n in zip(self.formal_frees, self.free_names)})
        return tuple(substitute(o, back).simplify() for o in self.outputs)

    def free_label(self, index: int, position: int = 1, state: int = 1) -> str:
        """Display name of free ``index`` when the move acts at ``position`` and produces state ``state``.

        A declared free ``a3p`` is the first-primed a_3 of the window; at
        position k it becomes a_{k+2} with the superscript of ``state``.
        """
        m = _FREE_PATTERN.match(self.free_names[index])
        if not m or not m.group(2):
            return self.free_names[index] + state_mark(state)
        letter, j = m.group(1), int(m.group(2))
        return f"{letter}{position + j - 1}{state_mark(state)}"


def transform_from_file(
    tf: TransformFile,
    model: Optional[BlockMatrixModel] = None,
    inverse_name: Optional[str] = None,
    pair_labeled: bool = False,
) -> Transform:
    if tf.block_count != 3:
        raise ArityMismatch(f"a transform acts on 3 blocks, {tf.name!r} declares {tf.block_count}")
    if model is not None and model.width != tf.block_width:
        raise ArityMismatch(f"model width {model.width} differs from block width {tf.block_width}")
    ren = {n: var(f"x{i}") for i, n in enumerate(tf.input_names, 1)}
    ren.update({n: var(f"t{i}") for i, n in enumerate(tf.free_params, 1)})
    outs = tuple(substitute(o, ren).simplify() for o in tf.output_rfs())
    return Transform(
        tf.name,
        tf.block_width,
        tuple(tf.input_names),
        tuple(tf.free_params),
        outs,
        model,
        inverse_name,
        pair_labeled,
        tf,
    )


# name -> (model, inverse for down windows, pair-labeled)
_REGISTRY: Dict[str, Tuple[BlockMatrixModel, Optional[str], bool]] = {
    "lusztig": (BlockMatrixModel("unip"), "lusztig", False),
    "sergeev_alpha": (BlockMatrixModel("neg"), "sergeev_alpha", False),
    "very_small": (BlockMatrixModel("a"), "very_small_inverse", False),
    "very_small_inverse": (BlockMatrixModel("a", direction="down"), "very_small", False),
    "bz": (BlockMatrixModel("bz"), "bz", False),
    "triple13": (BlockMatrixModel("a", embedding="pair"), "triple13", True),
    "smaller2": (BlockMatrixModel("ab"), None, False),
    "smaller2_quasiinverse": (BlockMatrixModel("ab", direction="down"), None, False),
    "full3": (BlockMatrixModel("abc"), None, False),
    "flacon_diag": (BlockMatrixModel("diag"), None, False),
    "flacon_full": (BlockMatrixModel("flacon"), None, False),
}

_CACHE: Dict[str, Transform] = {}


def builtin_names() -> List[str]:
    return sorted(_REGISTRY)


def builtin(name: str) -> Transform:
    if name not in _REGISTRY:
        raise UnknownTransform(f"unknown transform {name!r}; builtins: {', '.join(builtin_names())}")
    if name not in _CACHE:
        model, inv, pair = _REGISTRY[name]
        _CACHE[name] = transform_from_file(load_builtin_file(name), model, inv, pair)
    return _CACHE[name]


def load_transform_file(path, model: Optional[BlockMatrixModel] = None) -> Transform:
    """Read a user ``.tf`` file; a model can be attached for verify_defining_identity."""
    src = Path(path).read_text(encoding="utf-8")
    return transform_from_file(parse_transform_file(src), model)


# ------------------------------------------------------------------ applying
def _flatten(blocks: Sequence[Sequence], width: int) -> List[RationalFunction]:
    if len(blocks) != 3 or any(len(b) != width for b in blocks):
        raise ArityMismatch(f"expected 3 blocks of width {width}, got {[len(b) for b in blocks]}")
    return [as_rf(x) for b in blocks for x in b]


def apply(
    t: Transform,
    blocks: Sequence[Sequence],
    fresh: Optional[FreeSupply] = None,
    position: int = 1,
    state: int = 1,
    free_values: Optional[Sequence] = None,
):
    """Apply ``t`` to three blocks.

    Returns ``(new_blocks, introduced)`` where ``introduced`` lists the
    fresh free variables.  ``free_values`` overrides the fresh draws.
    """
    flat = _flatten(blocks, t.block_width)
    bindings: Dict[str, RationalFunction] = dict(zip(t.formal_inputs, flat))
    introduced: List[RationalFunction] = []
    if free_values is not None:
        if len(free_values) != t.free_count:
            raise ArityMismatch(f"{t.name} takes {t.free_count} free values")
        bindings.update({f: as_rf(v) for f, v in zip(t.formal_frees, free_values)})
    elif t.free_count:
        supply = fresh if fresh is not None else FreeSupply()
        for i, f in enumerate(t.formal_frees):
            v = supply.fresh(t.free_label(i, position, state))
            bindings[f] = v
            introduced.append(v)
    out = [substitute(o, bindings).simplify() for o in t.outputs]
    w = t.block_width
    return [tuple(out[i * w:(i + 1) * w]) for i in range(3)], introduced


# ------------------------------------------------------------------ checking
def _symbolic_inputs(t: Transform, suffix: str = "") -> List[Tuple[RationalFunction, ...]]:
    names = [n + suffix for n in t.input_names]
    w = t.block_width
    return [tuple(var(n) for n in names[i * w:(i + 1) * w]) for i in range(3)]


def verify_defining_identity(t: Transform) -> dict:
    """Multiply out both sides of the model identity with the outputs substituted."""
    if t.model is None:
        raise IdentityFails(f"{t.name} has no matrix model")
    ins = _symbolic_inputs(t)
    frees = [var(n) for n in t.free_names]
    outs, _ = apply(t, ins, free_values=frees)
    lhs = t.model.product(ins, "in")
    rhs = t.model.product(outs, "out")
    diff = lhs.first_difference(rhs)
    if diff is not None:
        (i, j), l, r = diff
        raise IdentityFails(f"{t.name}: entry ({i},{j}) differs: {l.render()} != {r.render()}")
    return {"transform": t.name, "model": t.model.template, "lhs": lhs.render(), "rhs": rhs.render(), "entries": 9}


def defining_equations(t: Transform) -> List[Tuple[RationalFunction, RationalFunction]]:
    """The nontrivial entry equations lhs(inputs) = rhs(primed unknowns) of the model identity."""
    if t.model is None:
        raise IdentityFails(f"{t.name} has no matrix model")
    lhs = t.model.product(_symbolic_inputs(t), "in")
    rhs = t.model.product(_symbolic_inputs(t, "'"), "out")
    eqs = []
    for i in range(3):
        for j in range(3):
            l, r = lhs[i, j], rhs[i, j]
            if not rf_equal(l, r):
                eqs.append((l, r))
    return eqs


def compose(ts: Sequence[Transform], blocks, fresh: Optional[FreeSupply] = None):
    """Apply ts[0], then ts[1], ... to the same three blocks."""
    fresh = fresh if fresh is not None else FreeSupply()
    cur = blocks
    introduced = []
    for s, t in enumerate(ts, 1):
        cur, new = apply(t, cur, fresh, state=s)
        introduced += new
    return cur, introduced


def check_inverse_pair(t: Transform, u: Transform) -> dict:
    """u after t is the identity on symbolic inputs (both must be maps)."""
    if t.free_count or u.free_count:
        raise IdentityFails("inverse pairs are only defined for maps without frees")
    ins = _symbolic_inputs(t)
    out, _ = compose([t, u], ins)
    for k, (x, y) in enumerate(zip([v for b in out for v in b], [v for b in ins for v in b]), 1):
        if not rf_equal(x, y):
            raise IdentityFails(f"{u.name} o {t.name}: component {k} is {x.render()}, expected {y.render()}")
    return {"forward": t.name, "inverse": u.name, "identity": True}


def check_involution(t: Transform) -> dict:
    rep = check_inverse_pair(t, t)
    rep["involution"] = True
    return rep


def quasiinverse_report() -> dict:
    """The composite of smaller2 then smaller2_quasiinverse, and its two specializations.

    The composite is compared with the printed tuple component by
    component; disagreements are reported, not raised.  Both the computed
    and the printed tuple must reduce to the identity under a1'' = a1,
    b1 = b3.
    """
    R, S = builtin("smaller2"), builtin("smaller2_quasiinverse")
    ins = _symbolic_inputs(R)
    a1, b1, a2, b2, a3, b3 = [v for b in ins for v in b]
    supply = FreeSupply()
    mid, f1 = apply(R, ins, supply, state=1)
    out, f2 = apply(S, mid, supply, state=2)
    flat = [v for b in out for v in b]
    a1pp = f2[0]
    expected = [a1pp, a1 * b1 / a1pp, a2 * b1 / b3, a1pp * b2 / a1, a1 * a3 / a1pp, a1 * b3 / a1pp]
    shown = supply.display_bindings()
    mismatches = [
        {"component": k, "computed": substitute(x, shown).render(), "printed": substitute(y, shown).render()}
        for k, (x, y) in enumerate(zip(flat, expected), 1)
        if not rf_equal(x, y)
    ]
    cancelled = f1[0].variables().isdisjoint(set().union(*(v.variables() for v in flat)))
    if not cancelled:
        raise IdentityFails("the intermediate free survives in SR")
    special = {supply.records[1].name: a1, "b1": b3}
    target = [substitute(v, {"b1": b3}) for v in (a1, b1, a2, b2, a3, b3)]
    for label, tup in (("computed", flat), ("printed", expected)):
        for k, (x, y) in enumerate(zip([substitute(v, special) for v in tup], target), 1):
            if not rf_equal(x, y):
                raise IdentityFails(f"specialized {label} SR component {k}: {x.render()} != {y.render()}")
    # b -> 1: b_i = 1 and a1' = a3 keeps b' = 1, leaving very_small_inverse
    sb, _ = apply(S, [(a1, 1), (a2, 1), (a3, 1)], free_values=[a3])
    sflat = [v for b in sb for v in b]
    vsi, _ = apply(builtin("very_small_inverse"), [(a1,), (a2,), (a3,)])
    if not all(rf_equal(sflat[k], 1) for k in (1, 3, 5)):
        raise IdentityFails("b -> 1 specialization does not keep b' = 1")
    if not all(rf_equal(sflat[2 * k], vsi[k][0]) for k in range(3)):
        raise IdentityFails("b -> 1 specialization differs from very_small_inverse")
    names = {r.name: r.display_name for r in supply.records}
    return {
        "composite": [substitute(v, shown).render() for v in flat],
        "printed": [substitute(v, shown).render() for v in expected],
        "matches_printed": not mismatches,
        "mismatches": mismatches,
        "intermediate_free_cancels": True,
        "specialization_identity": True,
        "b_to_1_equals_very_small_inverse": True,
        "b_to_1_free_choice": "a1' = a3",
        "frees": names,
    }


def symbol_count(exprs: Sequence[RationalFunction]) -> int:
    return len(set().union(*(as_rf(e).variables() for e in exprs)))


def flacon_specializations() -> dict:
    """Lusztig and BZ-type specializations of the two-parametric upper triangular correspondence."""
    F = builtin("flacon_full")
    a, b, c, x, y, z = (var(n) for n in "abcxyz")
    report = {}
    # a = b = c = c' = 1
    out, _ = apply(F, [(1, x), (1, y), (1, z)], free_values=[1])
    flat = [v for blk in out for v in blk]
    lus, _ = apply(builtin("lusztig"), [(x,), (y,), (z,)])
    diag_ok = all(rf_equal(flat[k], 1) for k in (0, 2, 4))
    x_ok = all(rf_equal(flat[2 * k + 1], lus[k][0]) for k in range(3))
    report["lusztig"] = {"outputs": [v.render() for v in flat], "matches": diag_ok and x_ok}
    # x = y = z = 1, c' = a + b/c
    cp = a + b / c
    out, _ = apply(F, [(a, 1), (b, 1), (c, 1)], free_values=[cp])
    flat = [v for blk in out for v in blk]
    diag = [flat[0], flat[2], flat[4]]
    bz, _ = apply(builtin("bz"), [(c,), (b,), (a,)])
    bz_rev = [bz[2][0], bz[1][0], bz[0][0]]
    printed = [b * c / (a + b * c), a * c, a + b / c]
    report["sergeev_beta"] = {
        "outputs": [v.render() for v in flat],
        "diagonal_equals_reversed_bz": all(rf_equal(p, q) for p, q in zip(diag, bz_rev)),
        "diagonal_equals_printed": all(rf_equal(p, q) for p, q in zip(diag, printed)),
        "printed_with_ac_plus_b": all(
            rf_equal(p, q) for p, q in zip(diag, [b * c / (a * c + b), a * c, a + b / c])
        ),
        "off_diagonal_all_one": all(rf_equal(flat[k], 1) for k in (1, 3, 5)),
    }
    return report
