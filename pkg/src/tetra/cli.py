"""Command-line frontend: ``tetra <subcommand> [flags]``.

Exit codes: 0 when every check passes, 1 when a check fails (a partial
result counts as a failure), 2 on usage errors.  ``--json`` switches stdout
to JSON carrying the same data as the human rendering.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .criteria import CRITERIA, DEFAULT_SEED, run_criterion
from .errors import TetraError, UnknownTransform, UsageError
from .evolve import (
    TEMPLATES,
    factorization_report,
    product_along_word,
    symbolic_blocks,
    triangularity_classes,
)
from .exactalg import substitute, var
from .transforms import (
    BlockMatrixModel,
    FreeSupply,
    Transform,
    builtin,
    builtin_names,
    check_involution,
    defining_equations,
    load_transform_file,
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
    Move,
    ReducedWord,
    canonical_chains_n4,
    chain_union,
    commutation_classes,
    enumerate_reduced_words,
    minimal_word,
)

__all__ = ["main", "Report", "emit_trace", "trace_to_json", "parse_chain_file", "build_parser"]


class Report:
    """Named check results plus free-form sections, rendered as text or JSON."""

    def __init__(self, command: str):
        self.command = command
        self.checks: List[dict] = []
        self.sections: dict = {}
        self.t0 = time.perf_counter()

    def check(self, name: str, passed: bool, literal: bool = False) -> None:
        self.checks.append({"name": name, "passed": bool(passed), "literal": literal})

    @property
    def status(self) -> str:
        if all(c["passed"] for c in self.checks):
            return "pass"
        if all(c["passed"] for c in self.checks if not c["literal"]):
            return "partial"
        return "fail"

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "status": self.status,
            "checks": self.checks,
            "sections": self.sections,
        }

    def render_text(self) -> str:
        out = _text_lines(self.sections) if self.sections else []
        for c in self.checks:
            tag = "PASS" if c["passed"] else "FAIL"
            out.append(f"[{tag}] {c['name']}" + (" (printed claim)" if c["literal"] else ""))
        out.append(f"status: {self.status} ({time.perf_counter() - self.t0:.2f} s)")
        return "\n".join(out)


def _text_lines(val) -> List[str]:
    if isinstance(val, dict):
        lines = []
        for k, v in val.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{k}:")
                lines.extend("  " + s for s in _text_lines(v))
            else:
                lines.append(f"{k}: {_inline(v)}")
        return lines
    if isinstance(val, list):
        if _flat(val):
            return [_inline(val)]
        lines = []
        for v in val:
            sub = _text_lines(v)
            lines.append("- " + sub[0])
            lines.extend("  " + s for s in sub[1:])
        return lines
    return [str(val)]


def _flat(v) -> bool:
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and all(not isinstance(y, (dict, list)) for y in x)) for x in v)


def _inline(v) -> str:
    if isinstance(v, list):
        return "(" + ", ".join(_inline(x) for x in v) + ")"
    if isinstance(v, dict):
        return "{}" if not v else ", ".join(f"{k}={_inline(x)}" for k, x in v.items())
    return str(v)


# ------------------------------------------------------------------ traces
def trace_to_json(trace: EvolutionTrace, display: bool = False) -> dict:
    """Trace as {transform, word_sequence, states:[{move, word, blocks, frees}]}.

    ``display`` reads every state right to left, as the published tables do.
    """
    names = trace.supply.display_bindings()
    states = []
    for m, st in trace.steps:
        shown = st.reversed() if display else st
        if m is not None and display:
            # positions mirror when the word is read right to left
            m = Move(m.kind, len(st.blocks) - m.k - m.width() + 2)
        states.append(
            {
                "move": str(m) if m is not None else None,
                "word": shown.word_str(),
                "blocks": [[substitute(x, names).render() for x in b] for b in shown.blocks],
                # the key name is part of the trace file format
                "frees": [{"name": r.name, "paper_name": r.display_name} for r in st.frees],
            }
        )
    return {
        "transform": trace.transform,
        "word_sequence": [s["word"] for s in states],
        "states": states,
    }


def emit_trace(trace: EvolutionTrace, path, display: bool = False) -> None:
    _write_json(trace_to_json(trace, display), path)


def _write_json(data, path) -> None:
    try:
        Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as err:
        raise TetraError(f"cannot write {path}: {err}") from None


def parse_chain_file(text: str, n: int) -> List[Chain]:
    """One chain per line: start word, then moves, e.g. ``121321 R(1) R(3) L(2)``."""
    chains = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            start = ReducedWord.parse(parts[0], n)
            chains.append(Chain(start, tuple(Move.parse(p) for p in parts[1:])))
        except (TetraError, ValueError) as err:
            raise UsageError(f"chain file line {lineno}: {err}") from None
    if len(chains) != 2:
        raise UsageError(f"a chain file holds exactly two chains, found {len(chains)}")
    if chains[0].start != chains[1].start or chains[0].end != chains[1].end:
        raise UsageError("the two chains must share start and end words")
    return chains


# ------------------------------------------------------------------ subcommands
def _resolve_transform(args) -> Transform:
    src = args.transform_file or args.transform
    if src is None:
        raise UsageError("give --transform NAME or --transform-file PATH")
    if args.transform_file or src.endswith(".tf") or Path(src).is_file():
        model = None
        if getattr(args, "model", None):
            model = BlockMatrixModel(args.model, args.embedding, args.direction)
        try:
            return load_transform_file(src, model)
        except OSError as err:
            raise UsageError(f"cannot read {src}: {err}") from None
    return builtin(src)


def cmd_words(args, rep: Report) -> None:
    words = enumerate_reduced_words(args.n)
    rep.sections["n"] = args.n
    rep.sections["reduced_word_count"] = len(words)
    if args.n == 4:
        plus, minus = canonical_chains_n4()
        union = chain_union([plus, minus])
        rep.sections["printed_count"] = PRINTED_A42_COUNT
        rep.sections["chain_union_count"] = len(union)
        if args.chains:
            rep.sections["chain_plus"] = [str(w) for w in plus.words()]
            rep.sections["chain_minus"] = [str(w) for w in minus.words()]
        rep.check("union of the two canonical chains has the printed count", len(union) == PRINTED_A42_COUNT)
    if args.classes:
        classes = commutation_classes(args.n)
        rep.sections["class_count"] = len(classes)
        rep.sections["classes"] = [[str(w) for w in c] for c in classes]
    rep.sections["words"] = [str(w) for w in words]


def _generic_verify(t: Transform, chains: Sequence[Chain], args, rep: Report) -> List[EvolutionTrace]:
    plus, minus = chains
    start = symbolic_start(len(plus.start), t.block_width)
    tu = run_chain(start, plus, t, FreeSupply("u"))
    tl = run_chain(start, minus, t, FreeSupply("l"))
    match = compare_traces(tu, tl)
    names = {**tu.supply.display_bindings(), **tl.supply.display_bindings()}
    final = [substitute(x, names).render() for x in tu.final.components()]
    rep.sections["final"] = list(reversed(final)) if args.frame == "display" else final
    rep.sections["solved"] = match.to_dict()["solved"]
    rep.sections["unconstrained"] = match.to_dict()["unconstrained"]
    rep.check(f"{t.name}: both chains reach the same final tuple", match.passed)
    if args.certify:
        cert = certify_random(tu, tl, args.certify, args.seed)
        rep.sections["certify"] = cert
        rep.check(f"certify_random {cert['passed']}/{cert['trials']} (seed {args.seed})", cert["passed"] == cert["trials"])
    return [tu, tl]


def cmd_verify(args, rep: Report) -> None:
    if args.criterion is not None:
        nums = sorted(CRITERIA) if args.criterion == "all" else [_criterion_number(args.criterion)]
        results = [run_criterion(k, args.seed) for k in nums]
        for r in results:
            for line in r.lines:
                rep.check(f"{r.number}. {line.label}", line.passed, line.literal)
        rep.sections["criteria"] = [
            {"criterion": r.number, "title": r.title, "status": r.status} for r in results
        ]
        if len(results) == 1:
            rep.sections["details"] = _jsonable(results[0].details)
        return
    t = _resolve_transform(args)
    traces: List[EvolutionTrace] = []
    if t.pair_labeled:
        prot = run_pairlabel_protocol(t)
        rep.sections["final"] = prot["final"]
        rep.sections["matches_print"] = "a4a5" if not prot["lhs_printed_mismatch"] else "neither"
        rep.sections["a4a6_print_differs_in"] = prot["rhs_printed_mismatch"]
        rep.check("both sides of the pair-labeled relation agree", prot["match"].passed)
        traces = [prot["lhs_trace"], prot["rhs_trace"]]
    elif t.name == "flacon_diag":
        fl = run_flacon()
        rep.sections["system"] = fl["system"]
        rep.sections["equations"] = fl["equations"]
        rep.check("diagonal system reproduced by the full family", fl["full_diagonal_system_agrees"])
        rep.check("prefactors agree under the system", fl["prefactors_agree_under_system"])
        rep.check("six P_i = R_i hold identically", all(e["identically_equal"] for e in fl["equations"]))
        traces = list(fl["traces"][:2])
    else:
        if args.chain_file:
            chains = parse_chain_file(Path(args.chain_file).read_text(encoding="utf-8"), args.n)
        elif args.n != 4:
            raise UsageError("the canonical chains live at n = 4; use --chain-file for other n")
        else:
            chains = list(canonical_chains_n4())
        traces = _generic_verify(t, chains, args, rep)
    if args.emit:
        _write_json([trace_to_json(tr, args.frame == "display") for tr in traces], args.emit)


def _criterion_number(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise UsageError(f"--criterion takes 1..{len(CRITERIA)} or 'all', got {text!r}") from None
    if k not in CRITERIA:
        raise UsageError(f"--criterion takes 1..{len(CRITERIA)} or 'all', got {k}")
    return k


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if hasattr(obj, "render"):
        return obj.render()
    return str(obj)


def cmd_evolve(args, rep: Report) -> None:
    if args.template not in TEMPLATES:
        raise UsageError(f"unknown template {args.template!r}; choose from {', '.join(sorted(TEMPLATES))}")
    word = ReducedWord.parse(args.word, args.n) if args.word else minimal_word(args.n)
    blocks = symbolic_blocks(len(word), TEMPLATES[args.template][0])
    prefixes = product_along_word(word, blocks, args.template)
    product = prefixes[-1]
    classes = sorted(c.value for c in triangularity_classes(product))
    rep.sections["word"] = str(word)
    rep.sections["product"] = product.render()
    rep.sections["classes"] = classes
    if word.is_longest():
        rep.check("product along a reduced word of w0 is c-upper triangular", "cUpperB" in classes)
    data = {"word": str(word), "template": args.template, "product": product.render(), "classes": classes}
    if args.prefixes:
        fact = factorization_report(word, args.template)
        rows = []
        for k, row in enumerate(fact["rows"], 1):
            rows.append(
                {
                    "k": k,
                    "matrix": prefixes[k].render(),
                    "left": list(row["left"]),
                    "right": list(row["right"]),
                    "suffix": list(row["suffix"]),
                    "w0_prefix_inverse": list(row["w0_prefix_inverse"]),
                }
            )
        rep.sections["prefixes"] = [{k: v for k, v in r.items() if k != "matrix"} for r in rows]
        rep.check("right factor equals the suffix permutation", all(r["right"] == r["suffix"] for r in rows))
        rep.check("left factor equals w0 w_k^-1", all(r["left"] == r["w0_prefix_inverse"] for r in rows))
        data["prefixes"] = rows
    if args.emit:
        _write_json(data, args.emit)


def cmd_wronskian(args, rep: Report) -> None:
    from .wronskian import (
        a_on_collection,
        a_on_wrtuple,
        ode_residual_ok,
        solve_evolution_ode,
        standard_collection,
        wr_map,
        wronskian_coordinates,
    )

    if args.coordinates:
        word = ReducedWord.parse(args.word, args.r + 1)
        rows = wronskian_coordinates(word)
        rep.sections["coordinates"] = [{"k": r["k"], "w": r["w"], "constant": r["constant"]} for r in rows]
        rep.check("every w_k has a nonzero constant term", True)
        return
    r1 = args.r + 1
    if r1 < 2:
        raise UsageError("--r must be at least 1")
    text = args.word.replace(",", " ")
    parts = text.split() if " " in text.strip() else list(text.strip())
    try:
        letters = [int(c) for c in parts]
    except ValueError:
        raise UsageError(f"cannot read evolution indices from {args.word!r}") from None
    if any(not 1 <= i <= args.r for i in letters):
        raise UsageError(f"evolution indices must lie in 1..{args.r}")
    order = args.order or 2 * r1
    rng = random.Random(args.seed)
    params = [var(f"a{k}") if args.symbolic_a else Fraction(rng.randint(1, 97), rng.randint(1, 97)) for k in range(1, len(letters) + 1)]
    u = standard_collection(r1)
    f = wr_map(u, order)
    g = f
    ok_comm = ok_ode = True
    # A_{w1}(a1) ... A_{wm}(am) u: the rightmost operator acts first
    for i, a in reversed(list(zip(letters, params))):
        ok_ode &= ode_residual_ok(g, i, solve_evolution_ode(g, i))
        u = a_on_collection(u, i, a)
        g = a_on_wrtuple(g, i, a, convention=args.convention)
    direct = wr_map(u, order)
    ok_comm = direct.f == g.f
    rep.sections["parameters"] = [str(p) if not hasattr(p, "render") else p.render() for p in params]
    rep.sections["u"] = u.render()
    rep.sections["Wr(u)"] = direct.render()
    rep.sections["operators on Wr"] = g.render()
    rep.check("ODE solved at every step", ok_ode)
    rep.check(f"Wr(A u) = A Wr(u) through order {order} ({args.convention} convention)", ok_comm, literal=args.convention == "printed")


def cmd_transform_check(args, rep: Report) -> None:
    t = _resolve_transform(args)
    rep.sections["transform"] = t.name
    rep.sections["inputs"] = list(t.input_names)
    rep.sections["frees"] = list(t.free_names)
    rep.sections["outputs"] = [o.render() for o in t.outputs_in_names()]
    if t.model is not None:
        try:
            verify_defining_identity(t)
            rep.check(f"defining matrix identity ({t.model.template}, {t.model.embedding}, {t.model.direction})", True)
        except TetraError as err:
            rep.check(f"defining matrix identity: {err}", False)
        rep.sections["equations"] = [f"{l.render()} = {r.render()}" for l, r in defining_equations(t)]
    else:
        rep.sections["model"] = "none attached (pass --model to check an identity)"
    if t.free_count == 0 and t.inverse_name:
        inv = builtin(t.inverse_name)
        if inv.name == t.name:
            try:
                check_involution(t)
                rep.check("R^2 = Id", True)
            except TetraError as err:
                rep.check(f"R^2 = Id: {err}", False)


# ------------------------------------------------------------------ parser
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"seed for every random draw (default {DEFAULT_SEED})")
    common.add_argument("--emit", metavar="PATH", help="write the full trace or matrices as JSON")

    p = _Parser(prog="tetra", description="Exact checks of tetrahedron-type identities.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    w = sub.add_parser("words", parents=[common], help="reduced words of w0(n), chains and classes")
    w.add_argument("--n", type=int, default=4)
    w.add_argument("--classes", action="store_true", help="list commutation classes")
    w.add_argument("--chains", action="store_true", help="list the words along the two canonical chains (n = 4)")

    transform_flags = _Parser(add_help=False)
    transform_flags.add_argument("--transform", metavar="NAME|FILE", help=f"builtin: {', '.join(builtin_names())}")
    transform_flags.add_argument("--transform-file", metavar="PATH")
    transform_flags.add_argument("--model", choices=sorted(TEMPLATES), help="matrix template for a user .tf file")
    transform_flags.add_argument("--embedding", choices=["adjacent", "pair"], default="adjacent")
    transform_flags.add_argument("--direction", choices=["up", "down"], default="up")

    v = sub.add_parser("verify", parents=[common, transform_flags], help="run a transform along two chains, or an acceptance criterion")
    v.add_argument("--n", type=int, default=4)
    v.add_argument("--chains", choices=["canonical"], default="canonical")
    v.add_argument("--chain-file", metavar="PATH")
    v.add_argument("--certify", type=int, default=0, metavar="N", help="random exact certification trials")
    v.add_argument("--frame", choices=["internal", "display"], default="internal", help="display reads states right to left")
    v.add_argument("--criterion", metavar="K|all", help="run acceptance criterion K (1..16) or all of them")

    e = sub.add_parser("evolve", parents=[common], help="products of elementary matrices along a word")
    e.add_argument("--n", type=int, default=4)
    e.add_argument("--word", help="default: the minimal word s1 s2 s1 s3 s2 s1 ...")
    e.add_argument("--template", default="abc")
    e.add_argument("--prefixes", action="store_true", help="factorization permutations of every prefix")

    r = sub.add_parser("wronskian", parents=[common], help="Wronskian evolutions of the standard collection")
    r.add_argument("--r", type=int, default=2, help="the collection has r+1 polynomials")
    r.add_argument("--word", default="", help="evolution indices, e.g. 12 for A1(a1)A2(a2)")
    r.add_argument("--order", type=int, default=0, help="truncation order (default 2(r+1))")
    r.add_argument("--symbolic-a", action="store_true", help="symbolic parameters instead of seeded rationals")
    r.add_argument("--convention", choices=["wronskian", "printed"], default="wronskian",
                   help="printed: the operator also scales f_(i+1) by a")
    r.add_argument("--coordinates", action="store_true", help="w_k along a reduced word of w0(r+1)")

    sub.add_parser("transform-check", parents=[common, transform_flags], help="defining identity and involution of one transform")
    return p


_COMMANDS = {
    "words": cmd_words,
    "verify": cmd_verify,
    "evolve": cmd_evolve,
    "wronskian": cmd_wronskian,
    "transform-check": cmd_transform_check,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        print(str(err).rstrip(), file=sys.stderr)
        return 2
    rep = Report(args.command)
    try:
        _COMMANDS[args.command](args, rep)
    except (UsageError, UnknownTransform) as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 2
    except TetraError as err:
        rep.check(f"{type(err).__name__}: {err}", False)
    except ValueError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(_jsonable(rep.to_dict()), indent=2, sort_keys=True))
    else:
        print(rep.render_text())
    return 0 if rep.status == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
