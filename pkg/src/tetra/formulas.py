"""Expression language and ``.tf`` transform files.

Grammar, whitespace insignificant::

    expr     := term (('+'|'-') term)*
    term     := factor (('*'|'/') factor)*
    factor   := '-' factor | atom ('^' nat)?
    atom     := rational | ident | '(' expr ')'
    ident    := letter (letter|digit|'_')*
    rational := nat ('/' nat)?

A ``.tf`` file is line oriented::

    name: lusztig
    width: 1
    blocks: 3
    inputs: a, b, c
    free:
    out[1] = b*c/(a+c)
    out[2] = a+c
    out[3] = a*b/(a+c)

Blank lines and lines starting with ``#`` are skipped.  Output indices are
1-based.  Primed symbols are spelled with suffixes: ``a1p`` for a1', ``a3pp``
for a3'', ``a3v`` and ``a1vi`` for the roman-numeral primes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Mapping, Optional, Tuple

from .errors import ArityMismatch, FormulaSyntaxError, UnknownSymbol
from .exactalg import RationalFunction, as_rf, const, var

__all__ = [
    "Expr",
    "TransformFile",
    "parse_expr",
    "render",
    "ast_to_rf",
    "parse_rf",
    "parse_transform_file",
    "load_builtin_file",
    "builtin_file_names",
    "FormulaSyntaxError",
]


@dataclass(frozen=True)
class Expr:
    kind: str  # const, var, add, sub, mul, div, neg, pow
    value: object = None  # Fraction for const, name for var, exponent for pow
    children: Tuple["Expr", ...] = ()

    def __repr__(self):
        if self.kind == "const":
            return f"const({self.value})"
        if self.kind == "var":
            return f"var({self.value})"
        if self.kind == "pow":
            return f"pow({self.children[0]!r}, {self.value})"
        return f"{self.kind}({', '.join(map(repr, self.children))})"


def Const(v) -> Expr:
    return Expr("const", Fraction(v))


def Var(name: str) -> Expr:
    return Expr("var", name)


# ------------------------------------------------------------------ lexer
_PUNCT = {"+", "-", "*", "/", "^", "(", ")"}


def _tokenize(src: str):
    toks = []
    i = 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
        elif ch in _PUNCT:
            toks.append((ch, ch, i))
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(("nat", int(src[i:j]), i))
            i = j
        elif ch.isascii() and ch.isalpha():
            j = i + 1
            while j < n and src[j].isascii() and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(("ident", src[i:j], i))
            i = j
        else:
            raise FormulaSyntaxError(f"unexpected character {ch!r}", _byte(src, i), _ATOM_START)
    toks.append(("eof", None, n))
    return toks


def _byte(src: str, i: int) -> int:
    return len(src[:i].encode("utf-8"))


_ATOM_START = frozenset({"nat", "ident", "(", "-"})


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.pos = 0

    def peek(self, k: int = 0):
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def take(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def fail(self, expected, tok=None):
        tok = tok or self.peek()
        what = "end of input" if tok[0] == "eof" else repr(self.src[tok[2]:tok[2] + 1] if tok[0] in _PUNCT else tok[1])
        raise FormulaSyntaxError(f"unexpected {what}", _byte(self.src, tok[2]), frozenset(expected))

    def parse(self) -> Expr:
        e = self.expr()
        if self.peek()[0] != "eof":
            self.fail({"+", "-", "*", "/", "eof"})
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            right = self.term()
            left = Expr("add" if op == "+" else "sub", None, (left, right))
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            right = self.factor()
            left = Expr("mul" if op == "*" else "div", None, (left, right))
        return left

    def factor(self) -> Expr:
        if self.peek()[0] == "-":
            self.take()
            return Expr("neg", None, (self.factor(),))
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "nat":
                self.fail({"nat"})
            self.take()
            return Expr("pow", tok[1], (base,))
        return base

    def atom(self) -> Expr:
        tok = self.peek()
        if tok[0] == "nat":
            self.take()
            if self.peek()[0] == "/" and self.peek(1)[0] == "nat":
                self.take()
                d = self.take()[1]
                if d == 0:
                    raise FormulaSyntaxError("zero denominator in rational literal", _byte(self.src, self.toks[self.pos - 1][2]), {"nat"})
                return Const(Fraction(tok[1], d))
            return Const(tok[1])
        if tok[0] == "ident":
            self.take()
            return Var(tok[1])
        if tok[0] == "(":
            self.take()
            e = self.expr()
            if self.peek()[0] != ")":
                self.fail({")", "+", "-", "*", "/"})
            self.take()
            return e
        self.fail({"nat", "ident", "("})


def parse_expr(src: str) -> Expr:
    """Parse an expression string into an :class:`Expr` tree."""
    return _Parser(src).parse()


# ------------------------------------------------------------------ printer
_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4, "const": 5, "var": 5}


def _is_int_const(e: Expr) -> bool:
    return e.kind == "const" and e.value.denominator == 1


def render(e: Expr) -> str:
    """Inverse of :func:`parse_expr` up to whitespace and redundant parentheses."""
    k = e.kind
    if k == "const":
        v = e.value
        if v < 0:
            return f"(-{_const_str(-v)})"
        return _const_str(v)
    if k == "var":
        return e.value
    if k == "neg":
        (c,) = e.children
        inner = render(c)
        if _PREC[c.kind] < 3 or _is_int_const(c):
            inner = f"({inner})"
        return "-" + inner
    if k == "pow":
        (c,) = e.children
        inner = render(c)
        if c.kind not in ("var", "const") or (c.kind == "const" and c.value < 0):
            inner = f"({inner})"
        return f"{inner}^{e.value}"
    left, right = e.children
    ls, rs = render(left), render(right)
    if k in ("add", "sub"):
        if _PREC[right.kind] <= 1:
            rs = f"({rs})"
        return f"{ls} {'+' if k == 'add' else '-'} {rs}"
    # mul / div
    if _PREC[left.kind] <= 1:
        ls = f"({ls})"
    if _PREC[right.kind] <= 2 or right.kind == "const":
        # a bare number after * or / would glue to a neighbouring /nat as a rational literal
        rs = f"({rs})"
    return f"{ls}{'*' if k == 'mul' else '/'}{rs}"


def _const_str(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


# ------------------------------------------------------------------ evaluation
def ast_to_rf(ast: Expr, universe: Optional[Mapping[str, object]] = None) -> RationalFunction:
    """Evaluate into a rational function.

    ``universe`` maps names to values (a name, a number or a rational
    function).  When it is given, any other name raises UnknownSymbol;
    when omitted every identifier becomes a variable of the same name.
    """
    k = ast.kind
    if k == "const":
        return const(ast.value)
    if k == "var":
        if universe is None:
            return var(ast.value)
        if ast.value not in universe:
            raise UnknownSymbol(ast.value)
        return as_rf(universe[ast.value])
    if k == "neg":
        return -ast_to_rf(ast.children[0], universe)
    if k == "pow":
        return ast_to_rf(ast.children[0], universe) ** ast.value
    a = ast_to_rf(ast.children[0], universe)
    b = ast_to_rf(ast.children[1], universe)
    if k == "add":
        return a + b
    if k == "sub":
        return a - b
    if k == "mul":
        return a * b
    return (a / b).simplify()


def parse_rf(src: str, universe: Optional[Mapping[str, object]] = None) -> RationalFunction:
    return ast_to_rf(parse_expr(src), universe)


def free_names(ast: Expr) -> set:
    if ast.kind == "var":
        return {ast.value}
    out = set()
    for c in ast.children:
        out |= free_names(c)
    return out


# ------------------------------------------------------------------ .tf files
@dataclass
class TransformFile:
    name: str
    block_width: int
    block_count: int
    input_names: List[str]
    free_params: List[str]
    outputs: List[Expr]
    display_names: Dict[str, str] = field(default_factory=dict)

    def output_rfs(self) -> List[RationalFunction]:
        return [ast_to_rf(e) for e in self.outputs]


_KEYS = ("name", "width", "blocks", "inputs", "free")


def parse_transform_file(src: str) -> TransformFile:
    """Parse a ``.tf`` source string."""
    header: Dict[str, str] = {}
    outs: Dict[int, Expr] = {}
    offset = 0
    for line in src.splitlines(keepends=True):
        base = offset
        offset += len(line.encode("utf-8"))
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        lead = len(line.encode("utf-8")) - len(line.lstrip().encode("utf-8"))
        if text.startswith("out["):
            close = text.find("]")
            eq = text.find("=", close)
            if close < 0 or eq < 0:
                raise FormulaSyntaxError("malformed output line", base + lead, {"out[i] = expr"})
            try:
                idx = int(text[4:close])
            except ValueError:
                raise FormulaSyntaxError("output index must be a positive integer", base + lead + 4, {"nat"}) from None
            if idx < 1 or idx in outs:
                raise FormulaSyntaxError(f"bad or repeated output index {idx}", base + lead + 4, {"nat"})
            body = text[eq + 1:]
            try:
                outs[idx] = parse_expr(body)
            except FormulaSyntaxError as err:
                shift = base + lead + len(text[: eq + 1].encode("utf-8"))
                raise FormulaSyntaxError(str(err).split(" at offset")[0], shift + err.offset, err.expected) from None
            continue
        key, sep, value = text.partition(":")
        key = key.strip()
        if not sep or key not in _KEYS:
            raise FormulaSyntaxError(f"unknown header line {text!r}", base + lead, set(_KEYS) | {"out[i] = expr"})
        header[key] = value.strip()
    for key in _KEYS:
        if key not in header:
            raise FormulaSyntaxError(f"missing header {key!r}", offset, {key + ":"})
    try:
        width = int(header["width"])
        blocks = int(header["blocks"])
    except ValueError:
        raise FormulaSyntaxError("width and blocks must be integers", 0, {"nat"}) from None
    inputs = [s.strip() for s in header["inputs"].split(",") if s.strip()]
    frees = [s.strip() for s in header["free"].split(",") if s.strip()]
    if width not in (1, 2, 3):
        raise ArityMismatch(f"block width must be 1, 2 or 3, got {width}")
    if len(inputs) != width * blocks:
        raise ArityMismatch(f"{len(inputs)} inputs declared for {blocks} blocks of width {width}")
    if len(set(inputs) | set(frees)) != len(inputs) + len(frees):
        raise ArityMismatch("input and free names must be distinct")
    if sorted(outs) != list(range(1, len(outs) + 1)):
        raise ArityMismatch(f"output indices must be 1..k without gaps, got {sorted(outs)}")
    if len(outs) != len(inputs):
        raise ArityMismatch(f"{len(outs)} outputs for {len(inputs)} inputs")
    declared = set(inputs) | set(frees)
    outputs = [outs[i] for i in range(1, len(outs) + 1)]
    for i, e in enumerate(outputs, 1):
        unknown = free_names(e) - declared
        if unknown:
            raise UnknownSymbol(f"out[{i}] uses undeclared {sorted(unknown)}")
    return TransformFile(header["name"], width, blocks, inputs, frees, outputs)


def builtin_file_names() -> List[str]:
    root = resources.files("tetra") / "data"
    return sorted(p.name[:-3] for p in root.iterdir() if p.name.endswith(".tf"))


def load_builtin_file(name: str) -> TransformFile:
    path = resources.files("tetra") / "data" / f"{name}.tf"
    if not path.is_file():
        raise FileNotFoundError(name)
    return parse_transform_file(path.read_text(encoding="utf-8"))
