"""Constant-free generalized polynomials: tree, parser and printer.

Grammar (whitespace-insensitive, ``*`` binds tighter than ``+``)::

    expr   := term ('+' term)*
    term   := factor ('*' factor)*
    factor := NUMBER | CONST | VAR | '(' expr ')' | '[' expr ']'
    CONST  := 'pi' | 'e' | 'sqrt(' INT ')' | 'root(' INT ',' INT ')'
    VAR    := 'n' | 'm' | 'x' INT

``[f]`` is the fractional part.  The constants of a term are multiplied
together and absorbed into a linear-form leaf, so every leaf has the shape
``c * variable``.  A term made of constants only has a nonzero constant term
and is rejected, as is a constant multiplying a bare fractional part (that
product is not generated from linear forms by sums, products and ``[.]``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..errors import ParseError

# ---------------------------------------------------------------------------
# constants


@dataclass(frozen=True, order=True)
class Atom:
    """``pi``, ``e``, or the real root ``root(k, j)`` (``sqrt(k)`` is ``root(k, 2)``)."""

    kind: str  # "pi" | "e" | "root"
    k: int = 0
    j: int = 0

    def __str__(self) -> str:
        if self.kind == "root":
            return f"sqrt({self.k})" if self.j == 2 else f"root({self.k},{self.j})"
        return self.kind


@dataclass(frozen=True)
class Const:
    """A product ``rational * atom_1 * ... * atom_k``; atoms are kept sorted."""

    rational: Fraction = Fraction(1)
    atoms: tuple[Atom, ...] = ()

    def __mul__(self, other: Const) -> Const:
        return Const(self.rational * other.rational, tuple(sorted(self.atoms + other.atoms)))

    def __str__(self) -> str:
        parts = [str(a) for a in self.atoms]
        if self.rational != 1 or not parts:
            parts.insert(0, _decimal(self.rational))
        return "*".join(parts)

    @property
    def is_one(self) -> bool:
        return self.rational == 1 and not self.atoms


def _decimal(q: Fraction) -> str:
    """Exact decimal text of a terminating rational."""
    if q.denominator == 1:
        return str(q.numerator)
    den = q.denominator
    for f in (2, 5):
        while den % f == 0:
            den //= f
    if den != 1:
        raise ValueError(f"{q} has no terminating decimal form")
    k = 1
    while (q * 10 ** k).denominator != 1:
        k += 1
    digits = str(abs((q * 10 ** k).numerator)).rjust(k + 1, "0")
    text = f"{digits[:-k]}.{digits[-k:]}"
    return ("-" if q < 0 else "") + text


# ---------------------------------------------------------------------------
# tree


@dataclass(frozen=True)
class LinearForm:
    """The leaf ``coeff * x_var``."""

    var: int
    coeff: Const


@dataclass(frozen=True)
class Add:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Mul:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Frac:
    child: "Node"


Node = Union[LinearForm, Add, Mul, Frac]


@dataclass(frozen=True)
class GenPolyExpr:
    """A parsed expression together with its variable names (in evaluation order)."""

    root: Node
    variables: tuple[str, ...]

    @property
    def dim(self) -> int:
        return len(self.variables)

    @property
    def depth(self) -> int:
        return depth(self.root)

    def __str__(self) -> str:
        return pretty(self)


def depth(node: Node) -> int:
    """Nesting level: linear forms sit at level 1, each ``[.]`` adds one."""
    if isinstance(node, LinearForm):
        return 1
    if isinstance(node, Frac):
        return depth(node.child) + 1
    return max(depth(node.left), depth(node.right))


def atoms_of(node: Node) -> set[Atom]:
    if isinstance(node, LinearForm):
        return set(node.coeff.atoms)
    if isinstance(node, Frac):
        return atoms_of(node.child)
    return atoms_of(node.left) | atoms_of(node.right)


# ---------------------------------------------------------------------------
# printing


def _pp(node: Node, names: tuple[str, ...]) -> str:
    if isinstance(node, LinearForm):
        v = names[node.var]
        return v if node.coeff.is_one else f"{node.coeff}*{v}"
    if isinstance(node, Frac):
        return f"[{_pp(node.child, names)}]"
    if isinstance(node, Add):
        right = _pp(node.right, names)
        if isinstance(node.right, Add):
            right = f"({right})"
        return f"{_pp(node.left, names)} + {right}"
    left = _pp(node.left, names)
    right = _pp(node.right, names)
    if isinstance(node.left, Add):
        left = f"({left})"
    if isinstance(node.right, (Add, Mul)):
        right = f"({right})"
    return f"{left}*{right}"


def pretty(expr: GenPolyExpr) -> str:
    return _pp(expr.root, expr.variables)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[+*()\[\],]))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        toks.append(_Tok(m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


_VAR = re.compile(r"^(n|m|x([1-9]\d*))$")


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.vars: set[str] = set()

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self, text: str) -> _Tok:
        t = self.tok
        if t.text != text:
            shown = t.text or "end of input"
            raise ParseError(f"expected {text!r}, found {shown!r}", t.pos)
        self.i += 1
        return t

    def int_arg(self) -> int:
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            raise ParseError("expected an integer", t.pos)
        self.i += 1
        return int(t.text)

    # Parse methods return a node, or a Const for a still-unabsorbed constant.
    def expr(self):
        start = self.tok.pos
        left = self.term()
        while self.tok.text == "+":
            self.take("+")
            rstart = self.tok.pos
            right = self.term()
            for part, pos in ((left, start), (right, rstart)):
                if isinstance(part, Const):
                    raise ParseError("constant term: every summand must contain a variable", pos)
            left = Add(left, right)
        return left

    def term(self):
        start = self.tok.pos
        const = Const()
        nodes: list = []
        saw_const = False
        while True:
            f = self.factor()
            if isinstance(f, Const):
                const = const * f
                saw_const = True
            else:
                nodes.append(f)
            if self.tok.text != "*":
                break
            self.take("*")
        if not nodes:
            return const
        node = nodes[0]
        for n in nodes[1:]:
            node = Mul(node, n)
        if saw_const:
            absorbed = _absorb(const, node)
            if absorbed is None:
                raise ParseError("a constant cannot multiply a bare fractional part", start)
            node = absorbed
        return node

    def factor(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Const(Fraction(t.text))
        if t.text == "(":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return inner
        if t.text == "[":
            self.take("[")
            start = self.tok.pos
            inner = self.expr()
            self.take("]")
            if isinstance(inner, Const):
                raise ParseError("fractional part of a constant", start)
            return Frac(inner)
        if t.kind == "name":
            name = t.text
            self.i += 1
            if name == "pi":
                return Const(atoms=(Atom("pi"),))
            if name == "e":
                return Const(atoms=(Atom("e"),))
            if name == "sqrt":
                self.take("(")
                k = self.int_arg()
                self.take(")")
                return _root_const(k, 2)
            if name == "root":
                self.take("(")
                k = self.int_arg()
                self.take(",")
                j = self.int_arg()
                self.take(")")
                if j < 1:
                    raise ParseError("root index must be positive", t.pos)
                return _root_const(k, j)
            if _VAR.match(name):
                self.vars.add(name)
                return _VarRef(name)
            raise ParseError(f"unknown name {name!r}", t.pos)
        shown = t.text or "end of input"
        raise ParseError(f"unexpected {shown!r}", t.pos)


@dataclass(frozen=True)
class _VarRef:
    """Placeholder leaf before variable indices are assigned."""

    name: str


def _root_const(k: int, j: int) -> Const:
    r = _exact_root(k, j)
    if r is not None:
        return Const(Fraction(r))
    return Const(atoms=(Atom("root", k, j),))


def _exact_root(k: int, j: int) -> int | None:
    from .intervals import _iroot

    r = _iroot(k, j)
    return r if r ** j == k else None


def _absorb(c: Const, node):
    """Push a constant factor into the first linear-form leaf reachable
    through products (through both summands of a sum)."""
    if isinstance(node, (_VarRef, _ScaledRef)):
        return _scaled_leaf(node, c)
    if isinstance(node, Add):
        left, right = _absorb(c, node.left), _absorb(c, node.right)
        return None if left is None or right is None else Add(left, right)
    if isinstance(node, Mul):
        left = _absorb(c, node.left)
        if left is not None:
            return Mul(left, node.right)
        right = _absorb(c, node.right)
        return None if right is None else Mul(node.left, right)
    return None


@dataclass(frozen=True)
class _ScaledRef:
    name: str
    coeff: Const


def _scaled_leaf(node, c: Const):
    if isinstance(node, _VarRef):
        return _ScaledRef(node.name, c)
    return _ScaledRef(node.name, node.coeff * c)


def _variable_order(names: set[str], dim: int | None) -> tuple[str, ...]:
    xs = {n for n in names if n.startswith("x")}
    nm = names - xs
    if xs and nm:
        raise ParseError("cannot mix n/m with x1..xd variables", 0)
    if xs:
        d = max(int(n[1:]) for n in xs)
        if dim is not None:
            if dim < d:
                raise ParseError(f"variable x{d} exceeds dimension {dim}", 0)
            d = dim
        return tuple(f"x{i}" for i in range(1, d + 1))
    order = ("n", "m") if "m" in nm or (dim or 0) >= 2 else ("n",)
    if dim is not None:
        if dim < len(order) or dim > 2:
            raise ParseError(f"variables n, m do not fit dimension {dim}", 0)
    return order


def _resolve(node, index: dict[str, int]):
    if isinstance(node, _VarRef):
        return LinearForm(index[node.name], Const())
    if isinstance(node, _ScaledRef):
        return LinearForm(index[node.name], node.coeff)
    if isinstance(node, LinearForm):
        return node
    if isinstance(node, Frac):
        return Frac(_resolve(node.child, index))
    return type(node)(_resolve(node.left, index), _resolve(node.right, index))


def parse(text: str, dim: int | None = None) -> GenPolyExpr:
    """Parse a constant-free generalized polynomial.

    Variables are ``n`` (and ``m``) or ``x1 .. xd``; ``dim`` pads the variable
    list when the expression does not mention every coordinate."""
    p = _Parser(text)
    root = p.expr()
    if p.tok.kind != "end":
        raise ParseError(f"unexpected {p.tok.text!r}", p.tok.pos)
    if isinstance(root, Const):
        raise ParseError("constant expression: no variable occurs", 0)
    names = _variable_order(p.vars, dim)
    return GenPolyExpr(_resolve(root, {v: i for i, v in enumerate(names)}), names)
