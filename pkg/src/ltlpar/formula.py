"""LTL formula trees, the surface syntax, negation normal form and size metrics.

Surface syntax (tightest binding first)::

    atom  ( ... )          identifiers, parenthesised formulas
    ~ X F G                prefix unary operators
    U                      until, right associative
    &                      conjunction, left associative
    |                      disjunction, left associative

The letters ``X``, ``F``, ``G`` and ``U`` are reserved and never occur inside
an atom name, so ``Xp&~Xp|XXq`` lexes without whitespace.  ``R`` (release)
exists only as the dual of ``U`` produced by :func:`to_nnf`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Union

__all__ = [
    "Formula",
    "Atom",
    "Not",
    "And",
    "Or",
    "Next",
    "Eventually",
    "Always",
    "Until",
    "Release",
    "ParseError",
    "parse",
    "render",
    "to_nnf",
    "length",
    "is_nnf",
    "atoms",
    "subformulas",
    "read_formula_file",
]

RESERVED = frozenset("XFGU")
_ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class ParseError(ValueError):
    """Malformed formula text; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not _ATOM_RE.match(self.name) or RESERVED & set(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")


@dataclass(frozen=True)
class Not:
    operand: Formula


@dataclass(frozen=True)
class Next:
    operand: Formula


@dataclass(frozen=True)
class Eventually:
    operand: Formula


@dataclass(frozen=True)
class Always:
    operand: Formula


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release:
    left: Formula
    right: Formula


Formula = Union[Atom, Not, Next, Eventually, Always, And, Or, Until, Release]

UNARY = (Not, Next, Eventually, Always)
BINARY = (And, Or, Until, Release)

_UNARY_SYMBOL = {Not: "~", Next: "X", Eventually: "F", Always: "G"}
_BINARY_SYMBOL = {And: "&", Or: "|", Until: "U", Release: "R"}
_SYMBOL_UNARY = {v: k for k, v in _UNARY_SYMBOL.items()}

# binding strength used by the renderer; larger binds tighter
_LEVEL = {Or: 1, And: 2, Until: 3, Release: 3}
_UNARY_LEVEL = 4
_ATOM_LEVEL = 5


def _level(f: Formula) -> int:
    if isinstance(f, Atom):
        return _ATOM_LEVEL
    if isinstance(f, UNARY):
        return _UNARY_LEVEL
    return _LEVEL[type(f)]


# --------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:(?P<atom>[A-EH-TVWYZa-z_][A-EH-TVWYZa-z0-9_]*)|(?P<op>[~XFGU&|()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            # only whitespace left, or an unknown character
            rest = text[pos:]
            stripped = rest.lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", n - len(stripped))
        kind = "atom" if m.group("atom") else "op"
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        tok = self.peek()
        return tok[2] if tok else len(self.text)

    def accept(self, op: str) -> bool:
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == op:
            self.i += 1
            return True
        return False

    def parse(self) -> Formula:
        if not self.tokens:
            raise ParseError("empty formula", 0)
        f = self.disjunction()
        if self.peek() is not None:
            raise ParseError(f"unexpected {self.peek()[1]!r}", self.pos())
        return f

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.accept("|"):
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.until()
        while self.accept("&"):
            f = And(f, self.until())
        return f

    def until(self) -> Formula:
        f = self.unary()
        if self.accept("U"):
            return Until(f, self.until())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in _SYMBOL_UNARY:
            self.i += 1
            return _SYMBOL_UNARY[tok[1]](self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of formula", self.pos())
        kind, value, start = tok
        if kind == "atom":
            self.i += 1
            return Atom(value)
        if value == "(":
            self.i += 1
            f = self.disjunction()
            if not self.accept(")"):
                raise ParseError("expected ')'", self.pos())
            return f
        raise ParseError(f"unexpected {value!r}", start)


def parse(text: str) -> Formula:
    """Parse ``text`` in the surface syntax.

    >>> parse("p U q U r")
    Until(left=Atom(name='p'), right=Until(left=Atom(name='q'), right=Atom(name='r')))
    """
    return _Parser(text).parse()


def read_formula_file(path) -> Formula:
    """Load a one-formula-per-file corpus entry (UTF-8, trailing whitespace ignored)."""
    return parse(Path(path).read_text(encoding="utf-8").rstrip())


# --------------------------------------------------------------------------
# printing


def render(f: Formula) -> str:
    """Print ``f`` with the fewest parentheses that still parse back to ``f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, UNARY):
        inner = render(f.operand)
        if _level(f.operand) < _UNARY_LEVEL:
            inner = f"({inner})"
        return _UNARY_SYMBOL[type(f)] + inner
    level = _LEVEL[type(f)]
    left, right = render(f.left), render(f.right)
    if isinstance(f, (Until, Release)):
        # right associative
        if _level(f.left) <= level:
            left = f"({left})"
        if _level(f.right) < level:
            right = f"({right})"
    else:
        if _level(f.left) < level:
            left = f"({left})"
        if _level(f.right) <= level:
            right = f"({right})"
    return f"{left} {_BINARY_SYMBOL[type(f)]} {right}"


# --------------------------------------------------------------------------
# normal form and metrics


def to_nnf(f: Formula) -> Formula:
    """Push negations down to the atoms.  F and G are kept; ~(a U b) becomes ~a R ~b."""
    return _nnf(f, False)


def _nnf(f: Formula, negated: bool) -> Formula:
    if isinstance(f, Atom):
        return Not(f) if negated else f
    if isinstance(f, Not):
        return _nnf(f.operand, not negated)
    if isinstance(f, Next):
        return Next(_nnf(f.operand, negated))
    if isinstance(f, Eventually):
        inner = _nnf(f.operand, negated)
        return Always(inner) if negated else Eventually(inner)
    if isinstance(f, Always):
        inner = _nnf(f.operand, negated)
        return Eventually(inner) if negated else Always(inner)
    left, right = _nnf(f.left, negated), _nnf(f.right, negated)
    if isinstance(f, And):
        return Or(left, right) if negated else And(left, right)
    if isinstance(f, Or):
        return And(left, right) if negated else Or(left, right)
    if isinstance(f, Until):
        return Release(left, right) if negated else Until(left, right)
    if isinstance(f, Release):
        return Until(left, right) if negated else Release(left, right)
    raise TypeError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    if isinstance(f, Atom):
        return True
    if isinstance(f, Not):
        return isinstance(f.operand, Atom)
    if isinstance(f, UNARY):
        return is_nnf(f.operand)
    return is_nnf(f.left) and is_nnf(f.right)


def length(f: Formula) -> int:
    """Number of nodes in the syntax tree."""
    if isinstance(f, Atom):
        return 1
    if isinstance(f, UNARY):
        return 1 + length(f.operand)
    return 1 + length(f.left) + length(f.right)


def subformulas(f: Formula) -> set:
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in out:
            continue
        out.add(g)
        if isinstance(g, UNARY):
            stack.append(g.operand)
        elif isinstance(g, BINARY):
            stack.extend((g.left, g.right))
    return out


def atoms(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}
