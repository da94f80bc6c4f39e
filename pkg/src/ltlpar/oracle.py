"""Reference LTL decision procedure used to cross-check the tableau.

Classical atom-graph construction.  An atom is a complete truth assignment to
the closure of the input; it is fixed by the values of the *elementary*
formulas (propositions and X-formulas), so all ``2**k`` atoms are enumerated
at once as numpy boolean columns.  ``A -> B`` is an edge iff every
``X a`` in the closure is true in ``A`` exactly when ``a`` is true in ``B``.
Atoms without successors, and atoms holding an eventuality that can never be
fulfilled, are deleted until nothing changes.

Negation is evaluated directly (no normal form), which keeps this module
independent of the tableau's preprocessing.
"""

from __future__ import annotations

import numpy as np

from .formula import (
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    Next,
    Not,
    Or,
    Release,
    Until,
    parse,
    subformulas,
)

__all__ = ["ClosureTooLarge", "closure", "decide_reference"]

SAT = "Satisfiable"
UNSAT = "Unsatisfiable"


class ClosureTooLarge(ValueError):
    pass


def closure(f: Formula) -> list:
    """Subformulas of ``f`` plus the X-unfolding of every temporal subformula."""
    out = set(subformulas(f))
    for g in list(out):
        if isinstance(g, (Eventually, Always, Until, Release)):
            out.add(Next(g))
    for g in list(out):
        if isinstance(g, Next):
            out |= subformulas(g.operand)
    # a formula's value depends only on strictly smaller ones, or on an X-formula
    return sorted(out, key=_size)


def _size(f) -> int:
    return len(subformulas(f))


def decide_reference(f, max_closure: int = 40, max_elementary: int = 22) -> str:
    if isinstance(f, str):
        f = parse(f)
    cl = closure(f)
    if len(cl) > max_closure:
        raise ClosureTooLarge(f"closure has {len(cl)} formulas (bound {max_closure})")
    elementary = [g for g in cl if isinstance(g, (Atom, Next))]
    k = len(elementary)
    if k > max_elementary:
        raise ClosureTooLarge(f"{k} elementary formulas (bound {max_elementary})")

    codes = np.arange(1 << k, dtype=np.int64)
    val = {}
    for bit, g in enumerate(elementary):
        val[g] = ((codes >> bit) & 1).astype(bool)

    def value(g):
        if g in val:
            return val[g]
        if isinstance(g, Not):
            v = ~value(g.operand)
        elif isinstance(g, And):
            v = value(g.left) & value(g.right)
        elif isinstance(g, Or):
            v = value(g.left) | value(g.right)
        elif isinstance(g, Eventually):
            v = value(g.operand) | value(Next(g))
        elif isinstance(g, Always):
            v = value(g.operand) & value(Next(g))
        elif isinstance(g, Until):
            v = value(g.right) | (value(g.left) & value(Next(g)))
        elif isinstance(g, Release):
            v = value(g.right) & (value(g.left) | value(Next(g)))
        else:
            raise TypeError(f"not a formula: {g!r}")
        val[g] = v
        return v

    nexts = [g for g in elementary if isinstance(g, Next)]
    # required[A] packs the X-formula values of A; provided[B] packs the values
    # of their operands in B.  A -> B iff required[A] == provided[B].
    required = np.zeros(1 << k, dtype=np.int64)
    provided = np.zeros(1 << k, dtype=np.int64)
    for bit, g in enumerate(nexts):
        required |= value(g).astype(np.int64) << bit
        provided |= value(g.operand).astype(np.int64) << bit

    # (holds, fulfilled) masks for every eventuality in the closure
    pending = []
    for g in cl:
        if isinstance(g, Eventually):
            pending.append((value(g), value(g.operand)))
        elif isinstance(g, Until):
            pending.append((value(g), value(g.right)))
        elif isinstance(g, Always):
            pending.append((~value(g), ~value(g.operand)))
        elif isinstance(g, Release):
            pending.append((~value(g), ~value(g.right)))

    slots = 1 << len(nexts)

    def has_successor_in(targets):
        table = np.zeros(slots, dtype=bool)
        table[provided[targets]] = True
        return table[required]

    alive = np.ones(1 << k, dtype=bool)
    while True:
        before = int(alive.sum())
        alive &= has_successor_in(alive)
        for holds, cure in pending:
            reach = alive & cure
            count = int(reach.sum())
            while True:
                reach |= alive & has_successor_in(reach)
                grown = int(reach.sum())
                if grown == count:
                    break
                count = grown
            alive &= ~holds | reach
        if int(alive.sum()) == before:
            break
    return SAT if bool((alive & value(f)).any()) else UNSAT
