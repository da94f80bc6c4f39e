"""Seeded random LTL formulas of an exact length.

The generator is driven by MINSTD (``x <- 16807 x mod 2**31-1``), so a
(seed, length, atoms) triple names the same formula in any language.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .formula import Always, And, Atom, Eventually, Formula, Next, Not, Or, Until, render

__all__ = ["MINSTD_MODULUS", "MinStd", "GenConfig", "gen", "write_corpus"]

MINSTD_MODULUS = 2147483647
MINSTD_MULTIPLIER = 16807

UNARY_OPS = (Not, Next, Eventually, Always)
BINARY_OPS = (And, Or, Until)


class MinStd:
    """Park-Miller minimal standard generator."""

    def __init__(self, seed: int):
        state = seed % MINSTD_MODULUS
        self.state = state if state > 0 else 1

    def next(self) -> int:
        self.state = (MINSTD_MULTIPLIER * self.state) % MINSTD_MODULUS
        return self.state

    def below(self, k: int) -> int:
        """Uniform-ish integer in ``[0, k)`` from one draw."""
        return (self.next() - 1) * k // (MINSTD_MODULUS - 1)


@dataclass(frozen=True)
class GenConfig:
    length: int
    seed: int = 1
    atoms: tuple = ("p", "q")

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("length must be at least 1")
        if not self.atoms:
            raise ValueError("need at least one atom")


def gen(config: GenConfig) -> Formula:
    rng = MinStd(config.seed)
    return _gen(config.length, rng, config.atoms)


def _gen(n: int, rng: MinStd, names) -> Formula:
    if n == 1:
        return Atom(names[rng.below(len(names))])
    if n == 2:
        op = UNARY_OPS[rng.below(4)]
        return op(Atom(names[rng.below(len(names))]))
    if rng.below(2) == 0:
        op = UNARY_OPS[rng.below(4)]
        return op(_gen(n - 1, rng, names))
    op = BINARY_OPS[rng.below(3)]
    k = 1 + rng.below(n - 2)
    left = _gen(k, rng, names)
    return op(left, _gen(n - 1 - k, rng, names))


def write_corpus(out_dir, length: int, count: int, seed: int, atoms=("p", "q")) -> list:
    """Write ``count`` formulas (seeds ``seed .. seed+count-1``), one per ``.ltl`` file."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for s in range(seed, seed + count):
        p = out / f"gen_L{length}_S{s}.ltl"
        p.write_text(render(gen(GenConfig(length, s, tuple(atoms)))) + "\n", encoding="utf-8")
        paths.append(p)
    return paths
