"""Perfect-factorization shapes of rigid sheaves on short (-2)-chains.

Patterns are named by the multiplicity vector of the sheaf's class:
``12`` is C1+2C2, ``123`` is C1+2C2+3C3, ``12321`` and ``123321`` are the
five- and six-curve peaks.  The first two carry full factorization shapes
with symbolic degrees; all four carry the list of supports a final line
bundle factor ``L`` may have in a perfect factorization ``(G, L)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Mapping

from .cohom import make_atom
from .config import CurveConfig, build_config
from .factorization import Factor, Factorization

PATTERNS = ("12", "123", "12321", "123321")


@dataclass(frozen=True)
class ShapeFactor:
    support: tuple[int, ...]
    degrees: tuple[str, ...]
    thick: tuple[int, ...] = ()
    mult: int = 1
    joined: bool = False

    def render(self) -> str:
        names = "\\cup ".join(("2" if i in self.thick else "") + f"C_{i}" for i in self.support)
        txt = f"O_{{{names}}}({', '.join(self.degrees)})"
        return txt + (f"^{{\\oplus {self.mult}}}" if self.mult > 1 else "")


@dataclass(frozen=True)
class Shape:
    label: str
    factors: tuple[ShapeFactor, ...]

    def render(self) -> str:
        parts = []
        for f in self.factors:
            if f.joined:
                parts[-1] += " \\oplus " + f.render()
            else:
                parts.append(f.render())
        return "(" + ", ".join(parts) + ")"

    @property
    def params(self) -> tuple[str, ...]:
        names = set()
        for f in self.factors:
            for d in f.degrees:
                names.update(re.findall(r"[a-z]\d", d))
        return tuple(sorted(names))


def _f(support, *degrees, thick=(), mult=1, joined=False) -> ShapeFactor:
    return ShapeFactor(tuple(support), tuple(degrees), tuple(thick), mult, joined)


C12 = (1, 2)
C23 = (2, 3)
C123 = (1, 2, 3)

SHAPES: dict[str, tuple[Shape, ...]] = {
    "12": (
        Shape("1", (_f((2,), "a2"), _f(C12, "a1", "a2"))),
        Shape("2", (_f(C12, "a1", "a2"), _f((2,), "a2-1"))),
        Shape("3", (_f(C12, "a1", "a2"), _f((2,), "a2-2"))),
    ),
    "123": (
        Shape("1-1", (_f((3,), "a3"), _f(C23, "a2", "a3"), _f(C123, "a1", "a2", "a3"))),
        Shape("1-2", (_f((3,), "a3"), _f(C123, "a1", "a2", "a3"), _f(C23, "a2-1", "a3"))),
        Shape("1-3", (_f((3,), "a3"), _f(C123, "a1", "a2", "a3"), _f(C23, "a2-2", "a3"))),
        Shape("2-1", (_f(C23, "a2", "a3"), _f(C123, "a1", "a2", "a3"), _f((3,), "b3"))),
        Shape("2-2", (_f(C123, "a1", "a2", "a3"), _f(C23, "a2-1", "a3"), _f((3,), "b3"))),
        Shape("2-3", (_f(C123, "a1", "a2", "a3"), _f(C23, "a2-2", "a3"), _f((3,), "b3"))),
        Shape("3-1", (_f(C123, "a1", "a2", "a3"), _f((3,), "b3"), _f(C23, "a2", "b3"))),
        Shape("3-2", (_f(C23, "a2", "a3"), _f((3,), "b3"), _f(C123, "a1", "a2+1", "b3"))),
        Shape("3-3", (_f(C123, "a1", "a2", "a3"), _f((3,), "b3"), _f(C23, "a2-1", "b3"))),
        Shape("3-4", (_f(C123, "a1", "a2", "a3", thick=(2,)),
                      _f((3,), "a3-1", mult=2, joined=True))),
        Shape("4-1", (_f(C123, "a1", "a2", "a3"), _f(C23, "a2", "b3"), _f((3,), "c3"))),
        Shape("4-2", (_f(C23, "a2", "a3"), _f(C123, "a1", "a2+1", "b3"), _f((3,), "c3"))),
        Shape("4-3", (_f(C123, "a1", "a2", "b3+1"), _f(C23, "a2-1", "b3"), _f((3,), "c3"))),
        Shape("4-4", (_f(C123, "a1", "a2", "b3+1", thick=(2,)),
                      _f((3,), "b3", joined=True), _f((3,), "c3"))),
    ),
}

# ordered parameters that must strictly decrease
SIDE_CONDITIONS = {"123": ("a3", "b3", "c3")}


def _run(lo: int, hi: int) -> tuple[int, ...]:
    step = 1 if hi >= lo else -1
    return tuple(range(lo, hi + step, step))


SPLIT_SUPPORTS: dict[str, tuple[tuple[int, ...], ...]] = {
    "12": ((2,), (1, 2)),
    "123": tuple(_run(i, 3) for i in (1, 2, 3)),
    # C_i..C_3 read as the run between C_i and C_3 for i = 4, 5 as well
    "12321": tuple(tuple(sorted(_run(i, 3))) for i in range(1, 6)) + ((1, 2, 3, 4, 5),),
    "123321": (tuple(_run(i, 3) for i in (1, 2, 3))
               + tuple(_run(2, j) for j in (4, 5, 6))
               + ((3, 4),)),
}

EXCEPTIONAL_SPLITS = {
    "123": "O_{C_1\\cup 2C_2\\cup C_3}(a_1, a_2, a_3) \\oplus O_{C_3}(a_3-1)^{\\oplus 2}",
}


def _check_pattern(pattern: str):
    if pattern not in PATTERNS:
        raise KeyError(f"unknown pattern {pattern!r}; known: {', '.join(PATTERNS)}")


def catalog(pattern: str) -> tuple[Shape, ...]:
    """Factorization shapes for ``12`` and ``123``; empty for the split-only patterns."""
    _check_pattern(pattern)
    return SHAPES.get(pattern, ())


def split_supports(pattern: str) -> tuple[tuple[int, ...], ...]:
    """Chain positions the final line bundle ``L`` of ``(G, L)`` may occupy."""
    _check_pattern(pattern)
    return SPLIT_SUPPORTS[pattern]


def pattern_config(pattern: str) -> CurveConfig:
    _check_pattern(pattern)
    return build_config([len(pattern)])


_TERM = re.compile(r"\s*([+-]?)\s*([a-z]\d|\d+)")


def evaluate(expr: str, params: Mapping[str, int]) -> int:
    """Evaluate an affine expression such as ``a2-1`` or ``b3+1``."""
    pos, total = 0, 0
    expr = expr.strip()
    while pos < len(expr):
        m = _TERM.match(expr, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse degree expression {expr!r}")
        sign = -1 if m.group(1) == "-" else 1
        tok = m.group(2)
        total += sign * (int(tok) if tok.isdigit() else params[tok])
        pos = m.end()
    return total


def instantiate(cfg: CurveConfig, shape: Shape, params: Mapping[str, int]) -> Factorization:
    out = []
    for f in shape.factors:
        comps = [(1, i) for i in f.support]
        degs = {c: evaluate(d, params) for c, d in zip(comps, f.degrees)}
        atom = make_atom(cfg, comps, degs, [(1, i) for i in f.thick])
        out.append(Factor(atom, f.mult, f.joined))
    return Factorization(tuple(out))


def degree_grid(pattern: str, shape: Shape, width: int = 3, base: int = 0) -> Iterator[dict[str, int]]:
    """Parameter assignments on a window of the given width.

    Free parameters range over ``base .. base+width-1``; each parameter in a
    strictly decreasing side condition ranges over the ``width`` values
    just below its predecessor.
    """
    params = shape.params
    chain = [p for p in SIDE_CONDITIONS.get(pattern, ()) if p in params]
    free = [p for p in params if p not in chain[1:]]
    window = range(base, base + width)
    for values in itertools.product(window, repeat=len(free)):
        assignment = dict(zip(free, values))
        yield from _extend_chain(assignment, chain, 1, width)


def _extend_chain(assignment, chain, idx, width):
    if idx >= len(chain):
        yield dict(assignment)
        return
    prev = assignment[chain[idx - 1]]
    for gap in range(1, width + 1):
        assignment[chain[idx]] = prev - gap
        yield from _extend_chain(assignment, chain, idx + 1, width)
    del assignment[chain[idx]]
