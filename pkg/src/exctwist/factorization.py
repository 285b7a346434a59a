"""Ordered factorizations of rigid sheaves and the rewrites that act on them."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from .cohom import AtomicSheaf, Span, hom_dims, make_atom
from .config import Component, CurveConfig, D
from .errors import NoExtensionRuleError, PreconditionError, SymbolicDegreesError
from .lattice import DivisorClass, chi as class_chi, is_numerically_spherical

ZERO = Span(0, 0)


@dataclass(frozen=True)
class Factor:
    atom: AtomicSheaf
    mult: int = 1
    # direct summand sharing the previous factor's position
    joined: bool = False


@dataclass(frozen=True)
class Factorization:
    factors: tuple[Factor, ...]

    @classmethod
    def of(cls, *items) -> "Factorization":
        """Accepts atoms, ``(atom, mult)`` pairs or :class:`Factor` objects."""
        out = []
        for it in items:
            if isinstance(it, Factor):
                out.append(it)
            elif isinstance(it, AtomicSheaf):
                out.append(Factor(it))
            else:
                out.append(Factor(*it))
        return cls(tuple(out))

    def positions(self) -> list[list[Factor]]:
        groups: list[list[Factor]] = []
        for f in self.factors:
            if f.joined and groups:
                groups[-1].append(f)
            else:
                groups.append([f])
        return groups

    def divisor_class(self, cfg: CurveConfig) -> DivisorClass:
        total = DivisorClass.zero(cfg)
        for f in self.factors:
            total = total + f.atom.divisor_class(cfg).scale(f.mult)
        return total

    def describe(self, cfg: CurveConfig) -> str:
        parts = []
        for group in self.positions():
            parts.append(" + ".join(f.atom.describe(cfg) + (f"^{f.mult}" if f.mult > 1 else "")
                                    for f in group))
        return "(" + ", ".join(parts) + ")"

    def to_json(self, cfg: CurveConfig) -> list[dict]:
        out = []
        for f in self.factors:
            doc = f.atom.to_json(cfg)
            doc["mult"] = f.mult
            if f.joined:
                doc["joined"] = True
            out.append(doc)
        return out


def factorization_from_json(cfg: CurveConfig, docs: Sequence[Mapping]) -> Factorization:
    from .cohom import atom_from_json
    return Factorization(tuple(Factor(atom_from_json(cfg, d), int(d.get("mult", 1)), bool(d.get("joined", False)))
                               for d in docs))


def _require_concrete(F: Factorization):
    if any(f.atom.symbolic for f in F.factors):
        raise SymbolicDegreesError("factorization has symbolic degrees")


def perfectness_report(cfg: CurveConfig, F: Factorization) -> list[str]:
    """Violations of h0(G_i, G_j) = h2(G_j, G_i) = 0 (i < j); empty when perfect.

    Direct summands at one position must also commute: h1(later, earlier) = 0.
    Any dimension not pinned at zero is a violation, indeterminate ones included.
    """
    _require_concrete(F)
    problems = []
    groups = F.positions()
    for gi, group in enumerate(groups, start=1):
        for a_idx, first in enumerate(group):
            for second in group[a_idx + 1:]:
                h1 = hom_dims(cfg, second.atom, first.atom).h1
                if h1 != ZERO:
                    problems.append(f"summands at position {gi} do not split: "
                                    f"h1({second.atom.describe(cfg)}, {first.atom.describe(cfg)}) = {h1}")
        for gj in range(gi + 1, len(groups) + 1):
            for fi in group:
                for fj in groups[gj - 1]:
                    h0 = hom_dims(cfg, fi.atom, fj.atom).h0
                    if h0 != ZERO:
                        problems.append(f"h0(G{gi}, G{gj}) = {h0}")
                    h2 = hom_dims(cfg, fj.atom, fi.atom).h2
                    if h2 != ZERO:
                        problems.append(f"h2(G{gj}, G{gi}) = {h2}")
    return problems


def perfectness_check(cfg: CurveConfig, F: Factorization) -> bool:
    return not perfectness_report(cfg, F)


def hn_factorization(cfg: CurveConfig, component: Component,
                     multidegree: Mapping[int, int]) -> Factorization:
    """Harder-Narasimhan shape: ``O_C(a)^{r}`` factors by strictly decreasing a."""
    return Factorization(tuple(Factor(make_atom(cfg, [component], {component: a}), r)
                               for a, r in sorted(multidegree.items(), reverse=True) if r > 0))


def swap(cfg: CurveConfig, F: Factorization, i: int) -> Factorization:
    """Exchange positions i and i+1 (1-based); needs h1(G_{i+1}, G_i) = 0."""
    _require_concrete(F)
    groups = F.positions()
    if not 1 <= i < len(groups):
        raise PreconditionError(f"no positions {i}, {i + 1}")
    for lower in groups[i - 1]:
        for upper in groups[i]:
            h1 = hom_dims(cfg, upper.atom, lower.atom).h1
            if h1 != ZERO:
                raise PreconditionError(
                    f"h1({upper.atom.describe(cfg)}, {lower.atom.describe(cfg)}) = {h1}, cannot swap")
    groups[i - 1], groups[i] = groups[i], groups[i - 1]
    return _flatten(groups)


def _flatten(groups: Iterable[list[Factor]]) -> Factorization:
    out = []
    for group in groups:
        for n, f in enumerate(group):
            out.append(replace(f, joined=n > 0))
    return Factorization(tuple(out))


def extension_atom(cfg: CurveConfig, sub: AtomicSheaf, quot: AtomicSheaf) -> AtomicSheaf:
    """The unique non-trivial extension ``0 -> sub -> E -> quot -> 0`` as an atom.

    Supported geometries: disjoint supports meeting at one node, or supports
    sharing exactly one (-2)-curve C (result doubled along C).  In both cases
    E|_quot = quot and sub = E(-quot)|_{rest}, i.e. sub-only components gain
    one degree per node with quot and the shared curve needs
    deg_sub(C) = deg_quot(C) - quot.C.
    """
    for a in (sub, quot):
        if a.symbolic:
            raise SymbolicDegreesError("extension needs concrete degrees")
        if a.thick:
            raise NoExtensionRuleError("no extension rule for doubled inputs")
    h1 = hom_dims(cfg, quot, sub).h1
    if h1 != Span(1, 1):
        raise PreconditionError(f"h1(quot, sub) = {h1}; a unique extension needs 1")
    s_set, q_set = set(sub.support), set(quot.support)
    overlap = s_set & q_set
    union = s_set | q_set
    edges = [(a, b) for a, b in cfg.edges if a in union and b in union]
    if len(edges) != len(union) - 1:
        raise NoExtensionRuleError("union of supports is not a tree")
    if len(overlap) > 1 or D in overlap:
        raise NoExtensionRuleError(f"unsupported overlap {sorted(overlap)}")
    sd, qd = dict(sub.deg), dict(quot.deg)
    degs = dict(qd)
    for c in s_set - q_set:
        degs[c] = sd[c] + sum(1 for n in cfg.neighbors[c] if n in q_set)
    if overlap:
        (c,) = overlap
        q_dot = -2 + sum(1 for n in cfg.neighbors[c] if n in q_set)
        if sd[c] != qd[c] - q_dot:
            raise NoExtensionRuleError(
                f"degree of sub on {cfg.name(c)} is {sd[c]}, line-bundle extension needs {qd[c] - q_dot}")
    else:
        crossing = [(a, b) for a, b in edges if (a in s_set) != (b in s_set)]
        if len(crossing) != 1:
            raise NoExtensionRuleError("disjoint supports must meet at exactly one node")
    return make_atom(cfg, union, degs, overlap)


def _spherical_factor(cfg: CurveConfig, f: Factor) -> bool:
    return f.atom.reduced and is_numerically_spherical(cfg, f.atom.divisor_class(cfg))


def absorb(cfg: CurveConfig, F: Factorization, position: int, direction: int) -> Factorization:
    """Merge a copy of a spherical factor ``S^r`` (at 1-based ``position``) into a neighbour.

    direction 1: ``(.., G, S^r, ..) -> (.., S^{r-1}, G', ..)`` with ``0 -> G -> G' -> S -> 0``;
    needs h0(S, G) = 0 and chi(S, G) = -1.
    direction 2: ``(.., S^r, H, ..) -> (.., H', S^{r-1}, ..)`` with ``0 -> S -> H' -> H -> 0``;
    needs h0(H, S) = 0 and chi(H, S) = -1.
    """
    _require_concrete(F)
    facs = list(F.factors)
    p = position - 1
    if not 0 <= p < len(facs):
        raise PreconditionError(f"no factor at position {position}")
    s = facs[p]
    if not _spherical_factor(cfg, s):
        raise PreconditionError(f"{s.atom.describe(cfg)} is not spherical")
    if s.joined or (p + 1 < len(facs) and facs[p + 1].joined):
        raise PreconditionError("spherical factor shares its position with another summand")
    q = p - 1 if direction == 1 else p + 1
    if direction not in (1, 2) or not 0 <= q < len(facs):
        raise PreconditionError(f"no neighbour in direction {direction}")
    g = facs[q]
    if g.mult != 1 or g.joined or (q + 1 < len(facs) and facs[q + 1].joined):
        raise PreconditionError("neighbour must be a single, unsummed factor")
    S, G = s.atom, g.atom
    c_s, c_g = S.divisor_class(cfg), G.divisor_class(cfg)
    if direction == 1:
        h0, x = hom_dims(cfg, S, G).h0, class_chi(cfg, c_s, c_g)
        if h0 != ZERO or x != -1:
            raise PreconditionError(f"need h0(S,G)=0 and chi(S,G)=-1, got {h0}, {x}")
        new = extension_atom(cfg, G, S)
        block = ([Factor(S, s.mult - 1)] if s.mult > 1 else []) + [Factor(new)]
        facs[q:p + 1] = block
    else:
        h0, x = hom_dims(cfg, G, S).h0, class_chi(cfg, c_g, c_s)
        if h0 != ZERO or x != -1:
            raise PreconditionError(f"need h0(H,S)=0 and chi(H,S)=-1, got {h0}, {x}")
        new = extension_atom(cfg, S, G)
        block = [Factor(new)] + ([Factor(S, s.mult - 1)] if s.mult > 1 else [])
        facs[p:q + 1] = block
    return Factorization(tuple(facs))

