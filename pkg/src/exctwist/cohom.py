"""Hom/Ext dimensions between atomic sheaves.

An atomic sheaf is a line bundle on a connected subcurve ``sum r_c C_c`` of the
configuration with ``r_c`` in {1, 2} (``r_D == 1``).  ``deg[c]`` is the degree
of its restriction to the reduced curve ``C_c``; for a doubled (-2)-curve this
is the ``a`` of ``O_{2C}(a)``.

Between two reduced atoms ``h0`` is computed either by an explicit linear
system over Q (:func:`oracle_h0`) or by leaf pruning on the overlap
(:func:`closed_form_h0`).  ``h2`` follows from Serre duality and ``h1`` from
``chi = -c1(A).c1(B)``.  Atoms with doubled components are resolved through
restriction sequences ``0 -> T(-Q)|_{Z-Q} -> T -> T|_Q -> 0`` and the long
exact sequences they induce, which yields a set of feasible ``(h0, h1, h2)``
triples rather than a single value when connecting maps are not forced.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .config import Component, CurveConfig, D
from .errors import (ExcTwistError, MukaiHypothesisError, ShapeError,
                     SymbolicDegreesError, ThickenedInputError)
from .lattice import DivisorClass, chi as class_chi

Triple = tuple[int, int, int]


@dataclass(frozen=True, order=True)
class AtomicSheaf:
    support: tuple[Component, ...]
    deg: tuple[tuple[Component, int], ...] = ()
    thick: tuple[Component, ...] = ()
    symbolic: bool = False

    def degree(self, c: Component) -> int:
        if self.symbolic:
            raise SymbolicDegreesError("atom carries symbolic degrees")
        return dict(self.deg)[c]

    def mult(self, c: Component) -> int:
        if c in self.thick:
            return 2
        return 1 if c in self.support else 0

    @property
    def reduced(self) -> bool:
        return not self.thick

    def divisor_class(self, cfg: CurveConfig) -> DivisorClass:
        return DivisorClass.from_components(cfg, {c: self.mult(c) for c in self.support})

    def shifted(self, shifts: Mapping[Component, int]) -> "AtomicSheaf":
        degs = dict(self.deg)
        for c, v in shifts.items():
            if c in degs:
                degs[c] += v
        return AtomicSheaf(self.support, tuple(sorted(degs.items())), self.thick, self.symbolic)

    def twist_omega(self) -> "AtomicSheaf":
        """A tensor omega_X: K.D = -1, K.C = 0 on (-2)-curves."""
        return self.shifted({D: -1}) if D in self.support else self

    def describe(self, cfg: CurveConfig) -> str:
        names = [("2" if c in self.thick else "") + cfg.name(c) for c in self.support]
        body = "O_{" + "+".join(names) + "}"
        if self.symbolic or not self.deg:
            return body
        return body + "(" + ",".join(str(v) for _, v in self.deg) + ")"

    def to_json(self, cfg: CurveConfig) -> dict:
        doc: dict = {"support": [cfg.name(c) for c in self.support]}
        if self.thick:
            doc["thick"] = {cfg.name(c): 2 for c in self.thick}
        if not self.symbolic:
            doc["deg"] = {cfg.name(c): v for c, v in self.deg}
        return doc


def _connected(cfg: CurveConfig, comps: Iterable[Component]) -> bool:
    comps = set(comps)
    if not comps:
        return False
    start = min(comps)
    seen, stack = {start}, [start]
    while stack:
        for n in cfg.neighbors[stack.pop()]:
            if n in comps and n not in seen:
                seen.add(n)
                stack.append(n)
    return seen == comps


def _edges_within(cfg: CurveConfig, comps) -> list[tuple[Component, Component]]:
    comps = set(comps)
    return [(a, b) for a, b in cfg.edges if a in comps and b in comps]


def components_of(cfg: CurveConfig, comps: Iterable[Component]) -> list[tuple[Component, ...]]:
    """Connected components of the induced subgraph, in canonical order."""
    left = set(comps)
    out = []
    while left:
        start = min(left)
        seen, stack = {start}, [start]
        while stack:
            for n in cfg.neighbors[stack.pop()]:
                if n in left and n not in seen:
                    seen.add(n)
                    stack.append(n)
        left -= seen
        out.append(tuple(sorted(seen)))
    return out


def make_atom(cfg: CurveConfig, support: Iterable[Component],
              deg: Optional[Mapping[Component, int]] = None,
              thick: Iterable[Component] = ()) -> AtomicSheaf:
    """Validated constructor.  ``deg=None`` produces a symbolic atom."""
    supp = tuple(sorted(set(cfg.check(c) for c in support)))
    if not _connected(cfg, supp):
        raise ShapeError("atom support must be nonempty and connected")
    # Degree vectors classify line bundles only on trees of rational curves.
    if len(_edges_within(cfg, supp)) != len(supp) - 1:
        raise ShapeError("atom support contains a cycle")
    thick_t = tuple(sorted(set(thick)))
    for c in thick_t:
        if c not in supp:
            raise ShapeError(f"thickened component {c} not in support")
        if c == D:
            raise ShapeError("the (-1)-curve cannot be thickened")
    if deg is None:
        return AtomicSheaf(supp, (), thick_t, True)
    degs = {cfg.check(c): int(v) for c, v in deg.items()}
    if set(degs) != set(supp):
        raise ShapeError("degrees must be given for exactly the support components")
    return AtomicSheaf(supp, tuple(sorted(degs.items())), thick_t, False)


def atom_from_json(cfg: CurveConfig, doc: Mapping) -> AtomicSheaf:
    """``{"support": ["C1","C2"], "thick": {"C2": 2}, "deg": {"C1": 0, "C2": -1}}``"""
    try:
        support = [cfg.parse(n) for n in doc["support"]]
        thick = []
        for n, r in (doc.get("thick") or {}).items():
            if int(r) == 2:
                thick.append(cfg.parse(n))
            elif int(r) != 1:
                raise ShapeError(f"thickening {r} not in {{1, 2}}")
        deg = doc.get("deg")
        if deg is not None:
            deg = {cfg.parse(n): int(v) for n, v in deg.items()}
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, ExcTwistError):
            raise
        raise ShapeError(f"malformed atom document: {exc}") from exc
    return make_atom(cfg, support, deg, thick)


# ---------------------------------------------------------------------------
# reduced atoms: oracle and closed form

def _integer_row(row) -> list[int]:
    if all(type(v) is int for v in row):
        return list(row)
    scale = math.lcm(*(Fraction(v).denominator for v in row))
    return [int(Fraction(v) * scale) for v in row]


def rank(rows: Sequence[Sequence]) -> int:
    """Rank over Q, exactly: rows are scaled to integers and eliminated fraction-free."""
    m = [_integer_row(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        row_r = m[r]
        p = row_r[col]
        for i in range(r + 1, len(m)):
            f = m[i][col]
            if f:
                row_i = m[i]
                new = [p * row_i[c] - f * row_r[c] for c in range(ncols)]
                g = math.gcd(*new)
                m[i] = [v // g for v in new] if g > 1 else new
        r += 1
        if r == len(m):
            break
    return r


def default_node_points(cfg: CurveConfig) -> dict[tuple[Component, Component], tuple[int, int]]:
    """Point of the node ``{c, n}`` on ``c`` as homogeneous ``[x:y]``.

    Chain nodes sit at infinity on the lower-indexed curve and at 0 on the
    higher one; nodes with D sit at ``[1:1]`` on the chain curve and at
    ``[1:m]`` (m = 1, 2, ...) on D.
    """
    one, zero = 1, 0
    pts = {}
    d_count = 0
    for a, b in cfg.edges:
        if a == D:
            d_count += 1
            pts[(D, b)] = (one, d_count)
            pts[(b, D)] = (one, one)
        else:
            pts[(a, b)] = (one, zero)
            pts[(b, a)] = (zero, one)
    return pts


def _monomials(m: int, pt) -> list:
    x, y = pt
    return [x ** i * y ** (m - i) for i in range(m + 1)]


def _require_reduced_concrete(*atoms: AtomicSheaf):
    for a in atoms:
        if a.symbolic:
            raise SymbolicDegreesError("concrete degrees required")
        if a.thick:
            raise ThickenedInputError("reduced atoms required")


def oracle_h0(cfg: CurveConfig, A: AtomicSheaf, B: AtomicSheaf, *,
              points: Optional[Mapping] = None,
              gluing: Optional[Mapping] = None) -> int:
    """dim Hom(A, B) as the solution space of an explicit linear system.

    A morphism is a tuple of sections of ``O(deg_B - deg_A)`` on the common
    components W; they must agree (up to the gluing scalar) at nodes inside
    W and vanish at nodes where supp(B) continues past W.  Nodes where only
    supp(A) continues impose nothing: such maps factor through A|_W.
    """
    _require_reduced_concrete(A, B)
    pts = dict(default_node_points(cfg))
    if points:
        pts.update(points)
    glue = gluing or {}
    supp_a, supp_b = set(A.support), set(B.support)
    W = sorted(supp_a & supp_b)
    if not W:
        return 0
    da, db = dict(A.deg), dict(B.deg)
    offset, width = {}, {}
    total = 0
    for c in W:
        m = db[c] - da[c]
        offset[c] = total
        width[c] = m + 1 if m >= 0 else 0
        total += width[c]
    if total == 0:
        return 0
    rows = []
    for a, b in cfg.edges:
        if a in W and b in W:
            row = [0] * total
            for k, v in enumerate(_monomials(width[a] - 1, pts[(a, b)]) if width[a] else []):
                row[offset[a] + k] = v
            lam = glue.get((a, b), 1)
            for k, v in enumerate(_monomials(width[b] - 1, pts[(b, a)]) if width[b] else []):
                row[offset[b] + k] = -lam * v
            rows.append(row)
        else:
            for inside, outside in ((a, b), (b, a)):
                if inside in W and outside in supp_b and outside not in W:
                    row = [0] * total
                    for k, v in enumerate(_monomials(width[inside] - 1, pts[(inside, outside)])
                                          if width[inside] else []):
                        row[offset[inside] + k] = v
                    rows.append(row)
    return total - rank(rows)


def forest_h0(cfg: CurveConfig, degrees: Mapping[Component, int]) -> int:
    """h0 of a line bundle with the given degrees on a forest of rational curves.

    Prunes leaves: a leaf of degree e >= 0 contributes e (sections vanishing at
    its node, values there extend freely); a negative leaf forces its neighbour
    to vanish at the node.
    """
    deg = dict(degrees)
    nbrs = {c: [n for n in cfg.neighbors[c] if n in deg] for c in deg}
    valence = {c: len(v) for c, v in nbrs.items()}
    stack = sorted((c for c, v in valence.items() if v <= 1), reverse=True)
    removed = set()
    total = 0
    while stack:
        leaf = stack.pop()
        live = [n for n in nbrs[leaf] if n not in removed]
        e = deg[leaf]
        if not live:
            total += max(e + 1, 0)
        elif e >= 0:
            total += e
        else:
            deg[live[0]] -= 1
        removed.add(leaf)
        for n in live:
            valence[n] -= 1
            if valence[n] == 1:
                stack.append(n)
    if len(removed) != len(deg):
        raise ShapeError("degree support is not a forest")
    return total


def closed_form_h0(cfg: CurveConfig, A: AtomicSheaf, B: AtomicSheaf) -> int:
    """dim Hom(A, B) = h0(W, B|_W (-boundary of W in supp B) - A|_W)."""
    _require_reduced_concrete(A, B)
    supp_b = set(B.support)
    W = set(A.support) & supp_b
    if not W:
        return 0
    da, db = dict(A.deg), dict(B.deg)
    degs = {}
    for c in W:
        cut = sum(1 for n in cfg.neighbors[c] if n in supp_b and n not in W)
        degs[c] = db[c] - da[c] - cut
    return forest_h0(cfg, degs)


# ---------------------------------------------------------------------------
# dimension triples

@dataclass(frozen=True)
class Span:
    lo: int
    hi: int

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def to_json(self):
        return self.lo if self.exact else [self.lo, self.hi]

    def __str__(self):
        return str(self.lo) if self.exact else f"[{self.lo},{self.hi}]"


@dataclass(frozen=True)
class HomDims:
    h0: Span
    h1: Span
    h2: Span
    chi: int
    triples: frozenset = field(repr=False, compare=False, default=frozenset())

    @property
    def determinate(self) -> bool:
        return self.h0.exact and self.h1.exact and self.h2.exact

    @classmethod
    def from_triples(cls, triples, chi: int) -> "HomDims":
        triples = frozenset(triples)
        if not triples:
            raise ExcTwistError("empty feasible set: inconsistent bounds")
        spans = [Span(min(t[i] for t in triples), max(t[i] for t in triples)) for i in range(3)]
        return cls(spans[0], spans[1], spans[2], chi, triples)

    @classmethod
    def exact(cls, h0: int, h1: int, h2: int) -> "HomDims":
        return cls.from_triples({(h0, h1, h2)}, h0 - h1 + h2)

    def values(self) -> Triple:
        if not self.determinate:
            raise ExcTwistError(f"indeterminate dimensions {self}")
        return self.h0.lo, self.h1.lo, self.h2.lo

    def to_json(self) -> dict:
        return {"h0": self.h0.to_json(), "h1": self.h1.to_json(), "h2": self.h2.to_json(),
                "chi": self.chi, "determinate": self.determinate}

    def __str__(self):
        return f"h0={self.h0} h1={self.h1} h2={self.h2} chi={self.chi}"


def _minkowski(sets: list[frozenset]) -> frozenset:
    out = {(0, 0, 0)}
    for s in sets:
        out = {(a[0] + b[0], a[1] + b[1], a[2] + b[2]) for a in out for b in s}
    return frozenset(out)


def _les(first: frozenset, last: frozenset) -> frozenset:
    """Feasible triples of the middle term of 0 -> first -> M -> last -> 0 in Ext.

    With connecting ranks r1 : H0(last) -> H1(first) and r2 : H1(last) -> H2(first),
    M = first + last - (r1, r1 + r2, r2).
    """
    out = set()
    for f in first:
        for l in last:
            for r1 in range(min(l[0], f[1]) + 1):
                for r2 in range(min(l[1], f[2]) + 1):
                    out.add((f[0] + l[0] - r1, f[1] + l[1] - r1 - r2, f[2] + l[2] - r2))
    return frozenset(out)


def presentations(cfg: CurveConfig, T: AtomicSheaf):
    """Restriction sequences ``0 -> K -> T -> Q -> 0`` with K, Q reduced.

    Q runs over reduced subcycles containing every doubled component once;
    ``Q`` is ``T|_Q`` and ``K = T(-Q)|_{Z-Q}`` so its degree on c is
    ``deg(c) - Q.C_c``.  Each side is returned as a list of reduced atoms
    (one per connected component).
    """
    thick = set(T.thick)
    rest = [c for c in T.support if c not in thick]
    degs = dict(T.deg)
    for bits in itertools.product((0, 1), repeat=len(rest)):
        q_set = thick | {c for c, b in zip(rest, bits) if b}
        k_set = thick | {c for c, b in zip(rest, bits) if not b}
        q_parts = [make_atom(cfg, comp, {c: degs[c] for c in comp})
                   for comp in components_of(cfg, q_set)]
        k_parts = []
        for comp in components_of(cfg, k_set):
            kd = {}
            for c in comp:
                q_dot = sum(1 for n in cfg.neighbors[c] if n in q_set)
                if c in q_set:
                    q_dot += -2
                kd[c] = degs[c] - q_dot
            k_parts.append(make_atom(cfg, comp, kd))
        yield k_parts, q_parts


def _reduced_triple(cfg: CurveConfig, A: AtomicSheaf, B: AtomicSheaf, h0_fn) -> Triple:
    h0 = h0_fn(cfg, A, B)
    h2 = h0_fn(cfg, B, A.twist_omega())
    x = class_chi(cfg, A.divisor_class(cfg), B.divisor_class(cfg))
    return h0, h0 + h2 - x, h2


def _feasible(cfg: CurveConfig, A: AtomicSheaf, B: AtomicSheaf, h0_fn, memo) -> frozenset:
    key = (A, B)
    if key in memo:
        return memo[key]
    if A.reduced and B.reduced:
        result = frozenset({_reduced_triple(cfg, A, B, h0_fn)})
    else:
        result = None
        if not A.reduced:
            for k_parts, q_parts in presentations(cfg, A):
                # Hom(-, B) reverses the sequence: Q comes first.
                first = _minkowski([_feasible(cfg, q, B, h0_fn, memo) for q in q_parts])
                last = _minkowski([_feasible(cfg, k, B, h0_fn, memo) for k in k_parts])
                cand = _les(first, last)
                result = cand if result is None else result & cand
        if not B.reduced:
            for k_parts, q_parts in presentations(cfg, B):
                first = _minkowski([_feasible(cfg, A, k, h0_fn, memo) for k in k_parts])
                last = _minkowski([_feasible(cfg, A, q, h0_fn, memo) for q in q_parts])
                cand = _les(first, last)
                result = cand if result is None else result & cand
    memo[key] = result
    return result


def hom_dims(cfg: CurveConfig, A: AtomicSheaf, B: AtomicSheaf, *, use_oracle: bool = False) -> HomDims:
    """Dimensions of Ext^i(A, B) for i = 0, 1, 2.

    Exact for reduced atoms.  With doubled components the result is the set
    of triples compatible with every restriction sequence of either side and
    with Serre duality ``h^i(A, B) = h^{2-i}(B, A x omega)``.
    """
    for a in (A, B):
        if a.symbolic:
            raise SymbolicDegreesError("hom_dims needs concrete degrees")
    h0_fn = oracle_h0 if use_oracle else closed_form_h0
    memo: dict = {}
    feas = _feasible(cfg, A, B, h0_fn, memo)
    if not (A.reduced and B.reduced):
        dual = _feasible(cfg, B, A.twist_omega(), h0_fn, memo)
        feas = feas & frozenset((t[2], t[1], t[0]) for t in dual)
    x = class_chi(cfg, A.divisor_class(cfg), B.divisor_class(cfg))
    return HomDims.from_triples(feas, x)


def direct_sum_dims(parts: list[HomDims]) -> HomDims:
    return HomDims.from_triples(_minkowski([p.triples for p in parts]), sum(p.chi for p in parts))


# ---------------------------------------------------------------------------

def mukai_check(g1g1: HomDims, g2g2: HomDims, g1g2: HomDims, g2g1: HomDims, rr: HomDims) -> bool:
    """Check the rigid-extension identities for ``0 -> G2 -> R -> G1 -> 0``.

    Raises :class:`MukaiHypothesisError` unless h1(R,R) = h0(G2,G1) = h2(G1,G2) = 0.
    Returns False if any identity fails.
    """
    hyp = [("h1(R,R)", rr.h1), ("h0(G2,G1)", g2g1.h0), ("h2(G1,G2)", g1g2.h2)]
    for label, span in hyp:
        if span != Span(0, 0):
            raise MukaiHypothesisError(f"{label} = {span}, expected 0")
    for d in (g1g1, g2g2, g1g2, g2g1, rr):
        if not d.determinate:
            return False
    ok = g1g1.h1.lo == 0 and g2g2.h1.lo == 0
    ok &= rr.h0.lo == g1g1.h0.lo + g2g2.h0.lo + g1g2.chi
    ok &= rr.h2.lo == g1g1.h2.lo + g2g2.h2.lo + g2g1.chi
    ok &= g1g2.h1.lo <= g1g1.h0.lo + g2g2.h0.lo - 1
    return bool(ok)
