"""Peel spherical line bundles off an exceptional class until only D is left.

A certificate lists twist supports outermost-first: ``twists[0]`` is the
first bundle peeled from E and the last entry is applied directly to the
seed ``O_D(d)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .catalog import split_supports
from .cohom import AtomicSheaf, hom_dims, make_atom
from .config import RELAXED, Component, CurveConfig, D, validate
from .errors import ExcTwistError, PreconditionError, RelaxedConfigError, ShapeError
from .factorization import extension_atom
from .lattice import (DivisorClass, chi, is_numerically_exceptional,
                      is_numerically_spherical, pair, twist_class)
from .rigidity import chain_support, equality_conditions, matching_cases

Support = tuple[Component, ...]

# Supports of L in the normalized chain frame, per case of the classifier.
_CASE_SUPPORTS: dict[int, tuple[tuple[int, ...], ...]] = {
    1: ((1,),),
    2: ((1,),),
    3: split_supports("12"),
    4: split_supports("12"),
    5: split_supports("12321"),
    6: split_supports("123321"),
}


def _require_strict(cfg: CurveConfig):
    if cfg.mode == RELAXED:
        raise RelaxedConfigError("the reducer needs a strict configuration")


def peel_options(cfg: CurveConfig, e: DivisorClass) -> list[Support]:
    """Spherical supports L with e.L = -1 that the case analysis allows.

    Besides the per-case supports, a chain carrying multiplicity one on its
    whole support offers that support itself.
    """
    _require_strict(cfg)
    if not is_numerically_exceptional(cfg, e):
        raise PreconditionError(f"{e.describe(cfg)} is not numerically exceptional")
    if e.chain_total() == 0:
        raise PreconditionError("nothing to peel: the class is D")
    options: set[Support] = set()
    for j, r in enumerate(e.chains, start=1):
        span = chain_support(r)
        if span is None:
            continue
        lo, hi = span
        k = cfg.attach_of(j)
        if k is None or not lo <= k <= hi:
            raise PreconditionError(f"chain {j} support is not attached to D")
        core, kk = r[lo - 1:hi], k - lo + 1
        if not equality_conditions(core, kk):
            raise PreconditionError(f"chain {j} has f > 0")
        n = len(core)
        if set(core) == {1}:
            # restriction of E to a reduced chain support is a spherical line bundle
            options.add(tuple((j, i) for i in range(lo, hi + 1)))
        for tag in matching_cases(core, kk):
            for local in _CASE_SUPPORTS[tag.case]:
                frame = [n + 1 - i if tag.reversed else i for i in local]
                options.add(tuple(sorted((j, lo - 1 + i) for i in frame)))
    out = sorted(options, key=lambda supp: (len(supp), supp))
    for supp in out:
        s = DivisorClass.from_components(cfg, supp)
        if pair(cfg, e, s) != -1:  # pragma: no cover - guarded by tests
            raise AssertionError(f"option {supp} pairs to {pair(cfg, e, s)}")
    return out


def peel(cfg: CurveConfig, e: DivisorClass, support: Sequence[Component]) -> DivisorClass:
    s = DivisorClass.from_components(cfg, support)
    if pair(cfg, e, s) != -1:
        raise PreconditionError(f"e.L = {pair(cfg, e, s)}, expected -1")
    out = e - s
    if pair(cfg, out, out) != -1:  # pragma: no cover - follows from the pairing
        raise AssertionError("peeled class is not exceptional")
    return out


@dataclass
class Node:
    cls: DivisorClass
    children: list[tuple[Support, "Node"]] = field(default_factory=list)

    def branches(self) -> Iterator[list[Support]]:
        if not self.children:
            yield []
            return
        for supp, child in self.children:
            for rest in child.branches():
                yield [supp] + rest

    def count(self, _memo=None) -> int:
        memo = {} if _memo is None else _memo
        key = id(self)
        if key not in memo:
            memo[key] = 1 if not self.children else sum(c.count(memo) for _, c in self.children)
        return memo[key]

    def nodes(self) -> Iterator["Node"]:
        seen, stack = set(), [self]
        while stack:
            n = stack.pop()
            if id(n) in seen:
                continue
            seen.add(id(n))
            yield n
            stack.extend(c for _, c in n.children)


@dataclass(frozen=True)
class TwistCertificate:
    twists: tuple[AtomicSheaf, ...]
    seed_degree: Optional[int] = None

    def supports(self) -> list[Support]:
        return [t.support for t in self.twists]

    def to_json(self, cfg: CurveConfig) -> dict:
        seed = {} if self.seed_degree is None else {"degree": self.seed_degree}
        return {"seed": seed, "twists": [t.to_json(cfg) for t in self.twists]}


def certificate_from_json(cfg: CurveConfig, doc: dict) -> TwistCertificate:
    from .cohom import atom_from_json
    try:
        seed = doc.get("seed") or {}
        degree = seed.get("degree")
        twists = tuple(atom_from_json(cfg, t) for t in doc["twists"])
    except (AttributeError, KeyError, TypeError) as exc:
        raise ShapeError(f"malformed certificate document: {exc}") from exc
    return TwistCertificate(twists, None if degree is None else int(degree))


def certificate_for(cfg: CurveConfig, branch: Sequence[Support]) -> TwistCertificate:
    return TwistCertificate(tuple(make_atom(cfg, s) for s in branch))


def reduction_tree(cfg: CurveConfig, e: DivisorClass) -> Node:
    """Every case-consistent peel sequence; identical classes share one node."""
    _require_strict(cfg)
    memo: dict[DivisorClass, Node] = {}

    def build(cls: DivisorClass) -> Node:
        if cls in memo:
            return memo[cls]
        node = Node(cls)
        if cls.chain_total():
            for supp in peel_options(cfg, cls):
                node.children.append((supp, build(peel(cfg, cls, supp))))
        memo[cls] = node
        return node

    return build(e)


def reduce_class(cfg: CurveConfig, e: DivisorClass, strategy: str = "first"):
    """``first``: canonical certificate (fewest curves, then lexicographically
    smallest support, at every step).
    ``all``: the full reduction tree."""
    if strategy == "all":
        return reduction_tree(cfg, e)
    if strategy != "first":
        raise ValueError(f"unknown strategy {strategy!r}")
    _require_strict(cfg)
    branch, cls = [], e
    while cls.chain_total():
        supp = peel_options(cfg, cls)[0]
        branch.append(supp)
        cls = peel(cfg, cls, supp)
    return certificate_for(cfg, branch)


# ---------------------------------------------------------------------------
# verification

@dataclass
class Check:
    step: str
    name: str
    ok: Optional[bool]  # None: not checked
    detail: str = ""

    def to_json(self) -> dict:
        status = "unchecked" if self.ok is None else ("pass" if self.ok else "fail")
        return {"step": self.step, "check": self.name, "status": status, "detail": self.detail}


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok is not False for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.ok is False]

    def add(self, step, name, ok, detail=""):
        self.checks.append(Check(step, name, ok, detail))

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_json() for c in self.checks]}


def _zero(span) -> bool:
    return span.lo == span.hi == 0


def verify_certificate(cfg: CurveConfig, e: DivisorClass, cert: TwistCertificate,
                       *, generated: bool = False) -> Report:
    """Check a certificate step by step, from the seed outwards.

    Class level: each twist is spherical, pairs with the running class to 1
    (chi(L, E') = -1), the twist adds exactly [L], and the final class is e.
    When the seed degree and every twist degree are concrete, the sheaf-level
    hypotheses are checked as well: h0(E', L) = 0, h0(L, E') = 0 and
    h1(L, E') = 1, building E = T_L(E') as an atom while possible.
    """
    rep = Report()
    sheaf_level = cert.seed_degree is not None and all(not t.symbolic for t in cert.twists)
    current = DivisorClass.from_components(cfg, [D])
    sheaf: Optional[AtomicSheaf] = make_atom(cfg, [D], {D: cert.seed_degree}) if sheaf_level else None
    n = len(cert.twists)
    for pos in range(n - 1, -1, -1):
        L = cert.twists[pos]
        step = f"L{pos + 1}"
        try:
            s = L.divisor_class(cfg)
        except ExcTwistError as exc:
            rep.add(step, "shape", False, str(exc))
            return rep
        spherical = L.reduced and is_numerically_spherical(cfg, s)
        rep.add(step, "spherical", spherical, s.describe(cfg))
        x = chi(cfg, s, current)
        rep.add(step, "chi(L,E')=-1", x == -1, f"chi = {x}")
        if spherical:
            nxt = twist_class(cfg, current, s)
            rep.add(step, "class additivity", nxt == current + s, nxt.describe(cfg))
        else:
            nxt = current + s
        if nxt.d == 1:
            rep.add(step, "intermediate exceptional", pair(cfg, nxt, nxt) == -1,
                    f"e'^2 = {pair(cfg, nxt, nxt)}")
        if not spherical or x != -1:
            sheaf = None
        if sheaf_level:
            if sheaf is None:
                rep.add(step, "h0(E',L)=0", None, "previous sheaf not representable as an atom")
            else:
                dims = hom_dims(cfg, L, sheaf)
                back = hom_dims(cfg, sheaf, L)
                rep.add(step, "h0(E',L)=0", _zero(back.h0), f"h0 = {back.h0}")
                rep.add(step, "h0(L,E')=0", _zero(dims.h0), f"h0 = {dims.h0}")
                rep.add(step, "h1(L,E')=1", dims.h1.lo == dims.h1.hi == 1, f"h1 = {dims.h1}")
                try:
                    sheaf = extension_atom(cfg, sheaf, L)
                except ExcTwistError:
                    sheaf = None
        elif not generated:
            rep.add(step, "h0(E',L)=0", None, "no sheaf data")
        current = nxt
    telescoped = DivisorClass.from_components(cfg, [D])
    for t in cert.twists:
        telescoped = telescoped + t.divisor_class(cfg)
    rep.add("final", "telescoping", telescoped == e and current == e,
            f"{telescoped.describe(cfg)} vs {e.describe(cfg)}")
    if generated:
        rep.add("final", "h0(E',L)=0", None, "guaranteed by the case construction")
    if sheaf_level:
        if sheaf is None:
            rep.add("final", "E exceptional", None, "E is not representable as an atom")
        else:
            dims = hom_dims(cfg, sheaf, sheaf)
            ok = dims.values() == (1, 0, 0) if dims.determinate else None
            rep.add("final", "E exceptional", ok, f"{sheaf.describe(cfg)}: {dims}")
    return rep


def strict_ready(cfg: CurveConfig) -> bool:
    return cfg.mode != RELAXED and not validate(cfg)
