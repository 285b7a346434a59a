"""First Chern classes of torsion sheaves and their pairings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .config import Component, CurveConfig, D
from .errors import NotSphericalError, ShapeError


@dataclass(frozen=True, order=True)
class DivisorClass:
    """``d*D + sum_j sum_i chains[j-1][i-1] * C^j_i``."""

    d: int
    chains: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "chains", tuple(tuple(int(x) for x in ch) for ch in self.chains))

    @classmethod
    def zero(cls, cfg: CurveConfig) -> "DivisorClass":
        return cls(0, tuple((0,) * n for n in cfg.chain_lengths))

    @classmethod
    def from_components(cls, cfg: CurveConfig, coeffs: Mapping[Component, int] | Iterable[Component],
                        d: int | None = None) -> "DivisorClass":
        if not isinstance(coeffs, Mapping):
            coeffs = {c: 1 for c in coeffs}
        chains = [[0] * n for n in cfg.chain_lengths]
        dd = 0
        for c, v in coeffs.items():
            cfg.check(c)
            if c == D:
                dd += v
            else:
                chains[c[0] - 1][c[1] - 1] += v
        if d is not None:
            dd = d
        return cls(dd, tuple(tuple(ch) for ch in chains))

    def coeff(self, c: Component) -> int:
        if c == D:
            return self.d
        return self.chains[c[0] - 1][c[1] - 1]

    def items(self):
        """Nonzero ``(component, coefficient)`` pairs in component order."""
        if self.d:
            yield D, self.d
        for j, ch in enumerate(self.chains, start=1):
            for i, v in enumerate(ch, start=1):
                if v:
                    yield (j, i), v

    def support(self) -> tuple[Component, ...]:
        return tuple(c for c, _ in self.items())

    def chain_total(self) -> int:
        return sum(sum(ch) for ch in self.chains)

    def _combine(self, other: "DivisorClass", sign: int) -> "DivisorClass":
        if [len(c) for c in self.chains] != [len(c) for c in other.chains]:
            raise ShapeError("class shapes differ")
        return DivisorClass(self.d + sign * other.d,
                            tuple(tuple(x + sign * y for x, y in zip(a, b))
                                  for a, b in zip(self.chains, other.chains)))

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return self._combine(other, 1)

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self._combine(other, -1)

    def __neg__(self) -> "DivisorClass":
        return self.scale(-1)

    def scale(self, k: int) -> "DivisorClass":
        return DivisorClass(k * self.d, tuple(tuple(k * x for x in ch) for ch in self.chains))

    def to_json(self) -> dict:
        return {"d": self.d, "chains": [list(ch) for ch in self.chains]}

    @classmethod
    def from_json(cls, doc: Mapping) -> "DivisorClass":
        try:
            return cls(int(doc.get("d", 0)), tuple(tuple(int(x) for x in ch) for ch in doc["chains"]))
        except (AttributeError, KeyError, TypeError, ValueError) as exc:
            raise ShapeError(f"malformed class document: {exc}") from exc

    def describe(self, cfg: CurveConfig) -> str:
        terms = []
        for c, v in self.items():
            name = cfg.name(c)
            terms.append(name if v == 1 else f"{v}{name}")
        return "+".join(terms) if terms else "0"


def check_shape(cfg: CurveConfig, a: DivisorClass) -> DivisorClass:
    if tuple(len(ch) for ch in a.chains) != cfg.chain_lengths:
        raise ShapeError(f"class chain shape {[len(c) for c in a.chains]} "
                         f"does not match config {list(cfg.chain_lengths)}")
    return a


def pair(cfg: CurveConfig, a: DivisorClass, b: DivisorClass) -> int:
    """Intersection number a.b."""
    check_shape(cfg, a)
    check_shape(cfg, b)
    total = -a.d * b.d
    for j, (ra, rb) in enumerate(zip(a.chains, b.chains), start=1):
        n = len(ra)
        for i in range(n):
            total -= 2 * ra[i] * rb[i]
            if i + 1 < n:
                total += ra[i] * rb[i + 1] + ra[i + 1] * rb[i]
        for k in cfg.attach_positions(j):
            total += a.d * rb[k - 1] + b.d * ra[k - 1]
    return total


def chi(cfg: CurveConfig, a: DivisorClass, b: DivisorClass) -> int:
    """Euler pairing of two torsion sheaves: chi(a, b) = -a.b."""
    return -pair(cfg, a, b)


def is_numerically_exceptional(cfg: CurveConfig, e: DivisorClass) -> bool:
    if e.d != 1:
        raise ShapeError(f"exceptional classes must contain D exactly once (got d={e.d})")
    return pair(cfg, e, e) == -1


def spherical_run(s: DivisorClass) -> tuple[int, int, int] | None:
    """``(chain, lo, hi)`` if s is a reduced contiguous run on one chain, else None."""
    if s.d != 0:
        return None
    found = None
    for j, ch in enumerate(s.chains, start=1):
        idx = [i for i, v in enumerate(ch, start=1) if v]
        if not idx:
            continue
        if found is not None:
            return None
        if any(ch[i - 1] != 1 for i in idx) or idx[-1] - idx[0] + 1 != len(idx):
            return None
        found = (j, idx[0], idx[-1])
    return found


def is_numerically_spherical(cfg: CurveConfig, s: DivisorClass) -> bool:
    check_shape(cfg, s)
    return spherical_run(s) is not None and pair(cfg, s, s) == -2


def twist_class(cfg: CurveConfig, e: DivisorClass, s: DivisorClass) -> DivisorClass:
    """Class of T_S(E): e - chi(s, e) * s."""
    if not is_numerically_spherical(cfg, s):
        raise NotSphericalError(s.describe(cfg))
    return e - s.scale(chi(cfg, s, e))
