"""Curve configurations: chains of (-2)-curves glued to a single (-1)-curve D.

Components are addressed as ``(j, i)`` tuples: ``D == (0, 0)`` and ``(j, i)``
is the i-th curve of the j-th chain, both 1-based.  Tuples sort
lexicographically, so D always comes first and every listing derived from a
config is deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

from .errors import ConfigError, UnknownComponentError

Component = tuple[int, int]
D: Component = (0, 0)

STRICT = "strict"
RELAXED = "relaxed"
MAX_MINUS_TWO = 6


@dataclass(frozen=True)
class CurveConfig:
    chain_lengths: tuple[int, ...]
    attachments: tuple[tuple[int, int], ...]
    mode: str = STRICT
    surface_degree: Optional[int] = None

    @cached_property
    def components(self) -> tuple[Component, ...]:
        comps = [D]
        for j, n in enumerate(self.chain_lengths, start=1):
            comps.extend((j, i) for i in range(1, n + 1))
        return tuple(comps)

    @cached_property
    def index(self) -> dict[Component, int]:
        return {c: pos for pos, c in enumerate(self.components)}

    @cached_property
    def edges(self) -> tuple[tuple[Component, Component], ...]:
        out = []
        for j, n in enumerate(self.chain_lengths, start=1):
            out.extend(((j, i), (j, i + 1)) for i in range(1, n))
        out.extend((D, (j, k)) for j, k in self.attachments)
        return tuple(sorted(out))

    @cached_property
    def neighbors(self) -> dict[Component, tuple[Component, ...]]:
        nb: dict[Component, list[Component]] = {c: [] for c in self.components}
        for a, b in self.edges:
            nb[a].append(b)
            nb[b].append(a)
        return {c: tuple(sorted(v)) for c, v in nb.items()}

    @cached_property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        size = len(self.components)
        rows = [[0] * size for _ in range(size)]
        for c, pos in self.index.items():
            rows[pos][pos] = -1 if c == D else -2
        for a, b in self.edges:
            rows[self.index[a]][self.index[b]] += 1
            rows[self.index[b]][self.index[a]] += 1
        return tuple(tuple(r) for r in rows)

    @cached_property
    def canonical_row(self) -> tuple[int, ...]:
        """K.C for every component: -1 on D, 0 on (-2)-curves."""
        return tuple(-1 if c == D else 0 for c in self.components)

    @property
    def num_chains(self) -> int:
        return len(self.chain_lengths)

    @cached_property
    def _attach_table(self) -> dict[int, tuple[int, ...]]:
        return {j: tuple(sorted(k for jj, k in self.attachments if jj == j))
                for j in range(1, len(self.chain_lengths) + 1)}

    def attach_positions(self, j: int) -> tuple[int, ...]:
        return self._attach_table.get(j, ())

    def attach_of(self, j: int) -> Optional[int]:
        """The unique attachment position of chain j (strict shape) or None."""
        pos = self.attach_positions(j)
        if len(pos) > 1:
            raise ConfigError(f"chain {j} has several attachments {pos}")
        return pos[0] if pos else None

    def check(self, c: Component) -> Component:
        if c not in self.index:
            raise UnknownComponentError(c)
        return c

    def name(self, c: Component) -> str:
        self.check(c)
        if c == D:
            return "D"
        j, i = c
        return f"C{i}" if self.num_chains == 1 else f"C{j}_{i}"

    def parse(self, name: str) -> Component:
        """Inverse of :meth:`name`; ``Ci`` is accepted only for one-chain configs."""
        name = name.strip()
        if name == "D":
            return D
        m = re.fullmatch(r"C(\d+)_(\d+)", name)
        if m:
            return self.check((int(m.group(1)), int(m.group(2))))
        m = re.fullmatch(r"C(\d+)", name)
        if m:
            if self.num_chains != 1:
                raise UnknownComponentError(
                    f"{name!r} is ambiguous with {self.num_chains} chains; use Cj_i")
            return self.check((1, int(m.group(1))))
        raise UnknownComponentError(name)

    def to_json(self) -> dict:
        chains = [{"length": n, "attach": list(self.attach_positions(j))}
                  for j, n in enumerate(self.chain_lengths, start=1)]
        doc: dict = {"mode": self.mode, "chains": chains}
        if self.surface_degree is not None:
            doc["degree"] = self.surface_degree
        return doc


def build_config(chain_lengths: Iterable[int],
                 attachments: Iterable[tuple[int, int]] = (),
                 mode: str = STRICT,
                 surface_degree: Optional[int] = None) -> CurveConfig:
    """Build a configuration.

    ``attachments`` holds 1-based ``(chain, position)`` pairs where D meets
    the chain.  Count rules (at most six (-2)-curves, one attachment per
    chain, ...) are not enforced here; see :func:`validate`.
    """
    lengths = tuple(int(n) for n in chain_lengths)
    if mode not in (STRICT, RELAXED):
        raise ConfigError(f"unknown mode {mode!r}")
    for j, n in enumerate(lengths, start=1):
        if n < 1:
            raise ConfigError(f"chain {j} has length {n} < 1")
    seen = set()
    for j, k in attachments:
        if not 1 <= j <= len(lengths):
            raise ConfigError(f"attachment to unknown chain {j}")
        if not 1 <= k <= lengths[j - 1]:
            raise ConfigError(f"attachment index {k} out of range for chain {j}")
        if (j, k) in seen:
            raise ConfigError(f"duplicate attachment to C{j}_{k}")
        seen.add((j, k))
    return CurveConfig(lengths, tuple(sorted(seen)), mode, surface_degree)


def config_from_json(doc: dict) -> CurveConfig:
    """``{"mode": "strict", "chains": [{"length": 3, "attach": [2]}]}``"""
    try:
        chains = doc.get("chains", [])
        lengths = [int(ch["length"]) for ch in chains]
        attachments = [(j, int(k)) for j, ch in enumerate(chains, start=1)
                       for k in ch.get("attach", [])]
        mode = doc.get("mode", STRICT)
        degree = doc.get("degree")
    except (AttributeError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config document: {exc}") from exc
    return build_config(lengths, attachments, mode,
                        None if degree is None else int(degree))


@dataclass(frozen=True)
class Violation:
    rule: str
    message: str = field(compare=False, default="")


def _forest_ok(cfg: CurveConfig) -> bool:
    parent = {c: c for c in cfg.components}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    for a, b in cfg.edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def validate(cfg: CurveConfig) -> list[Violation]:
    """Return the violated rules (empty list means valid)."""
    out = []
    for j, n in enumerate(cfg.chain_lengths, start=1):
        if n < 1:
            out.append(Violation("chain-length", f"chain {j} is empty"))
    if cfg.mode == RELAXED:
        return out
    total = sum(cfg.chain_lengths)
    limit = MAX_MINUS_TWO
    if cfg.surface_degree is not None:
        if cfg.surface_degree <= 2:
            out.append(Violation("degree>2", f"surface degree {cfg.surface_degree} <= 2"))
        limit = min(limit, 9 - cfg.surface_degree)
    if total > limit:
        out.append(Violation("total<=6", f"{total} (-2)-curves exceed {limit}"))
    for j, n in enumerate(cfg.chain_lengths, start=1):
        if n > MAX_MINUS_TWO:
            out.append(Violation("chain<=6", f"chain {j} has length {n}"))
        if len(cfg.attach_positions(j)) > 1:
            out.append(Violation("attachment<=1-per-chain",
                                 f"D meets chain {j} at {cfg.attach_positions(j)}"))
    if not _forest_ok(cfg):
        out.append(Violation("tree", "component graph contains a cycle"))
    return out


def intersection(cfg: CurveConfig, a: Component, b: Component) -> int:
    cfg.check(a)
    cfg.check(b)
    return cfg.matrix[cfg.index[a]][cfg.index[b]]
