"""The f-polynomial, its zero locus, the six-case classifier and class enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .config import RELAXED, CurveConfig
from .errors import RelaxedConfigError
from .lattice import DivisorClass

MAX_CASE_LENGTH = 6


def _check(r: Sequence[int], k: int):
    if not r:
        raise ValueError("empty multiplicity vector")
    if any(x < 1 for x in r):
        raise ValueError(f"entries must be positive: {tuple(r)}")
    if not 1 <= k <= len(r):
        raise ValueError(f"k={k} out of range 1..{len(r)}")


def f_value(r: Sequence[int], k: int) -> int:
    """sum r_i^2 - sum r_i r_{i+1} - r_k."""
    _check(r, k)
    return (sum(x * x for x in r)
            - sum(a * b for a, b in zip(r, r[1:]))
            - r[k - 1])


def equality_conditions(r: Sequence[int], k: int) -> bool:
    """Ends equal 1; steps of 0 or +1 up to position k, then 0 or -1."""
    _check(r, k)
    if r[0] != 1 or r[-1] != 1:
        return False
    for i in range(1, len(r)):  # 1-based i, comparing r_i and r_{i+1}
        step = r[i] - r[i - 1]
        if i < k and step not in (0, 1):
            return False
        if i >= k and step not in (0, -1):
            return False
    return True


@dataclass(frozen=True)
class CaseTag:
    case: int
    reversed: bool


def _matches(case: int, r: tuple[int, ...], k: int) -> bool:
    n = len(r)
    if case == 1:
        return k == n == 1 and r[0] == 1
    if case == 2:
        return k >= 2 and r[0] == r[1] == 1
    if case == 3:
        return k == 2 and n >= 3 and r[:3] == (1, 2, 1)
    if case == 4:
        return k >= 3 and r[:3] == (1, 2, 2)
    if case == 5:
        return k == 3 and r == (1, 2, 3, 2, 1)
    if case == 6:
        return k == 4 and r == (1, 2, 3, 3, 2, 1)
    return False


def matching_cases(r: Sequence[int], k: int) -> list[CaseTag]:
    """Every (case, orientation) that describes ``(r, k)``."""
    r = tuple(r)
    out = []
    for case in range(1, 7):
        if _matches(case, r, k):
            out.append(CaseTag(case, False))
        if _matches(case, r[::-1], len(r) + 1 - k):
            out.append(CaseTag(case, True))
    return out


def classify_case(r: Sequence[int], k: int) -> CaseTag:
    """First matching case, trying the given orientation before the reversed one."""
    _check(r, k)
    if len(r) > MAX_CASE_LENGTH:
        raise ValueError(f"chains longer than {MAX_CASE_LENGTH} are out of scope")
    if f_value(r, k) != 0:
        raise ValueError(f"f{tuple(r)};{k} != 0")
    tags = matching_cases(r, k)
    if not tags:  # pragma: no cover - exhaustiveness is tested
        raise AssertionError(f"no case for {tuple(r)}, k={k}")
    return tags[0]


def equality_vectors(n: int, k: int) -> list[tuple[int, ...]]:
    """All length-n vectors with f(r; k) = 0, lexicographically."""
    out = []
    for steps in itertools.product((0, 1), repeat=n - 1):
        r = [1]
        for i, s in enumerate(steps, start=1):
            r.append(r[-1] + s if i < k else r[-1] - s)
        if r[-1] == 1 and min(r) >= 1:
            out.append(tuple(r))
    return sorted(out)


def chain_options(n: int, k: int | None) -> list[tuple[int, ...]]:
    """Multiplicity vectors one chain may carry in an exceptional class."""
    opts = [(0,) * n]
    if k is None:
        return opts
    for lo in range(1, k + 1):
        for hi in range(k, n + 1):
            for core in equality_vectors(hi - lo + 1, k - lo + 1):
                opts.append((0,) * (lo - 1) + core + (0,) * (n - hi))
    return sorted(opts)


def enumerate_exceptional_classes(cfg: CurveConfig) -> list[DivisorClass]:
    if cfg.mode == RELAXED:
        raise RelaxedConfigError("enumeration requires a strict configuration")
    per_chain = [chain_options(n, cfg.attach_of(j))
                 for j, n in enumerate(cfg.chain_lengths, start=1)]
    return sorted(DivisorClass(1, combo) for combo in itertools.product(*per_chain))


def chain_support(r: Sequence[int]) -> tuple[int, int] | None:
    """1-based (lo, hi) of the nonzero run, None if zero; ValueError if split."""
    idx = [i for i, v in enumerate(r, start=1) if v]
    if not idx:
        return None
    if idx[-1] - idx[0] + 1 != len(idx):
        raise ValueError(f"support of {tuple(r)} is not contiguous")
    return idx[0], idx[-1]
