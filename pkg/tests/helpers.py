"""Shared test fixtures and generators."""

from __future__ import annotations

import itertools
from typing import Iterator

from exctwist.config import CurveConfig, build_config


def C(i: int, j: int = 1) -> tuple[int, int]:
    return (j, i)


def _partitions(total: int, largest: int) -> Iterator[tuple[int, ...]]:
    if total == 0:
        yield ()
        return
    for first in range(min(total, largest), 0, -1):
        for rest in _partitions(total - first, first):
            yield (first,) + rest


def strict_configs(max_total: int = 6) -> Iterator[CurveConfig]:
    """Every strict configuration with at most ``max_total`` (-2)-curves, up to
    reordering chains: each chain is unattached or meets D at one position."""
    for total in range(max_total + 1):
        for lengths in _partitions(total, total):
            choices = [tuple(range(0, n + 1)) for n in lengths]
            seen = set()
            for pick in itertools.product(*choices):
                key = tuple(sorted(zip(lengths, pick)))
                if key in seen:
                    continue
                seen.add(key)
                attachments = [(j, k) for j, k in enumerate(pick, start=1) if k]
                yield build_config(lengths, attachments)
