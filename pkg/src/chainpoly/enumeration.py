"""Enumeration of subset chains ``A_1 <= ... <= A_k`` of an ``n``-element set.

A chain is encoded by a level per element: element ``a`` first enters the
chain at ``A_level(a)``, or never.  Level assignments are in bijection with
chains, so there are ``(k+1)**n`` of them.  The vectorized enumerator splits
the elements into a low block, enumerated once as a numpy array, and a high
block whose level digits index the work partitions.
"""

from __future__ import annotations

import itertools
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import ContractViolation, SizeCapExceeded

__all__ = [
    "SubsetChain",
    "iter_chains",
    "chain_count",
    "default_max_visits",
    "check_budget",
    "histogram_chains",
    "count_work",
]

DEFAULT_MAX_VISITS = 10**9
_BLOCK_TARGET = 1 << 16
_DENSE_KEYS = 1 << 22


@dataclass(frozen=True)
class SubsetChain:
    """Per-element entry levels; ``None`` means the element is not in ``A_k``."""

    k: int
    levels: tuple[int | None, ...]

    def __post_init__(self):
        for lv in self.levels:
            if lv is not None and not 1 <= lv <= self.k:
                raise ContractViolation(f"level {lv} outside 1..{self.k}")

    def sets(self) -> tuple[int, ...]:
        """Bitsets ``(A_1, ..., A_k)``."""
        out = [0] * self.k
        for a, lv in enumerate(self.levels):
            if lv is not None:
                for i in range(lv - 1, self.k):
                    out[i] |= 1 << a
        return tuple(out)

    @classmethod
    def from_sets(cls, sets: Sequence[int], n: int) -> "SubsetChain":
        k = len(sets)
        for lo, hi in zip(sets, sets[1:]):
            if lo & ~hi:
                raise ContractViolation("sets are not nested")
        levels = []
        for a in range(n):
            lv = next((i + 1 for i, s in enumerate(sets) if s >> a & 1), None)
            levels.append(lv)
        if any(s >> n for s in sets):
            raise ContractViolation(f"set wider than {n} elements")
        return cls(k, tuple(levels))


def chain_count(n: int, k: int) -> int:
    return (k + 1) ** n


def iter_chains(n: int, k: int) -> Iterator[SubsetChain]:
    """All chains, in mixed-radix order of their level assignments."""
    if k < 1:
        raise ContractViolation("chain length k must be >= 1")
    choices = list(range(1, k + 1)) + [None]
    for levels in itertools.product(choices, repeat=n):
        yield SubsetChain(k, levels)


def default_max_visits() -> int:
    env = os.environ.get("CHAINPOLY_MAX_VISITS")
    if env:
        try:
            return int(float(env))
        except ValueError:
            raise ContractViolation(f"CHAINPOLY_MAX_VISITS={env!r} is not a number") from None
    return DEFAULT_MAX_VISITS


def check_budget(n: int, k: int, max_visits: int | None = None) -> int:
    cap = default_max_visits() if max_visits is None else max_visits
    need = chain_count(n, k)
    if need > cap:
        raise SizeCapExceeded(
            f"enumerating (k+1)**n = {k + 1}**{n} = {need} chains exceeds the cap of "
            f"{cap} visits; raise --max-visits / CHAINPOLY_MAX_VISITS to at least {need}")
    return need


class _WorkCounter:
    def __init__(self):
        self.visits = 0


_counters: list[_WorkCounter] = []
_counter_lock = threading.Lock()


@contextmanager
def count_work():
    """Collect the number of chain visits performed inside the block."""
    c = _WorkCounter()
    with _counter_lock:
        _counters.append(c)
    try:
        yield c
    finally:
        with _counter_lock:
            _counters.remove(c)


def _record(visits: int) -> None:
    with _counter_lock:
        for c in _counters:
            c.visits += visits


def _low_masks(low: int, k: int) -> list[np.ndarray]:
    """Masks of ``A_1..A_k`` restricted to the first ``low`` elements, one entry per assignment."""
    base = k + 1
    idx = np.arange(base ** low, dtype=np.int64)
    masks = [np.zeros_like(idx) for _ in range(k)]
    for a in range(low):
        digit = idx % base
        idx //= base
        for i in range(k):
            # digit d means level d+1; level k+1 is "never"
            masks[i] |= (digit <= i).astype(np.int64) << a
    return masks


def histogram_chains(n: int, k: int, codes: Sequence[np.ndarray], radices: Sequence[int],
                     signed: bool, jobs: int = 1, max_visits: int | None = None):
    """Signed histogram of per-level codes over every chain.

    ``codes[i][S]`` is the code of subset ``S`` at level ``i+1`` (in
    ``range(radices[i])``).  Each chain contributes to the key
    ``sum(codes[i][A_i] * stride_i)`` with weight ``(-1)**sum|A_i|`` when
    ``signed`` and ``1`` otherwise.  Returns a dict ``{key_tuple: count}``
    with zero counts dropped; the result is independent of ``jobs``.
    """
    if k < 1:
        raise ContractViolation("chain length k must be >= 1")
    if len(codes) != k or len(radices) != k:
        raise ContractViolation("need one code table and radix per level")
    visits = check_budget(n, k, max_visits)
    base = k + 1
    low = n
    while low > 0 and base ** low > _BLOCK_TARGET:
        low -= 1
    high = n - low
    low_masks = _low_masks(low, k)
    strides = [1] * k
    for i in range(1, k):
        strides[i] = strides[i - 1] * radices[i - 1]
    space = strides[-1] * radices[-1]
    dense = space <= _DENSE_KEYS
    pop = None
    if signed:
        pop = np.bitwise_count(np.arange(1 << n, dtype=np.int64)).astype(np.int64)

    def run(block_ids: Sequence[int]):
        acc_pos = np.zeros(space, dtype=np.int64) if dense else {}
        acc_neg = np.zeros(space, dtype=np.int64) if dense else None
        for b in block_ids:
            hi_masks = [0] * k
            rest = b
            for a in range(low, n):
                d = rest % base
                rest //= base
                for i in range(d, k):
                    hi_masks[i] |= 1 << a
            key = np.zeros(low_masks[0].shape, dtype=np.int64)
            parity = np.zeros(low_masks[0].shape, dtype=np.int64) if signed else None
            for i in range(k):
                m = low_masks[i] | hi_masks[i] if hi_masks[i] else low_masks[i]
                key += codes[i][m] * strides[i]
                if signed:
                    parity += pop[m]
            if dense:
                if signed:
                    odd = (parity & 1).astype(bool)
                    acc_pos += np.bincount(key[~odd], minlength=space)
                    acc_neg += np.bincount(key[odd], minlength=space)
                else:
                    acc_pos += np.bincount(key, minlength=space)
            else:
                odd = (parity & 1).astype(bool) if signed else np.zeros(key.shape, bool)
                for sel, sign in ((~odd, 1), (odd, -1)):
                    uk, cnt = np.unique(key[sel], return_counts=True)
                    for kk, c in zip(uk.tolist(), cnt.tolist()):
                        acc_pos[kk] = acc_pos.get(kk, 0) + sign * c
        return acc_pos, acc_neg

    blocks = list(range(base ** high))
    jobs = max(1, int(jobs))
    if jobs == 1 or len(blocks) == 1:
        parts = [run(blocks)]
    else:
        chunks = [blocks[i::jobs] for i in range(jobs) if blocks[i::jobs]]
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(run, chunks))

    out: dict[tuple[int, ...], int] = {}
    if dense:
        total = sum(p for p, _ in parts)
        if signed:
            total = total - sum(q for _, q in parts)
        for key in np.flatnonzero(total).tolist():
            out[_decode(key, radices)] = int(total[key])
    else:
        merged: dict[int, int] = {}
        for p, _ in parts:
            for kk, v in p.items():
                merged[kk] = merged.get(kk, 0) + v
        for kk, v in merged.items():
            if v:
                out[_decode(kk, radices)] = v
    _record(visits)
    return out


def _decode(key: int, radices: Sequence[int]) -> tuple[int, ...]:
    digits = []
    for r in radices:
        digits.append(key % r)
        key //= r
    return tuple(digits)
