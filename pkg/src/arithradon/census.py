"""Collision census of an arithmetic function over dyadic strips.

For scales ``M = 2**j1`` and ``N = 2**j2`` the collision set is

    S(M, N) = {(m, n) : R(m) = R(n), M/2 <= |m| <= 2M, N/2 <= |n| <= 2N}

counted as ordered pairs of nonzero integers, diagonal included, both strip
ends inclusive. Counts come from value buckets (sorted unique values and
their multiplicities per strip), never from a double loop.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .arith import ArithFn, build_table

__all__ = [
    "CollisionRecord",
    "ConditionParams",
    "StarReport",
    "strip",
    "strip_buckets",
    "count_collisions",
    "census_grid",
    "fit_delta_prime",
    "star_report",
    "pi_far_strip_vanishing",
    "d_lower_ratio",
]


@dataclass(frozen=True)
class CollisionRecord:
    j1: int
    j2: int
    count: int
    delta: float = 1.0

    @property
    def M(self) -> int:
        return 1 << self.j1

    @property
    def N(self) -> int:
        return 1 << self.j2

    @property
    def ratio(self) -> float:
        """``count * (log M log N)**(1 + delta) / (M N)``, natural logs."""
        logs = (self.j1 * math.log(2)) * (self.j2 * math.log(2))
        return self.count * logs ** (1.0 + self.delta) / (self.M * self.N)


@dataclass(frozen=True)
class ConditionParams:
    delta: float
    delta_prime: float

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.delta_prime < 0:
            raise ValueError("delta_prime must be nonnegative")


@dataclass(frozen=True)
class StarReport:
    """Observed multiplicity constants over a finite scan.

    ``D1`` is the largest ``|m1| / |m2|`` over colliding pairs, ``D2`` the
    largest number of partners (itself included) of any single ``m1``.
    """

    D1: float
    D2: int
    range_limit: int


def strip(j: int) -> np.ndarray:
    """Signed integers with ``2**j / 2 <= |m| <= 2 * 2**j``, ascending."""
    lo = max(1, -(-(1 << j) // 2))
    pos = np.arange(lo, (1 << (j + 1)) + 1, dtype=np.int64)
    return np.concatenate([-pos[::-1], pos])


def _check_strip(R: ArithFn, j: int) -> None:
    if j < 0:
        raise ValueError("scale index must be nonnegative")
    if (1 << (j + 1)) > R.limit:
        raise ValueError(f"strip 2^{j + 1} = {1 << (j + 1)} exceeds the limit "
                         f"{R.limit} of {R.name}")


def strip_buckets(R: ArithFn, j: int):
    """Distinct values of ``R`` on strip ``j`` and their multiplicities."""
    _check_strip(R, j)
    return np.unique(R(strip(j)), return_counts=True)


def _bucket_product(a, b) -> int:
    va, ca = a
    vb, cb = b
    _, ia, ib = np.intersect1d(va, vb, assume_unique=True, return_indices=True)
    return int(np.dot(ca[ia], cb[ib]))


def count_collisions(R: ArithFn, j1: int, j2: int, delta: float = 1.0) -> CollisionRecord:
    """Size of the collision set of ``R`` for scales ``2**j1``, ``2**j2``."""
    count = _bucket_product(strip_buckets(R, j1), strip_buckets(R, j2))
    return CollisionRecord(j1, j2, count, delta)


def census_grid(R: ArithFn, jmax: int, delta: float = 1.0,
                threads: Optional[int] = None) -> list[CollisionRecord]:
    """Records for every ``1 <= j1, j2 <= jmax``, sorted by ``(j1, j2)``."""
    if jmax < 1:
        raise ValueError("jmax must be >= 1")
    _check_strip(R, jmax)
    buckets = {j: strip_buckets(R, j) for j in range(1, jmax + 1)}
    cells = [(j1, j2) for j1 in range(1, jmax + 1) for j2 in range(1, jmax + 1)]

    def cell(jj):
        j1, j2 = jj
        return CollisionRecord(j1, j2, _bucket_product(buckets[j1], buckets[j2]), delta)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(cell, cells))
    return [cell(c) for c in cells]


def fit_delta_prime(records: Sequence[CollisionRecord], delta: float = 1.0) -> ConditionParams:
    """Smallest constant making the density bound hold on the scanned records."""
    if not records:
        raise ValueError("need at least one record")
    ratios = [CollisionRecord(r.j1, r.j2, r.count, delta).ratio for r in records]
    return ConditionParams(delta, max(ratios))


def star_report(R: ArithFn, range_limit: int) -> StarReport:
    """Scan all collisions with ``|m1|, |m2| <= range_limit``."""
    if range_limit < 1 or range_limit > R.limit:
        raise ValueError(f"range_limit must lie in [1, {R.limit}]")
    pos = np.arange(1, range_limit + 1, dtype=np.int64)
    m = np.concatenate([-pos[::-1], pos])
    vals = R(m)
    order = np.argsort(vals, kind="stable")
    _, start, size = np.unique(vals[order], return_index=True, return_counts=True)
    absm = np.abs(m[order]).astype(float)
    hi = np.maximum.reduceat(absm, start)
    lo = np.minimum.reduceat(absm, start)
    return StarReport(D1=float((hi / lo).max()), D2=int(size.max()), range_limit=range_limit)


def _pi_fn(jmax: int) -> ArithFn:
    return ArithFn.even(build_table("pi", 1 << (jmax + 1)))


def pi_far_strip_vanishing(j1: int, j2: int, pi_fn: Optional[ArithFn] = None) -> bool:
    """Whether no prime-counting value is shared between strips ``j1`` and ``j2``."""
    R = pi_fn if pi_fn is not None else _pi_fn(max(j1, j2))
    return count_collisions(R, j1, j2).count == 0


def d_lower_ratio(jmax: int, d_fn: Optional[ArithFn] = None,
                  js: Optional[Iterable[int]] = None) -> list[tuple[int, float]]:
    """``(j, |S(2^j, 2^j)| (log 2^j)^2 / 4^j)`` for the signed divisor function."""
    R = d_fn if d_fn is not None else ArithFn.signodd(build_table("d", 1 << (jmax + 1)))
    out = []
    for j in (js if js is not None else range(1, jmax + 1)):
        count = count_collisions(R, j, j).count
        out.append((j, count * (j * math.log(2)) ** 2 / 4.0 ** j))
    return out
