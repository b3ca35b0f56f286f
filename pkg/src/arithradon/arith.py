"""Sieved arithmetic-function tables and their extensions to nonzero integers.

Every table is a flat int64 array ``values`` of length ``limit + 1`` with
``values[0] = 0`` as padding, so ``values[n]`` is the function at ``n``.
Tables are built with vectorised sieves; no per-element factorisation.

An :class:`ArithFn` turns a table into a function on ``1 <= |m| <= limit``
by an even rule (``F(-m) = F(m)``), a sign-odd rule
(``F(-m) = -F(m)``), or wraps a directly specified ("raw") function.
"""

from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

__all__ = [
    "ArithTable",
    "ArithFn",
    "TABLE_BUILDERS",
    "sieve_primes",
    "sieve_totient",
    "sieve_divisor_count",
    "sieve_mobius",
    "sieve_omega",
    "sieve_omega_distinct",
    "sieve_prime_pi",
    "build_table",
    "eval_signed",
    "make_fn",
    "parse_fn",
]

CACHE_ENV = "RADON_CENSUS_CACHE"
CACHE_MAGIC = b"RDNTBL01"


@dataclass(frozen=True, eq=False)
class ArithTable:
    """Values of a named arithmetic function on ``1..limit``."""

    name: str
    limit: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.limit < 1:
            raise ValueError("table limit must be >= 1")
        if self.values.shape != (self.limit + 1,):
            raise ValueError("values must have length limit + 1")
        self.values.setflags(write=False)

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self):
        return self.limit


def _check_limit(T: int) -> int:
    T = int(T)
    if T < 1:
        raise ValueError(f"sieve limit must be a positive integer, got {T}")
    return T


def sieve_primes(T: int) -> np.ndarray:
    """Boolean primality array of length ``T + 1`` (Eratosthenes)."""
    is_prime = np.ones(T + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(T) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return is_prime


def _primes_upto(T: int) -> np.ndarray:
    return np.flatnonzero(sieve_primes(T))


def _split_primes(T: int, primes: np.ndarray):
    # Primes above sqrt(T) divide n at most once; they are handled in one
    # vectorised pass (_big_prime_factor) instead of one slice per prime.
    small = primes[primes <= math.isqrt(T)]
    big = primes[primes > math.isqrt(T)]
    return small, big


def _big_prime_factor(T: int, big: np.ndarray) -> np.ndarray:
    """``out[n]`` = the (unique) prime factor of n exceeding sqrt(T), else 0."""
    out = np.zeros(T + 1, dtype=np.int64)
    # Multiples p*k with k < sqrt(T) + 1; iterate over the small cofactor k.
    for k in range(1, T // int(big[0]) + 1 if big.size else 1):
        ps = big[: np.searchsorted(big, T // k, side="right")]
        out[ps * k] = ps
    return out


def sieve_totient(T: int) -> ArithTable:
    """Euler's totient ``phi(n)`` for ``n <= T`` via the product formula."""
    T = _check_limit(T)
    phi = np.arange(T + 1, dtype=np.int64)
    small, big = _split_primes(T, _primes_upto(T))
    for p in small:
        sl = phi[p::p]
        sl -= sl // p
    if big.size:
        q = _big_prime_factor(T, big)
        hit = q > 0
        phi[hit] -= phi[hit] // q[hit]
    return ArithTable("phi", T, phi)


def sieve_divisor_count(T: int) -> ArithTable:
    """Number of positive divisors ``d(n)``."""
    T = _check_limit(T)
    d = np.ones(T + 1, dtype=np.int64)
    d[0] = 0
    small, big = _split_primes(T, _primes_upto(T))
    for p in small:
        pk, k = int(p), 1
        while pk <= T:
            # entries divisible by p^k currently carry a factor k from p
            sl = d[pk::pk]
            sl //= k
            sl *= k + 1
            pk *= int(p)
            k += 1
    if big.size:
        d[_big_prime_factor(T, big) > 0] *= 2
    return ArithTable("d", T, d)


def sieve_mobius(T: int) -> ArithTable:
    """Moebius function ``mu(n)`` in {-1, 0, 1}."""
    T = _check_limit(T)
    mu = np.ones(T + 1, dtype=np.int64)
    mu[0] = 0
    small, big = _split_primes(T, _primes_upto(T))
    for p in small:
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    if big.size:
        mu[_big_prime_factor(T, big) > 0] *= -1
    return ArithTable("mu", T, mu)


def _count_prime_factors(T: int, multiplicity: bool) -> np.ndarray:
    out = np.zeros(T + 1, dtype=np.int64)
    small, big = _split_primes(T, _primes_upto(T))
    for p in small:
        out[p::p] += 1
        if multiplicity:
            pk = int(p) * int(p)
            while pk <= T:
                out[pk::pk] += 1
                pk *= int(p)
    if big.size:
        out[_big_prime_factor(T, big) > 0] += 1
    return out


def sieve_omega(T: int) -> ArithTable:
    """``Omega(n)``: prime factors of n counted with multiplicity."""
    T = _check_limit(T)
    return ArithTable("omega", T, _count_prime_factors(T, True))


def sieve_omega_distinct(T: int) -> ArithTable:
    """``omega(n)``: distinct prime factors of n."""
    T = _check_limit(T)
    return ArithTable("omega_distinct", T, _count_prime_factors(T, False))


def sieve_prime_pi(T: int) -> ArithTable:
    """Prime counting ``pi(n)``: Eratosthenes sieve followed by a prefix sum."""
    T = _check_limit(T)
    return ArithTable("pi", T, np.cumsum(sieve_primes(T), dtype=np.int64))


TABLE_BUILDERS: dict[str, Callable[[int], ArithTable]] = {
    "phi": sieve_totient,
    "pi": sieve_prime_pi,
    "d": sieve_divisor_count,
    "mu": sieve_mobius,
    "omega": sieve_omega,
    "omega_distinct": sieve_omega_distinct,
}


def _cache_path(name: str, T: int) -> Optional[Path]:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    return Path(root) / f"{name}_{T}.bin"


def _read_cached(path: Path, name: str, T: int) -> Optional[ArithTable]:
    try:
        raw = path.read_bytes()
    except OSError:
        return None
    if raw[:8] != CACHE_MAGIC or len(raw) != 8 + 8 * (T + 1):
        return None
    values = np.frombuffer(raw, dtype="<i8", offset=8).astype(np.int64)
    return ArithTable(name, T, values)


def _write_cached(path: Path, table: ArithTable) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(table.values.astype("<i8").tobytes())
    os.replace(tmp, path)


@functools.lru_cache(maxsize=32)
def build_table(name: str, T: int) -> ArithTable:
    """Sieve the named table, going through ``$RADON_CENSUS_CACHE`` if set.

    Cached tables are flat little-endian int64 arrays (``n = 0..T``) after an
    8-byte magic header.
    """
    if name not in TABLE_BUILDERS:
        raise KeyError(f"unknown arithmetic function {name!r}; "
                       f"choose from {sorted(TABLE_BUILDERS)}")
    T = _check_limit(T)
    path = _cache_path(name, T)
    if path is not None:
        table = _read_cached(path, name, T)
        if table is not None:
            return table
    table = TABLE_BUILDERS[name](T)
    if path is not None:
        _write_cached(path, table)
    return table


# Nondecreasing lower bounds on |F(m)| in terms of |m|, used to certify
# truncation tails. phi(n) >= sqrt(n/2) for all n >= 1; pi(n) >= n/log n for
# n >= 17 (Rosser-Schoenfeld).
def _phi_minorant(n):
    return np.sqrt(np.asarray(n, dtype=float) / 2.0)


def _pi_minorant(n):
    n = np.asarray(n, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(n >= 17, n / np.log(np.maximum(n, 2.0)), 0.0)


MINORANTS = {"phi": _phi_minorant, "pi": _pi_minorant}

PARITIES = ("even", "signodd", "raw")


@dataclass(frozen=True, eq=False)
class ArithFn:
    """An integer-valued function on ``1 <= |m| <= limit``.

    ``even`` and ``signodd`` functions read ``table``; ``raw`` functions call
    ``func`` (vectorised over int64 arrays of signed m). ``minorant``, when
    set, is a nondecreasing lower bound for ``|F(m)|`` as a function of
    ``|m|``.
    """

    name: str
    parity: str
    limit: int
    table: Optional[ArithTable] = None
    func: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)
    minorant: Optional[Callable] = field(default=None, repr=False)

    def __post_init__(self):
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be one of {PARITIES}")
        if self.parity == "raw":
            if self.func is None:
                raise ValueError("raw functions need func")
        elif self.table is None:
            raise ValueError(f"{self.parity} functions need a table")

    @classmethod
    def even(cls, table: ArithTable) -> "ArithFn":
        return cls(f"{table.name}:even", "even", table.limit, table=table,
                   minorant=MINORANTS.get(table.name))

    @classmethod
    def signodd(cls, table: ArithTable) -> "ArithFn":
        return cls(f"{table.name}:signodd", "signodd", table.limit, table=table,
                   minorant=MINORANTS.get(table.name))

    @classmethod
    def raw(cls, func, limit: int, name: str = "raw", minorant=None) -> "ArithFn":
        return cls(name, "raw", int(limit), func=func, minorant=minorant)

    def __call__(self, m):
        """Vectorised evaluation at signed ``m`` (no domain check)."""
        m = np.asarray(m, dtype=np.int64)
        if self.parity == "raw":
            return np.asarray(self.func(m), dtype=np.int64) * np.ones_like(m)
        v = self.table.values[np.abs(m)]
        if self.parity == "signodd":
            v = np.sign(m) * v
        return v

    def check_domain(self, m) -> None:
        m = np.asarray(m)
        if m.size == 0:
            return
        a = np.abs(m)
        if (a == 0).any():
            raise ValueError("m = 0 is outside the domain")
        if a.max() > self.limit:
            raise ValueError(f"|m| = {int(a.max())} exceeds limit {self.limit} of {self.name}")


def eval_signed(F: ArithFn, m: int) -> int:
    """Value of ``F`` at the nonzero integer ``m``."""
    F.check_domain(m)
    return int(F(m))


RAW_FUNCTIONS = {
    "identity": (lambda m: m, lambda n: np.asarray(n, dtype=float)),
    "negidentity": (lambda m: -m, lambda n: np.asarray(n, dtype=float)),
    "square": (lambda m: m * m, lambda n: np.asarray(n, dtype=float) ** 2),
    "constant": (lambda m: np.zeros_like(m), None),
}


def make_fn(name: str, parity: str, limit: int) -> ArithFn:
    """Build a named function: a sieved table with a parity rule, or a raw one."""
    if name in RAW_FUNCTIONS:
        func, minorant = RAW_FUNCTIONS[name]
        return ArithFn.raw(func, limit, name=name, minorant=minorant)
    if parity == "raw":
        raise ValueError(f"{name!r} is a sieved function; use parity even or signodd")
    table = build_table(name, limit)
    return ArithFn.even(table) if parity == "even" else ArithFn.signodd(table)


def parse_fn(spec: str, limit: int) -> ArithFn:
    """Parse ``NAME[:PARITY]`` (e.g. ``phi:even``, ``d:signodd``, ``square``)."""
    name, _, parity = spec.partition(":")
    if name not in RAW_FUNCTIONS and name not in TABLE_BUILDERS:
        raise KeyError(f"unknown function {name!r}")
    if name in RAW_FUNCTIONS:
        parity = parity or "raw"
        if parity != "raw":
            raise ValueError(f"{name!r} is raw; it takes no parity")
    else:
        parity = parity or "even"
        if parity not in ("even", "signodd"):
            raise ValueError(f"parity must be even or signodd, got {parity!r}")
    return make_fn(name, parity, limit)
