"""Input signals ``f, g`` for the bilinear transforms.

Two kinds are supported: finitely supported complex sequences on the
integers, and the Cauchy profile ``amplitude / (((x - center)/scale)**2 + 1)``.
Both evaluate at arbitrary real arguments and expose a pointwise majorant
used by the tail estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

__all__ = ["SignalSpec", "random_compact_unit"]


@dataclass(frozen=True, eq=False)
class SignalSpec:
    kind: str
    support: Optional[np.ndarray] = field(default=None, repr=False)
    values: Optional[np.ndarray] = field(default=None, repr=False)
    center: float = 0.0
    scale: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self):
        if self.kind not in ("compact", "cauchy"):
            raise ValueError(f"unknown signal kind {self.kind!r}")
        if self.kind == "compact":
            if self.support is None or self.values is None:
                raise ValueError("compact signals need support and values")
            if self.support.size and np.any(np.diff(self.support) <= 0):
                raise ValueError("support must be strictly increasing")
        elif self.scale <= 0:
            raise ValueError("scale must be positive")

    # -- constructors ----------------------------------------------------

    @classmethod
    def compact(cls, data: Mapping[int, complex]) -> "SignalSpec":
        items = sorted((int(k), complex(v)) for k, v in data.items() if v != 0)
        support = np.array([k for k, _ in items], dtype=np.int64)
        values = np.array([v for _, v in items], dtype=complex)
        return cls("compact", support=support, values=values)

    @classmethod
    def from_arrays(cls, support, values) -> "SignalSpec":
        return cls.compact(dict(zip(np.asarray(support).tolist(), np.asarray(values).tolist())))

    @classmethod
    def indicator(cls, k: int = 0) -> "SignalSpec":
        return cls.compact({k: 1.0})

    @classmethod
    def cauchy(cls, center: float = 0.0, scale: float = 1.0,
               amplitude: float = 1.0) -> "SignalSpec":
        return cls("cauchy", center=float(center), scale=float(scale),
                   amplitude=float(amplitude))

    # -- evaluation ------------------------------------------------------

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "cauchy":
            u = (x - self.center) / self.scale
            return self.amplitude / (u * u + 1.0)
        out = np.zeros(x.shape, dtype=complex)
        if self.support.size == 0:
            return out
        k = np.rint(x)
        idx = np.clip(np.searchsorted(self.support, k), 0, self.support.size - 1)
        hit = (k == x) & (self.support[idx] == k)
        out[hit] = self.values[idx[hit]]
        return out

    @property
    def is_compact(self) -> bool:
        return self.kind == "compact"

    @property
    def sup_abs(self) -> float:
        if self.kind == "cauchy":
            return abs(self.amplitude)
        return float(np.abs(self.values).max()) if self.values.size else 0.0

    @property
    def bounds(self) -> tuple[int, int]:
        """Smallest and largest support point of a compact signal."""
        if not self.is_compact or self.support.size == 0:
            raise ValueError("bounds are defined for nonempty compact signals")
        return int(self.support[0]), int(self.support[-1])

    @property
    def mid(self) -> float:
        if self.is_compact:
            lo, hi = self.bounds
            return 0.5 * (lo + hi)
        return self.center

    def majorant(self, dist):
        """Upper bound for ``|f(y)|`` whenever ``|y - mid| >= dist``."""
        dist = np.asarray(dist, dtype=float)
        if self.kind == "cauchy":
            u = np.maximum(dist, 0.0) / self.scale
            return abs(self.amplitude) / (u * u + 1.0)
        lo, hi = self.bounds
        return np.where(dist > 0.5 * (hi - lo), 0.0, self.sup_abs)

    def l2_norm(self) -> float:
        """l2 norm over the integers (exact for compact, summed for Cauchy)."""
        if self.is_compact:
            return float(np.sqrt(np.sum(np.abs(self.values) ** 2)))
        K = int(10**6 * self.scale)
        n = np.arange(math.floor(self.center) - K, math.ceil(self.center) + K + 1)
        # the neglected tail is below scale**4 / K**3
        return float(np.sqrt(np.sum(self(n) ** 2)))

    def normalized(self) -> "SignalSpec":
        norm = self.l2_norm()
        if norm == 0:
            raise ValueError("cannot normalize the zero signal")
        return self.scaled(1.0 / norm)

    def scaled(self, alpha) -> "SignalSpec":
        if self.is_compact:
            return SignalSpec("compact", support=self.support, values=self.values * alpha)
        if np.iscomplexobj(alpha) and complex(alpha).imag != 0:
            raise ValueError("Cauchy amplitudes are real")
        return SignalSpec.cauchy(self.center, self.scale, self.amplitude * float(np.real(alpha)))

    def __add__(self, other: "SignalSpec") -> "SignalSpec":
        if not (self.is_compact and other.is_compact):
            return NotImplemented
        acc: dict[int, complex] = {}
        for s in (self, other):
            for k, v in zip(s.support.tolist(), s.values.tolist()):
                acc[k] = acc.get(k, 0) + v
        return SignalSpec.compact(acc)


def random_compact_unit(rng: np.random.Generator, width: int = 16,
                        offset: int = 0, complex_values: bool = True) -> SignalSpec:
    """Random unit-l2 signal supported on ``offset + [0, width)``."""
    vals = rng.standard_normal(width)
    if complex_values:
        vals = vals + 1j * rng.standard_normal(width)
    vals = vals / np.sqrt(np.sum(np.abs(vals) ** 2))
    return SignalSpec.from_arrays(np.arange(offset, offset + width), vals)
