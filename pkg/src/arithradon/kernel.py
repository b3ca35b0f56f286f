"""Odd dyadic cutoff and the scale-by-scale pieces of the transform.

The cutoff ``rho`` is odd, vanishes outside ``1/2 < |x| < 2``, and satisfies

    sum_{j >= 0} 2**-j * rho(x / 2**j) = 1/x     for |x| >= 1.

It is built as ``rho(x) = psi(x) / x`` with ``psi(x) = step(x) - step(x/2)``
where ``step`` is a smooth transition from 0 on ``(-inf, 1/2]`` to 1 on
``[1, inf)``; the sum over j then telescopes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import optimize, special

from .arith import ArithFn

__all__ = [
    "DyadicKernel",
    "KernelPiece",
    "build_rho",
    "scale_strip",
    "piece_weights",
    "combined_weights",
    "eval_sigma_j",
    "eval_sigma",
    "eval_T_j",
    "partial_sum_T",
    "telescope_error",
    "paired_sum",
]


def _exp_bump(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


@dataclass(frozen=True)
class DyadicKernel:
    """The odd cutoff ``rho``.

    ``smoothing=None`` uses the C-infinity ``exp(-1/t)`` transition; an
    integer ``k`` uses the C^k regularised incomplete beta ``I_t(k+1, k+1)``.
    """

    smoothing: Optional[int] = None
    support: tuple = (0.5, 2.0)

    def step(self, x):
        """Smooth step: 0 for ``x <= 1/2``, 1 for ``x >= 1``."""
        t = np.clip(2.0 * np.asarray(x, dtype=float) - 1.0, 0.0, 1.0)
        if self.smoothing is None:
            a, b = _exp_bump(t), _exp_bump(1.0 - t)
            return a / (a + b)
        k = self.smoothing
        return special.betainc(k + 1, k + 1, t)

    def psi(self, x):
        x = np.asarray(x, dtype=float)
        return self.step(x) - self.step(x / 2.0)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        a = np.abs(x)
        inside = (a > 0.5) & (a < 2.0)
        out = np.zeros_like(a)
        out[inside] = self.psi(a[inside]) / a[inside]
        # odd extension by an exact sign flip
        return np.where(x < 0, -out, out)

    @property
    def sup_abs(self) -> float:
        return _sup_abs(self)


_SUP_CACHE: dict = {}


def _sup_abs(kernel: DyadicKernel) -> float:
    key = kernel.smoothing
    if key not in _SUP_CACHE:
        xs = np.linspace(0.5, 2.0, 200_001)
        vals = kernel(xs)
        i = int(np.argmax(vals))
        lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, xs.size - 1)]
        res = optimize.minimize_scalar(lambda x: -float(kernel(x)), bounds=(lo, hi),
                                       method="bounded", options={"xatol": 1e-12})
        _SUP_CACHE[key] = max(float(vals[i]), -float(res.fun))
    return _SUP_CACHE[key]


def build_rho(smoothing: Optional[int] = None) -> DyadicKernel:
    if smoothing is not None and int(smoothing) < 1:
        raise ValueError("smoothing order must be a positive integer or None")
    return DyadicKernel(None if smoothing is None else int(smoothing))


def telescope_error(kernel: DyadicKernel, J: int, x) -> np.ndarray:
    """``|sum_{j<=J} 2**-j rho(x/2**j) - 1/x|`` at the points ``x``."""
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    for j in range(J + 1):
        total += kernel(x / 2.0 ** j) / 2.0 ** j
    return np.abs(total - 1.0 / x)


@dataclass(frozen=True)
class KernelPiece:
    """Scale ``j`` of the decomposition for the pair ``(P, Q)``."""

    j: int
    P: ArithFn
    Q: ArithFn
    kernel: DyadicKernel = DyadicKernel()

    def __post_init__(self):
        if self.j < 0:
            raise ValueError("scale index must be nonnegative")
        top = 1 << (self.j + 1)
        if top > min(self.P.limit, self.Q.limit):
            raise ValueError(f"scale {self.j} needs tables up to {top}")


def scale_strip(j: int) -> np.ndarray:
    """Positive ``m`` with ``2**(j-1) < m < 2**(j+1)``, where ``rho(m/2**j)`` may be nonzero."""
    lo = (1 << j) // 2 + 1 if j > 0 else 1
    return np.arange(lo, 1 << (j + 1), dtype=np.int64)


def piece_weights(kernel: DyadicKernel, j: int):
    """Positive ``m`` of scale ``j`` and the weights ``2**-j rho(m / 2**j)``."""
    m = scale_strip(j)
    return m, kernel(m / float(1 << j)) / float(1 << j)


def combined_weights(kernel: DyadicKernel, j_lo: int, j_hi: int):
    """Positive ``m`` and ``sum_{j_lo <= j <= j_hi} 2**-j rho(m / 2**j)``.

    Empty when ``j_lo > j_hi``.
    """
    if j_lo > j_hi:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    m = np.arange(1, 1 << (j_hi + 1), dtype=np.int64)
    w = np.zeros(m.size)
    for j in range(j_lo, j_hi + 1):
        mj, wj = piece_weights(kernel, j)
        w[mj - 1] += wj
    keep = w != 0
    return m[keep], w[keep]


def _sigma_from_weights(P, Q, m, w, xi, eta):
    xi = np.asarray(xi, dtype=float)
    eta = np.broadcast_to(np.asarray(eta, dtype=float), xi.shape)
    flat_xi, flat_eta = xi.ravel(), eta.ravel()
    out = np.empty(flat_xi.size, dtype=complex)
    chunk = max(1, 4_000_000 // max(m.size, 1))
    Pp, Pn, Qp, Qn = P(m), P(-m), Q(m), Q(-m)
    for s in range(0, flat_xi.size, chunk):
        x = flat_xi[s : s + chunk, None]
        e = flat_eta[s : s + chunk, None]
        ap = x * Pp + e * Qp
        an = x * Pn + e * Qn
        ep = np.exp(-2j * np.pi * (ap - np.round(ap)))
        en = np.exp(-2j * np.pi * (an - np.round(an)))
        # rho is odd, so the weight at -m is -w
        out[s : s + chunk] = (ep - en) @ w
    return out.reshape(xi.shape)


def eval_sigma_j(piece: KernelPiece, xi, eta):
    """Torus multiplier ``2**-j sum_m rho(m/2**j) e(-(P(m) xi + Q(m) eta))``.

    ``xi`` and ``eta`` broadcast; the result has their broadcast shape.
    """
    m, w = piece_weights(piece.kernel, piece.j)
    xi, eta = np.broadcast_arrays(np.asarray(xi, dtype=float), np.asarray(eta, dtype=float))
    return _sigma_from_weights(piece.P, piece.Q, m, w, xi, eta)


def eval_sigma(P: ArithFn, Q: ArithFn, j_lo: int, j_hi: int, xi, eta,
               kernel: DyadicKernel = DyadicKernel()):
    """``sum_{j_lo <= j <= j_hi} sigma_j(xi, eta)``."""
    if (1 << (j_hi + 1)) > min(P.limit, Q.limit):
        raise ValueError(f"scale {j_hi} needs tables up to {1 << (j_hi + 1)}")
    m, w = combined_weights(kernel, j_lo, j_hi)
    xi, eta = np.broadcast_arrays(np.asarray(xi, dtype=float), np.asarray(eta, dtype=float))
    return _sigma_from_weights(P, Q, m, w, xi, eta)


def paired_sum(f, g, P: ArithFn, Q: ArithFn, m, w, n):
    """``sum_{m>0} w_m [f(n-P(m)) g(n-Q(m)) - f(n-P(-m)) g(n-Q(-m))]``.

    ``m`` ascends; each ``+-m`` pair is combined before accumulation and the
    pairs are accumulated in ascending order, so symmetric summands cancel
    to an exact zero. ``n`` may be a real scalar or array.
    """
    n = np.asarray(n, dtype=float)
    flat = n.ravel()
    out = np.empty(flat.size, dtype=complex)
    if m.size == 0:
        out[:] = 0
        return out.reshape(n.shape)
    Pp, Pn = P(m).astype(float), P(-m).astype(float)
    Qp, Qn = Q(m).astype(float), Q(-m).astype(float)
    chunk = max(1, 2_000_000 // m.size)
    for s in range(0, flat.size, chunk):
        x = flat[s : s + chunk, None]
        plus = f(x - Pp) * g(x - Qp)
        minus = f(x - Pn) * g(x - Qn)
        terms = (plus - minus) * w
        out[s : s + chunk] = np.cumsum(terms, axis=1)[:, -1]
    return out.reshape(n.shape)


def eval_T_j(piece: KernelPiece, f, g, n):
    """``2**-j sum_m rho(m/2**j) f(n - P(m)) g(n - Q(m))`` at real ``n``."""
    m, w = piece_weights(piece.kernel, piece.j)
    return paired_sum(f, g, piece.P, piece.Q, m, w, n)


def partial_sum_T(f, g, P: ArithFn, Q: ArithFn, n, J: int,
                  kernel: DyadicKernel = DyadicKernel(), j_lo: int = 0):
    """``sum_{j_lo <= j <= J} T_j(f, g)(n)``.

    The per-scale weights are summed per ``m`` first, then one paired sum
    runs over ``m``.
    """
    if (1 << (J + 1)) > min(P.limit, Q.limit):
        raise ValueError(f"scale {J} needs tables up to {1 << (J + 1)}")
    m, w = combined_weights(kernel, j_lo, J)
    return paired_sum(f, g, P, Q, m, w, n)
