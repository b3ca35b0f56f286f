"""Truncated discrete bilinear Radon transform along arithmetic functions.

    B(f, g)(x) = sum_{m != 0} f(x - P(m)) g(x - Q(m)) / m

truncated to ``1 <= |m| <= T0``. The terms at ``m`` and ``-m`` are combined
first and the pairs are accumulated in ascending ``|m|``, which makes the
result reproducible and makes symmetric cancellation exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate

from .arith import ArithFn, make_fn
from .kernel import paired_sum
from .signals import SignalSpec

__all__ = [
    "TruncationBudget",
    "FIGURE_CONFIGS",
    "figure_pair",
    "evaluate",
    "figure_grid",
    "figure_series",
    "tail_budget",
    "reference_budget",
    "exact_compact_evaluate",
    "compact_output",
]

# P for each figure configuration; Q is always the sign-odd divisor function.
FIGURE_CONFIGS = {
    "phi": ("phi", "even"),
    "pi": ("pi", "even"),
    "mu": ("mu", "even"),
    "omega": ("omega", "even"),
}


@dataclass(frozen=True)
class TruncationBudget:
    T0: int
    tail_bound: float
    x_range: tuple[float, float]
    side: str  # which of P / Q supplied the growth minorant


def figure_pair(name: str, limit: int) -> tuple[ArithFn, ArithFn]:
    """``(P, Q)`` of the named figure configuration with tables up to ``limit``."""
    fn, parity = FIGURE_CONFIGS[name]
    return make_fn(fn, parity, limit), make_fn("d", "signodd", limit)


def _check_T0(P: ArithFn, Q: ArithFn, T0: int) -> None:
    if T0 < 1:
        raise ValueError("T0 must be >= 1")
    if T0 > min(P.limit, Q.limit):
        raise ValueError(f"T0 = {T0} exceeds table limits ({P.limit}, {Q.limit})")


def _hilbert_weights(T0: int):
    m = np.arange(1, T0 + 1, dtype=np.int64)
    return m, 1.0 / m


def evaluate(f: SignalSpec, g: SignalSpec, P: ArithFn, Q: ArithFn, x, T0: int):
    """``sum_{1 <= |m| <= T0} f(x - P(m)) g(x - Q(m)) / m`` at real ``x``.

    ``x`` may be a scalar or an array; the result is complex with its shape.
    """
    _check_T0(P, Q, T0)
    m, w = _hilbert_weights(T0)
    out = paired_sum(f, g, P, Q, m, w, x)
    return complex(out) if np.ndim(out) == 0 else out


def figure_grid(x_min: float, x_max: float, step: float) -> np.ndarray:
    if step <= 0 or x_max < x_min:
        return np.zeros(0)
    count = int(np.floor((x_max - x_min) / step + 1e-9)) + 1
    return np.round(x_min + step * np.arange(count), 12) + 0.0


def figure_series(f, g, P, Q, x_min=-15.0, x_max=15.0, step=0.1, T0=1000):
    """``[(x, B_T0(f, g)(x))]`` over the grid ``x_min, x_min + step, ...``."""
    xs = figure_grid(x_min, x_max, step)
    if xs.size == 0:
        return []
    vals = evaluate(f, g, P, Q, xs, T0)
    return list(zip(xs.tolist(), vals.tolist()))


def reference_budget(T0: int, x_max: float = 15.0) -> float:
    """The classical truncation budget ``1 / (T0 - x_max)**2``, for comparison only."""
    return 1.0 / (T0 - x_max) ** 2


def tail_budget(f: SignalSpec, g: SignalSpec, P: ArithFn, Q: ArithFn,
                x_range: tuple[float, float], T0: int,
                explicit_factor: int = 64) -> TruncationBudget:
    """Certified bound on ``|sum_{|m| > T0} ...|`` uniformly for ``x`` in ``x_range``.

    Uses the growth minorant ``L`` of ``P`` (paired with the majorant of
    ``f``) or, failing that, of ``Q`` (with ``g``):

        2 * sup|other| * sum_{m > T0} maj(L(m) - R) / m,

    where ``R`` is the largest distance from the signal's centre to ``x``.
    The summand is nonincreasing in ``m``, so the sum is taken explicitly up
    to ``explicit_factor * T0`` and closed by the integral from there.
    """
    if T0 < 1:
        raise ValueError("T0 must be >= 1")
    for side, F, sig, other in (("P", P, f, g), ("Q", Q, g, f)):
        if F.minorant is not None:
            break
    else:
        raise ValueError("tail_budget needs a growth minorant for P or Q")

    lo, hi = map(float, x_range)
    R = max(abs(lo - sig.mid), abs(hi - sig.mid))
    minorant = F.minorant

    def term(u):
        return sig.majorant(minorant(u) - R) / u

    K = explicit_factor * T0
    m = np.arange(T0 + 1, K + 1, dtype=float)
    explicit = float(np.sum(term(m)))
    if sig.is_compact and float(term(float(K))) == 0.0:
        tail = 0.0
    else:
        # substitute u = e^t: the integrand becomes maj(L(e^t) - R)
        def integrand(t):
            with np.errstate(over="ignore"):
                return float(sig.majorant(minorant(np.exp(t)) - R))

        tail, err = integrate.quad(integrand, np.log(K), np.inf, limit=200)
        tail += err
    bound = 2.0 * other.sup_abs * (explicit + tail)
    return TruncationBudget(T0, bound, (lo, hi), side)


def compact_output(f: SignalSpec, g: SignalSpec, P: ArithFn, Q: ArithFn, m, w):
    """All nonzero outputs of ``sum_m w_m f(n - P(m)) g(n - Q(m))`` for compact ``f``.

    ``m`` are positive indices with weights ``w``; ``-m`` carries ``-w``.
    Returns ``(n, values)`` with ``n`` ascending. Scatters from the support
    of ``f`` instead of scanning ``n``, so the cost is ``|supp f| * len(m)``.
    """
    if not f.is_compact:
        raise ValueError("compact_output needs a compact f")
    if m.size == 0 or f.support.size == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=complex)
    ms = np.concatenate([m, -m])
    ws = np.concatenate([w, -w])
    Pm, Qm = P(ms), Q(ms)
    a = f.support[:, None]
    n = a + Pm[None, :]
    contrib = (f.values[:, None] * ws[None, :]) * g((a + Pm - Qm).astype(float))
    n = n.ravel()
    contrib = contrib.ravel()
    keys, inv = np.unique(n, return_inverse=True)
    vals = (np.bincount(inv, weights=contrib.real, minlength=keys.size)
            + 1j * np.bincount(inv, weights=contrib.imag, minlength=keys.size))
    return keys, vals


def _reach(sig: SignalSpec, x: float) -> float:
    lo, hi = sig.bounds
    return max(abs(x - lo), abs(x - hi))


def exact_compact_evaluate(f: SignalSpec, g: SignalSpec, P: ArithFn, Q: ArithFn,
                           x: int, search_bound: Optional[int] = None) -> complex:
    """The untruncated sum at integer ``x`` for compact ``f`` and ``g``.

    Only ``m`` with ``f(x - P(m)) g(x - Q(m)) != 0`` contribute. The scan over
    ``|m| <= search_bound`` is certified complete when a growth minorant of
    ``P`` (or ``Q``) exceeds the reach of ``f`` (or ``g``) beyond the bound.
    """
    if not (f.is_compact and g.is_compact):
        raise ValueError("exact evaluation needs compact f and g")
    if search_bound is None:
        search_bound = min(P.limit, Q.limit)
    _check_T0(P, Q, search_bound)
    if f.support.size == 0 or g.support.size == 0:
        return 0j
    certified = False
    for F, sig in ((P, f), (Q, g)):
        if F.minorant is not None and float(F.minorant(search_bound + 1)) > _reach(sig, x):
            certified = True
    if not certified:
        raise RuntimeError(f"search bound {search_bound} exhausted without certification")
    m, w = _hilbert_weights(search_bound)
    Pp, Pn, Qp, Qn = P(m), P(-m), Q(m), Q(-m)
    live = ((f(x - Pp) * g(x - Qp)) != 0) | ((f(x - Pn) * g(x - Qn)) != 0)
    return complex(paired_sum(f, g, P, Q, m[live], w[live], float(x)))
