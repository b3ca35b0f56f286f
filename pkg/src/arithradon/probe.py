"""Numerical probes of the level-set argument for the truncated transform.

Level sets ``E_lam = {n : |T(f, g)(n)| > lam}`` are counted on finite
integer windows. For compact ``f`` the outputs are scattered from the
support of ``f``, so the window is the whole (finite) set where ``T`` can be
nonzero; for analytic signals the window is a declared parameter and counts
are window-relative.

The operator is split at a cutoff scale ``M`` into the low part
``sum_{j < M} T_j`` and the high part ``sum_{M <= j <= J} T_j``. The high part
is controlled through

    V(eta) = int_0^1 |sum_{j=M}^{J} sigma_j(xi, eta)|^2 dxi,

evaluated exactly by Plancherel as a sum over collisions ``P(m1) = P(m2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from .arith import ArithFn
from .census import census_grid, count_collisions, fit_delta_prime
from .kernel import DyadicKernel, combined_weights, paired_sum
from .signals import SignalSpec
from .transform import compact_output

__all__ = [
    "LevelSetProfile",
    "SplitLevels",
    "VEstimate",
    "CensusBound",
    "geometric_lambdas",
    "operator_values",
    "level_sets",
    "split_level_sets",
    "v_exact",
    "v_census_bound",
    "v_sup",
    "v_estimate",
    "choose_cutoff",
    "maximal_operator",
    "e1_bound_check",
    "LAMBDA_RATIO",
]

LAMBDA_RATIO = 2.0 ** 0.25
UNIT_TOL = 1e-6


def geometric_lambdas(lam_min: float, lam_max: float, ratio: float = LAMBDA_RATIO) -> np.ndarray:
    """Descending grid ``lam_max, lam_max/ratio, ...`` down to ``lam_min``."""
    if not 0 < lam_min <= lam_max:
        raise ValueError("need 0 < lam_min <= lam_max")
    count = int(math.floor(math.log(lam_max / lam_min) / math.log(ratio) + 1e-9)) + 1
    return lam_max / ratio ** np.arange(count)


def _window_ints(window) -> np.ndarray:
    a, b = int(window[0]), int(window[1])
    if b < a:
        raise ValueError("empty evaluation window")
    return np.arange(a, b + 1, dtype=np.int64)


def operator_values(f: SignalSpec, g: SignalSpec, P: ArithFn, Q: ArithFn, m, w,
                    window=None):
    """``(n, T(n))`` for ``T(n) = sum_m w_m f(n-P(m)) g(n-Q(m))`` (``-m`` weighted ``-w``).

    With ``window=None`` and compact ``f`` every ``n`` with a nonzero output
    is returned. With a window, every integer in it is returned.
    """
    if window is None:
        if not f.is_compact:
            raise ValueError("analytic signals need an explicit window")
        return compact_output(f, g, P, Q, m, w)
    n = _window_ints(window)
    if f.is_compact:
        keys, vals = compact_output(f, g, P, Q, m, w)
        out = np.zeros(n.size, dtype=complex)
        inside = (keys >= n[0]) & (keys <= n[-1])
        out[keys[inside] - n[0]] = vals[inside]
        return n, out
    return n, paired_sum(f, g, P, Q, m, w, n.astype(float))


def _require_unit(*signals: SignalSpec) -> None:
    for s in signals:
        if abs(s.l2_norm() - 1.0) > UNIT_TOL:
            raise ValueError("level-set probes expect unit l2 signals")


@dataclass(frozen=True)
class LevelSetProfile:
    lambdas: np.ndarray
    sizes: np.ndarray
    epsilon: float
    window: Optional[tuple]
    max_abs: float

    @property
    def envelope(self) -> np.ndarray:
        """``lam**(1 + eps) * |E_lam|`` along the grid."""
        return self.lambdas ** (1.0 + self.epsilon) * self.sizes

    @property
    def weak_norm(self) -> float:
        """``sup_lam lam * |E_lam|**(1 / (1 + eps))`` over the grid."""
        return float(np.max(self.lambdas * self.sizes ** (1.0 / (1.0 + self.epsilon))))


def _count_above(absvals: np.ndarray, lambdas) -> np.ndarray:
    s = np.sort(absvals)
    return s.size - np.searchsorted(s, np.asarray(lambdas, dtype=float), side="right")


def level_sets(f: SignalSpec, g: SignalSpec, P: ArithFn, Q: ArithFn, T0: int,
               window, lambda_grid: Sequence[float], epsilon: float) -> LevelSetProfile:
    """Level-set sizes of the ``T0``-truncated transform on ``window``.

    ``window=None`` is allowed for compact ``f`` and means the full output
    support.
    """
    lambdas = np.asarray(lambda_grid, dtype=float)
    if lambdas.size == 0:
        raise ValueError("empty lambda grid")
    if T0 > min(P.limit, Q.limit):
        raise ValueError(f"T0 = {T0} exceeds table limits")
    _require_unit(f, g)
    m = np.arange(1, T0 + 1, dtype=np.int64)
    _, vals = operator_values(f, g, P, Q, m, 1.0 / m, window)
    a = np.abs(vals)
    return LevelSetProfile(lambdas, _count_above(a, lambdas), float(epsilon),
                           None if window is None else tuple(window),
                           float(a.max()) if a.size else 0.0)


@dataclass(frozen=True)
class SplitLevels:
    """Level-set sizes of the full dyadic sum and its two parts.

    ``full`` counts ``|T| > lam`` for ``T = sum_{j <= J} T_j``; ``e1_half``
    and ``e2_half`` count the low and high parts above ``lam / 2``; ``e1``
    and ``e2`` above ``lam``.
    """

    lam: float
    M: int
    J: int
    full: int
    e1: int
    e2: int
    e1_half: int
    e2_half: int

    @property
    def triangle_holds(self) -> bool:
        return self.full <= self.e1_half + self.e2_half


def _dyadic_values(f, g, P, Q, j_lo, j_hi, kernel, window):
    m, w = combined_weights(kernel, j_lo, j_hi)
    return operator_values(f, g, P, Q, m, w, window)


def _aligned(parts):
    # merge (n, v) pairs on the union of their n
    keys = np.unique(np.concatenate([n for n, _ in parts]))
    out = []
    for n, v in parts:
        a = np.zeros(keys.size, dtype=complex)
        a[np.searchsorted(keys, n)] = v
        out.append(a)
    return keys, out


def split_level_sets(f: SignalSpec, g: SignalSpec, P: ArithFn, Q: ArithFn, M: int,
                     lam: float, J: int, window=None,
                     kernel: DyadicKernel = DyadicKernel()) -> SplitLevels:
    """Level sets of ``sum_{j<M} T_j``, ``sum_{M<=j<=J} T_j`` and their sum.

    Scales above ``J`` are dropped, so a cutoff ``M > J`` leaves the high
    part empty.
    """
    if M < 0 or lam <= 0:
        raise ValueError("need M >= 0 and lam > 0")
    if (1 << (J + 1)) > min(P.limit, Q.limit):
        raise ValueError(f"scale {J} needs tables up to {1 << (J + 1)}")
    low = _dyadic_values(f, g, P, Q, 0, min(M, J + 1) - 1, kernel, window)
    high = _dyadic_values(f, g, P, Q, M, J, kernel, window)
    _, (v1, v2) = _aligned([low, high])
    a1, a2, a = np.abs(v1), np.abs(v2), np.abs(v1 + v2)
    return SplitLevels(
        lam=float(lam), M=M, J=J,
        full=int(np.sum(a > lam)),
        e1=int(np.sum(a1 > lam)), e2=int(np.sum(a2 > lam)),
        e1_half=int(np.sum(a1 > lam / 2)), e2_half=int(np.sum(a2 > lam / 2)),
    )


def _check_scales(F: ArithFn, M_start: int, J_max: int) -> None:
    if M_start < 0 or J_max < 0:
        raise ValueError("scale indices must be nonnegative")
    if (1 << (J_max + 1)) > F.limit:
        raise ValueError(f"scale {J_max} needs tables up to {1 << (J_max + 1)}")


def v_exact(P: ArithFn, Q: ArithFn, eta, M_start: int, J_max: int,
            kernel: DyadicKernel = DyadicKernel(), return_complex: bool = False):
    """``int_0^1 |sum_{j=M_start}^{J_max} sigma_j(xi, eta)|^2 dxi`` by Plancherel.

    Expanding the square and integrating in ``xi`` leaves only collision
    pairs ``P(m1) = P(m2)``; grouping them by the shared value ``v`` gives
    ``sum_v |sum_{P(m)=v} W(m) e(-Q(m) eta)|^2`` with ``W`` the combined
    dyadic weight. ``eta`` may be an array.
    """
    _check_scales(P, M_start, J_max)
    _check_scales(Q, M_start, J_max)
    eta_arr = np.atleast_1d(np.asarray(eta, dtype=float))
    m, w = combined_weights(kernel, M_start, J_max)
    if m.size == 0:
        out = np.zeros(eta_arr.shape, dtype=complex)
    else:
        ms = np.concatenate([m, -m])
        ws = np.concatenate([w, -w])
        order = np.argsort(P(ms), kind="stable")
        ms, ws = ms[order], ws[order]
        _, start = np.unique(P(ms), return_index=True)
        qs = Q(ms).astype(float)
        out = np.empty(eta_arr.size, dtype=complex)
        chunk = max(1, 2_000_000 // ms.size)
        for s in range(0, eta_arr.size, chunk):
            arg = np.multiply.outer(eta_arr[s : s + chunk], qs)
            terms = ws * np.exp(-2j * np.pi * (arg - np.round(arg)))
            buckets = np.add.reduceat(terms, start, axis=1)
            out[s : s + chunk] = np.sum(buckets * np.conj(buckets), axis=1)
    out = out.reshape(eta_arr.shape)
    if not return_complex:
        out = out.real
    return out[0] if np.ndim(eta) == 0 else out


@dataclass(frozen=True)
class CensusBound:
    """Collision-count majorant of ``V`` over scales ``M_start..J_max``.

    ``tail`` bounds the scales beyond ``J_max`` from the fitted density
    constant (``inf`` when ``M_start`` is 0, where the bound has no
    logarithmic decay to use).
    """

    bound: float
    tail: float
    delta: float
    delta_prime: float


def v_census_bound(P: ArithFn, M_start: int, J_max: int, delta: float = 1.0,
                   delta_prime: Optional[float] = None) -> CensusBound:
    """``sum_{j1, j2 = M_start}^{J_max} 2**-(j1+j2) |S(2**j1, 2**j2)|``.

    Scales above ``J_max`` are reported separately: with
    ``|S(M, N)| <= delta' M N / (log M log N)**(1+delta)`` each cell is at most
    ``delta' (log 2)**(-2(1+delta)) (j1 j2)**-(1+delta)``, and the sums over
    ``j > J_max`` are closed by ``int_J^inf x**-(1+delta) dx = J**-delta / delta``.
    """
    _check_scales(P, M_start, J_max)
    total = 0.0
    for j1 in range(M_start, J_max + 1):
        for j2 in range(M_start, J_max + 1):
            total += count_collisions(P, j1, j2).count / float(1 << (j1 + j2))
    if delta_prime is None:
        delta_prime = fit_delta_prime(census_grid(P, max(J_max, 1), delta), delta).delta_prime
    if M_start < 1:
        tail = math.inf
    else:
        inner = sum(j ** -(1.0 + delta) for j in range(M_start, J_max + 1))
        outer = J_max ** -delta / delta
        c = delta_prime * math.log(2) ** (-2.0 * (1.0 + delta))
        tail = c * (2.0 * inner * outer + outer * outer)
    return CensusBound(total, tail, delta, delta_prime)


def v_sup(P: ArithFn, Q: ArithFn, M_start: int, J_max: int, grid: int = 1024,
          refine: bool = True, kernel: DyadicKernel = DyadicKernel()):
    """Grid maximiser of ``V(eta)`` over ``[0, 1)``, refined locally.

    Returns ``(eta, value)``. The value is a lower bound for the supremum.
    """
    etas = np.arange(grid) / grid
    vals = v_exact(P, Q, etas, M_start, J_max, kernel)
    k = int(np.argmax(vals))
    best_eta, best = float(etas[k]), float(vals[k])
    if refine:
        res = optimize.minimize_scalar(
            lambda e: -float(v_exact(P, Q, e, M_start, J_max, kernel)),
            bounds=(best_eta - 1.0 / grid, best_eta + 1.0 / grid), method="bounded",
            options={"xatol": 1e-10},
        )
        if -res.fun > best:
            best_eta, best = float(res.x) % 1.0, float(-res.fun)
    return best_eta, best


@dataclass(frozen=True)
class VEstimate:
    M_start: int
    J_max: int
    eta: float
    exact_value: float
    imag_residual: float
    census_bound: float
    sup_rho: float

    @property
    def holds(self) -> bool:
        return self.exact_value <= self.census_bound * self.sup_rho ** 2 + 1e-9


def v_estimate(P: ArithFn, Q: ArithFn, eta: float, M_start: int, J_max: int,
               kernel: DyadicKernel = DyadicKernel(),
               bound: Optional[CensusBound] = None) -> VEstimate:
    z = complex(v_exact(P, Q, eta, M_start, J_max, kernel, return_complex=True))
    if bound is None:
        bound = v_census_bound(P, M_start, J_max)
    return VEstimate(M_start, J_max, float(eta), z.real, abs(z.imag), bound.bound,
                     kernel.sup_abs)


def choose_cutoff(lam: float, delta: float) -> int:
    """Integer near ``(1/lam)**(1/(1+2 delta))``; 0 when ``lam >= 1``."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    if delta <= 0:
        raise ValueError("delta must be positive")
    if lam >= 1:
        return 0
    return max(1, int(round((1.0 / lam) ** (1.0 / (1.0 + 2.0 * delta)))))


def maximal_operator(f: SignalSpec, g: SignalSpec, P: ArithFn, Q: ArithFn, n, M_max: int):
    """``max_{1 <= M <= M_max} |M**-1 sum_{m=1}^{M} f(n-P(m)) g(n-Q(m))|``."""
    if M_max < 1:
        raise ValueError("M_max must be >= 1")
    if M_max > min(P.limit, Q.limit):
        raise ValueError(f"M_max = {M_max} exceeds table limits")
    n_arr = np.atleast_1d(np.asarray(n, dtype=float))
    m = np.arange(1, M_max + 1, dtype=np.int64)
    Pm, Qm = P(m).astype(float), Q(m).astype(float)
    out = np.empty(n_arr.size)
    chunk = max(1, 2_000_000 // M_max)
    for s in range(0, n_arr.size, chunk):
        x = n_arr[s : s + chunk, None]
        avg = np.cumsum(f(x - Pm) * g(x - Qm), axis=1) / m
        out[s : s + chunk] = np.abs(avg).max(axis=1)
    return float(out[0]) if np.ndim(n) == 0 else out


def e1_bound_check(f: SignalSpec, g: SignalSpec, P: ArithFn, Q: ArithFn, M: int,
                   lam: float, window=None,
                   kernel: DyadicKernel = DyadicKernel()) -> bool:
    """Whether ``|E1_lam| <= 4 sup|rho| M ||f|| ||g|| / lam`` on the window."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    if M == 0:
        return True
    if (1 << M) > min(P.limit, Q.limit):
        raise ValueError(f"cutoff {M} needs tables up to {1 << M}")
    _, v = _dyadic_values(f, g, P, Q, 0, M - 1, kernel, window)
    size = int(np.sum(np.abs(v) > lam))
    c = 4.0 * kernel.sup_abs
    return size <= c * M * f.l2_norm() * g.l2_norm() / lam
