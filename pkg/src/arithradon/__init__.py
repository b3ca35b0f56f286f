"""Discrete bilinear Radon transforms along arithmetic functions.

Modules:

* :mod:`arithradon.arith` sieved tables (phi, pi, d, mu, Omega, omega) and
  their even / sign-odd extensions to nonzero integers;
* :mod:`arithradon.census` collision counts over dyadic strips;
* :mod:`arithradon.kernel` the odd dyadic cutoff and its pieces;
* :mod:`arithradon.transform` the truncated transform and tail bounds;
* :mod:`arithradon.probe` level sets, the V functional, the maximal operator.
"""

from .arith import ArithFn, ArithTable, build_table, eval_signed, make_fn, parse_fn
from .census import CollisionRecord, census_grid, count_collisions, star_report
from .kernel import DyadicKernel, KernelPiece, build_rho
from .signals import SignalSpec
from .transform import evaluate, figure_series, tail_budget

__version__ = "0.1.0"

__all__ = [
    "ArithFn",
    "ArithTable",
    "CollisionRecord",
    "DyadicKernel",
    "KernelPiece",
    "SignalSpec",
    "build_rho",
    "build_table",
    "census_grid",
    "count_collisions",
    "eval_signed",
    "evaluate",
    "figure_series",
    "make_fn",
    "parse_fn",
    "star_report",
    "tail_budget",
]
