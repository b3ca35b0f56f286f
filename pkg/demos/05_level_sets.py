"""
Level sets and the cutoff split
===============================

Measure |E_lam| = #{n : |T(f,g)(n)| > lam} for random unit signals, and split
the operator at the cutoff scale M into low and high parts.
"""

import numpy as np

from arithradon import arith
from arithradon.probe import (choose_cutoff, e1_bound_check, geometric_lambdas, level_sets,
                              maximal_operator, split_level_sets)
from arithradon.signals import SignalSpec, random_compact_unit
from arithradon.transform import figure_pair

rng = np.random.default_rng(7)
P, Q = figure_pair("phi", 4096)
f, g = random_compact_unit(rng, 16), random_compact_unit(rng, 16)

lams = geometric_lambdas(1e-3, 1.0)
prof = level_sets(f, g, P, Q, 4096, None, lams, epsilon=0.9)
for lam, size, env in list(zip(prof.lambdas, prof.sizes, prof.envelope))[::8]:
    print(f"lam={lam:.4f} |E|={size:5d} lam^1.9 |E|={env:.4f}")
print("weak norm estimate:", prof.weak_norm)

# split at M ~ (1/lam)^(1/3); the triangle inequality bounds the whole by its parts
for lam in (0.3, 0.05, 0.01):
    M = choose_cutoff(lam, delta=1.0)
    s = split_level_sets(f, g, P, Q, M, lam, J=11)
    print(f"lam={lam}: M={M} |E|={s.full} <= |E1(lam/2)|+|E2(lam/2)| = "
          f"{s.e1_half}+{s.e2_half}; low-part bound holds: {e1_bound_check(f, g, P, Q, M, lam)}")

# averages along the curve: sup over M of |M^-1 sum_{m<=M} f(n-P(m)) g(n-Q(m))|
n = np.arange(-5, 20)
e = SignalSpec.indicator(0)
print("maximal averages:", np.round(maximal_operator(f, g, P, Q, n, 2000), 4).tolist())
ident = arith.parse_fn("identity", 8)
print("indicator, identity curve, n=1:", maximal_operator(e, e, ident, ident, 1, 8))
