"""
The V functional and its collision bound
========================================

V(eta) is the L^2 mass in xi of the high-scale multiplier. Plancherel turns it
into a sum over collision pairs P(m1) = P(m2), and the collision census gives
an upper bound for it.
"""

import numpy as np

from arithradon import arith
from arithradon.kernel import DyadicKernel, eval_sigma
from arithradon.probe import v_census_bound, v_exact, v_sup

P = arith.make_fn("phi", "even", 1 << 12)
Q = arith.make_fn("d", "signodd", 1 << 12)

# exact value against brute quadrature on 2^14 points
M, J = 2, 8
xi = np.arange(1 << 14) / (1 << 14)
for eta in (0.1, 0.25, 0.6):  # at eta = 0 an even P cancels everything
    quad = np.mean(np.abs(eval_sigma(P, Q, M, J, xi, eta)) ** 2)
    print(f"eta={eta}: V exact={v_exact(P, Q, eta, M, J):.12f} quadrature={quad:.12f}")

# sup over eta from a 1024-point grid, refined near the best point
M, J = 2, 11
eta, best = v_sup(P, Q, M, J)
cb = v_census_bound(P, M, J)
rho_sup = DyadicKernel().sup_abs
print(f"sup V ~ {best:.4f} at eta={eta:.6f}")
print(f"census bound * sup|rho|^2 = {cb.bound * rho_sup ** 2:.4f}, "
      f"tail beyond scale {J} <= {cb.tail:.4f} (fitted delta' = {cb.delta_prime:.3f})")

# a constant P makes every pair collide, and the bound grows with the scale range
const = arith.parse_fn("constant", 1 << 10)
for J in (4, 6, 8):
    print(f"constant P, scales 1..{J}: bound = {v_census_bound(const, 1, J).bound:.1f}")
