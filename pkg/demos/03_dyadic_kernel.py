"""
The dyadic cutoff
=================

Build the smooth odd bump rho supported in 1/2 < |x| < 2 and check that its
rescalings add up to 1/x.
"""

import numpy as np

from arithradon import arith
from arithradon.kernel import KernelPiece, build_rho, eval_sigma_j, telescope_error

rho = build_rho()
x = np.array([0.4, 0.5, 0.75, 1.0, 1.5, 1.99, 2.0, -1.0])
print("rho:", np.round(rho(x), 6).tolist())
print("sup |rho| =", rho.sup_abs)

# sum_{j <= J} 2^-j rho(x / 2^j) = 1/x exactly once 2^(J-1) >= |x| >= 1
xs = np.geomspace(1, 2.0 ** 23, 10_000)
print("telescoping error, J = 24:", telescope_error(rho, 24, xs).max())
print("sum for x = 3:", sum(rho(3 / 2 ** j) / 2 ** j for j in range(21)), "vs", 1 / 3)

# a finitely smooth cutoff telescopes just as well
print("C^3 cutoff error:", telescope_error(build_rho(3), 24, xs).max())

# the scale-j multiplier vanishes at the origin and stays bounded
P, Q = arith.make_fn("phi", "even", 1 << 10), arith.make_fn("d", "signodd", 1 << 10)
piece = KernelPiece(8, P, Q)
grid = np.arange(64) / 64
vals = eval_sigma_j(piece, grid[:, None], grid[None, :])
print("sigma_8(0,0) =", vals[0, 0], " max |sigma_8| on a 64x64 grid =", np.abs(vals).max())
