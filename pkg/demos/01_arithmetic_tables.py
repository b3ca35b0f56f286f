"""
Arithmetic function tables
==========================

Sieve the five tables, extend them to negative integers and look at a few
values.
"""

import numpy as np

from arithradon import arith

# one sieve per function; index 0 is padding, values start at n = 1
T = 30
for name in ("phi", "pi", "d", "mu", "omega"):
    print(f"{name:>6}", arith.build_table(name, T).values[1:].tolist())

# an even extension forgets the sign, a sign-odd extension keeps it
phi = arith.make_fn("phi", "even", 100)
d = arith.make_fn("d", "signodd", 100)
m = np.array([-12, -7, -1, 1, 7, 12])
print("m          ", m.tolist())
print("phi even   ", phi(m).tolist())
print("d signodd  ", d(m).tolist())

# the totient never drops below sqrt(n/2); the transform's tail bound relies on it
big = arith.build_table("phi", 10**6).values[1:]
n = np.arange(1, big.size + 1)
print("min phi(n) / sqrt(n/2) up to 1e6:", float(np.min(big / np.sqrt(n / 2))))
