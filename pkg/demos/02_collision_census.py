"""
Collision census on dyadic strips
=================================

Count pairs (m, n) from the strips 2^(j-1) <= |m| <= 2^(j+1) with R(m) = R(n)
and compare how dense those collisions are for different functions.
"""

from arithradon import arith
from arithradon.census import census_grid, count_collisions, d_lower_ratio, star_report

# tiny hand-checkable cases on the strip 1 <= |m| <= 4
for name in ("identity", "constant", "square"):
    R = arith.parse_fn(name, 4)
    print(f"{name:>8}: |S| = {count_collisions(R, 1, 1).count}")

# the totient: normalised diagonal density falls off at large scales
phi = arith.make_fn("phi", "even", 1 << 17)
for r in census_grid(phi, 16, delta=1.0):
    if r.j1 == r.j2 and r.j1 % 3 == 1:
        print(f"phi j={r.j1:2d} count={r.count:>10d} ratio={r.ratio:8.3f}")

# prime counting: far-apart strips never collide
pi = arith.make_fn("pi", "even", 1 << 15)
print("pi, strips 6 and 10:", count_collisions(pi, 6, 10).count)

# the divisor function collides at nearly full density
for j, ratio in d_lower_ratio(14, js=[6, 10, 14]):
    print(f"d j={j:2d} count*(log M)^2/M^2 = {ratio:.2f}")

# bounded multiplicity for a polynomial
print(star_report(arith.parse_fn("square", 1000), 1000))
