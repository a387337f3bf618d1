"""Which rank-2 bundles on the plane pass the two-sided vanishing test?

Members of the three families (twists of T, the extensions E_x, general
(0,2) bundles) pass; nearby impostors fail, and the certificate says where.
"""

from mcmbundles import bundle_cohomology
from mcmbundles.constructors import (
    euler_tangent,
    ideal_point_extension,
    line_bundle,
    stable_02_bundle,
    trivial_extension,
)
from mcmbundles.mcm import mcm_vanishing_check

candidates = [
    euler_tangent(2, -1),
    euler_tangent(2, -2),
    ideal_point_extension((1, 2, 3)),
    stable_02_bundle(0),
    euler_tangent(2, 0),
    euler_tangent(2, -3),
    line_bundle(2, 3),
    trivial_extension((1, 2, 3)),
]
for E in candidates:
    print(mcm_vanishing_check(E).summary())

# E_x and O + I_x have identical twist data; only the extension class
# separates them, and it shows up in a single number.
x = (1, 2, 3)
print()
print("h^1(E_x(-3))       =", bundle_cohomology(ideal_point_extension(x), -3, 1))
print("h^1((O + I_x)(-3)) =", bundle_cohomology(trivial_extension(x), -3, 1))
