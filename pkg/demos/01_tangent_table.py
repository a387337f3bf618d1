"""The tangent bundle of the plane, read off its Euler-sequence presentation.

T = coker(O -> O(1)^3) with phi = (x0, x1, x2).  Every cohomology number
below is a rank of a multiplication matrix; nothing is looked up.
"""

from mcmbundles import bundle_cohomology, cohomology_table
from mcmbundles.constructors import cotangent_cohomology, euler_tangent

T = euler_tangent(2, 0)
print(cohomology_table(T, -8, 3).render("T"))
print()

# The lone h^1 sits at k = -3: it is h^1(Omega) = 1 seen through Serre duality.
print("h^1(T(-3))        =", bundle_cohomology(T, -3, 1))
print("h^1(Omega)        =", cotangent_cohomology(2, 0, 0, 1))
print("h^0(Omega(2))     =", cotangent_cohomology(2, 2, 0, 0), "(= h^2(T(-5)))")

# Higher dimensions show the same shape: sections from -1 on, one
# middle class at -n-1, top cohomology far to the left.
for n in (3, 4):
    print()
    print(cohomology_table(euler_tangent(n, 0), -n - 4, 1).render(f"T_{n}"))
