"""Random Steiner bundles: pass rates, the boundary class, and k.

E = coker(O(-n)^{kt} -> O(-n+1)^{k(t+r)}) with random linear entries.
"""

from mcmbundles.constructors import SteinerParams, random_steiner
from mcmbundles.mcm import admissible_parameters, mcm_vanishing_check, natural_cohomology_threshold

for n, t, r in [(2, 2, 3), (2, 3, 4), (3, 2, 3)]:
    print(f"n={n} t={t} r={r}: threshold k >= {natural_cohomology_threshold(n, t, r)}, "
          f"largest admissible t for r: {admissible_parameters(n, r)}")
    for k in (1, 2):
        certs = [mcm_vanishing_check(random_steiner(SteinerParams(n, t, r, k, s))) for s in range(10)]
        rate = sum(c.passed for c in certs) / len(certs)
        # E(-1) is V(-n): its h^{n-1} is kt, recorded in the boundary grid
        boundary = {c.h("boundary", n - 1, -1) for c in certs}
        print(f"   k={k}: pass rate {rate:.2f}, h^{n - 1}(V(-n)) values {sorted(boundary)}")

# One certificate in full: windows come from the regularity bounds.
cert = mcm_vanishing_check(random_steiner(SteinerParams(3, 2, 3, 1, 42)))
print()
print(cert.summary())
print("regularity bounds:", cert.regularity)
for side in ("positive", "dual", "boundary"):
    lo, hi = getattr(cert, f"{side}_window")
    print(f"{side:>8} window [{lo}, {hi}]:", {i: row for i, row in getattr(cert, f"{side}_grid").items()})
