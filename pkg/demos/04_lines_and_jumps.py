"""Splitting on lines and the curve of jumping lines.

A stable (0,2) bundle is balanced, O + O, on a general line and jumps to
O(1) + O(-1) along a conic of lines; E_x jumps exactly on the lines
through x.
"""

from mcmbundles.constructors import euler_tangent, ideal_point_extension, stable_02_bundle
from mcmbundles.lines import (
    LineParam,
    PencilParam,
    generic_splitting_type,
    jumping_lines_in_pencil,
    splitting_type,
)

print("T on a general line:        ", generic_splitting_type(euler_tangent(2, 0)))
S = stable_02_bundle(0)
print("stable (0,2), general line: ", generic_splitting_type(S))
for seed in range(3):
    rep = jumping_lines_in_pencil(S, PencilParam.random(seed))
    print(f"   pencil {seed}: {rep.degree} jumping lines, polynomial {[str(c) for c in rep.polynomial]}")

x = (1, 2, 3)
E = ideal_point_extension(x)
print("E_x, general line:          ", generic_splitting_type(E))
print("E_x, a line through x:      ", splitting_type(E, LineParam(2, x, (1, 0, 0))))
pencil = PencilParam((1, 0, 0), (0, 1, 0), (0, 0, 1))
rep = jumping_lines_in_pencil(E, pencil)
L = pencil.line(rep.rational_roots[0])
print(f"   the one jumping member of {pencil}: {L}")
