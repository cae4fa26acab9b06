"""Saturated semigroups: the single-sum formula, the global series and the unimodularity test.

Run: python demos/03_normal_case.py
"""

from toricmot.motser import check_nicaise, par_global_normal, par_local, par_normal, pgeom_local, saturation_defect
from toricmot.report import render_rational
from toricmot.toricsg import build_semigroup

# The A_1 surface singularity: cone spanned by (1,0), (1,2).
S = build_semigroup(2, [(1, 0), (1, 1), (1, 2)], saturated=True)
print("saturated:", not saturation_defect(S))
print("normal formula equals the face recursion:", par_normal(S) == par_local(S))
print("local series :", render_rational(par_local(S).reduced()))
print("global series:", render_rational(par_global_normal(S).reduced()))

v = check_nicaise(S)
print("\nevery Newton vertex is a unimodular sum:", v.holds)
for l, vert, sub in v.certificate:
    print(f"  l={l}  vertex {vert} = sum of generators {[i + 1 for i in sub]}")
print("so arithmetic and geometric series coincide:", par_local(S) == pgeom_local(S))

# A non-saturated example fails the same test.
T = build_semigroup(1, [2, 3])
print("\n<2,3> missing from its saturation:", saturation_defect(T))
print("<2,3> failing vertices:", [c[1] for c in check_nicaise(T).failing])
