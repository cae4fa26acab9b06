"""A non-normal surface semigroup: strata, pole sets and the series.

Run: python demos/02_surface.py
"""

from toricmot.motser import divides_product, engine, par_local, pgeom_local, pole_sets, q_values
from toricmot.oracle import oracle_series
from toricmot.rational import expand
from toricmot.report import render_strata_table, stratum_to_json
from toricmot.toricsg import build_semigroup, phi_sequences

S = build_semigroup(2, [(5, 0), (0, 2), (0, 3), (6, 2)])
F = phi_sequences(S)
for j, fan in enumerate(F.theta_cumulative, 1):
    print(f"rays of the level-{j} cumulative fan: {list(fan.rays)}")

print("\nstratum table:")
print(render_strata_table([stratum_to_json(st) for st in engine(S).strata]))

B, B_faces = pole_sets(S)
print("\nB_ar      =", B)
print("extra over faces:", sorted(set(B_faces) - set(B)))
print("q values  =", q_values(S))

r = par_local(S)
red = r.reduced()
print("\nraw denominator has", len(r.den), "factors; irredundant has", len(red.den))
print("irredundant denominator:", red.den)
print("divides the product over B minus (24,22),(31,28):",
      divides_product(red, [p for p in B_faces if p not in ((24, 22), (31, 28))]))

# Independent check: brute-force enumeration of jet classes.
print("\noracle agrees through T^20:", oracle_series(S, 20) == expand(r, 20))
print("at L = 1 every coefficient is 1:", set(r.at_L1_series(20)) == {1})
print("arithmetic and geometric series differ:", r != pgeom_local(S))
