"""Monomial curves: the general pipeline against the one-variable closed form.

Run: python demos/01_monomial_curve.py
"""

from toricmot.motser import curve_closed_form, engine, par_local, pgeom_local
from toricmot.report import render_rational
from toricmot.toricsg import build_semigroup

# The cusp y^2 = x^3 has semigroup <2, 3>.
S = build_semigroup(1, [2, 3])
print("strata of <2,3> (j, I, q):")
for st in engine(S).strata:
    print(f"  j={st.j}  I={[i + 1 for i in st.I]}  q={st.q}")

ar = par_local(S)
print("\narithmetic series, irredundant form:")
print("  " + render_rational(ar.reduced()))
print("matches the closed form:", ar == curve_closed_form([2, 3]))

# Dropping the 1/q weights gives the geometric series.
geo = pgeom_local(S)
print("geometric series:", render_rational(geo.reduced()))
print("first coefficients (arithmetic, by power of L):")
for s, col in enumerate(ar.expand(6).coeffs):
    print(f"  T^{s}: {[str(c) for c in col]}")

# A generator whose removal leaves the gcd chain unchanged does not alter the series.
a = par_local(build_semigroup(1, [8, 18, 20, 21]))
b = par_local(build_semigroup(1, [8, 18, 21]))
print("\n<8,18,20,21> and <8,18,21> give the same series:", a == b)
print("irredundant denominator:", a.reduced().den)
