"""Slope decompositions of truncated series and the idempotent projector.

Run:  python3 demos/03_slopes_and_projector.py
"""

import math
import random
from fractions import Fraction

from iwahori import SeriesContext, TruncatedSeries
from iwahori.padic import vp_fraction
from iwahori.series import hida_projector, slope_exact, slope_split

ctx = SeriesContext("sl2", p=7, prec=12)
print("== the chart ==")
print(f"one coordinate, batch weight {ctx.weights[0]}: z^k has eigenvalue {ctx.weights[0]}*k")

rng = random.Random(1)
coeffs = {(k,): Fraction(rng.choice([1, 2, 3]) * 7 ** rng.randrange(3))
          for k in rng.sample(range(31), 12)}
coeffs[(0,)] = Fraction(5)
f = TruncatedSeries(ctx, coeffs, degree=30)
print(f"random series with {len(f.coeffs)} terms, Gauss valuation "
      f"{f.gauss_valuation().as_json()}")

print()
print("== slope split at s = 1 ==")
below, atleast = slope_split(f, 1)
print(f"f^(<1) has {len(below.coeffs)} terms, f^(>=1) has {len(atleast.coeffs)}")
print(f"recombine exactly: {below + atleast == f}")
print("the constant monomial survives every cut (its eigenvalue is 0):",
      all((0,) in slope_split(f, s)[1].coeffs for s in range(4)))

print()
print("== projector convergence table (s = 1) ==")
target = slope_exact(atleast, 1)
base = atleast.gauss_valuation().value
print("  n    iterate-to-target valuation    guaranteed floor")
for n in range(1, 9):
    approx = hida_projector(atleast, 1, n)
    err = (approx - target).gauss_valuation()
    floor = base + 1 + vp_fraction(math.factorial(n), 7)
    shown = err.as_json() if err.kind != "infinite" else "inf"
    print(f"  {n}    {shown:>10}                      >= {floor}")
print("(the floor is base + 1 + v_p(n!); it steps up once n reaches p)")
