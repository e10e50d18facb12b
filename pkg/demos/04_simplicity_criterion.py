"""Weight multiplicities and the simplicity criterion on exact characters,
ending with the symplectic rank-two example.

Run:  python3 demos/04_simplicity_criterion.py
"""

from fractions import Fraction

from iwahori import DerivedCharacter, WeightLabel, bgg_simple, weight_multiplicity
from iwahori.verma import sp4_conditions, summand_inventory

print("== weight multiplicities ==")
dchi = DerivedCharacter.of("sp4", Fraction(1, 2), Fraction(1, 2))
for mx, my in [(0, 0), (1, 0), (1, 1), (2, 1), (3, 2)]:
    lam = WeightLabel("sp4", (dchi.coeffs[0] - mx, dchi.coeffs[1] - my))
    mult = weight_multiplicity(dchi, lam)
    print(f"  dchi - ({mx}*e1 + {my}*e2): multiplicity {mult}")

print()
print("== the simplicity criterion ==")
for c1, c2 in [(0, 0), (Fraction(1, 3), Fraction(1, 5)), (-1, -1)]:
    simple, certificate = bgg_simple(DerivedCharacter.of("sp4", c1, c2))
    values = ", ".join(str(e["value"]) for e in certificate)
    print(f"  (c1, c2) = ({c1}, {c2}): values [{values}] -> "
          f"{'simple' if simple else 'not simple'}")

print()
print("== the four explicit conditions ==")
c1, c2 = Fraction(1, 3), Fraction(1, 5)
vals = sp4_conditions(c1, c2)
labels = ["a", "b", "a+b", "2a+b"]
for lab, v in zip(labels, vals):
    print(f"  (dchi + delta)(H_{lab:<5}) = {v}")
print("  (computed twice: explicit Cartan matrices and lattice pairings must agree)")

print()
print("== one summand per Weyl element, pairwise separated ==")
inv = summand_inventory("sp4")
print(f"  {inv['count']} summands: {', '.join(inv['summands'])}")
w, w2 = inv["summands"][0], inv["summands"][1]
print(f"  witness root separating ({w}) from ({w2}): "
      f"{inv['witnesses'][(w, w2)]}")
