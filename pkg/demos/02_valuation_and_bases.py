"""The p-valuation on a pro-p Iwahori subgroup, its ordered basis, and the
two independent ways of computing it.

Run:  python3 demos/02_valuation_and_bases.py
"""

import random

from iwahori import ChevalleyGroup
from iwahori.axioms import sample_iwahori

G = ChevalleyGroup("sp4", p=7, prec=12)
datum = G.datum

print("== the group ==")
print(f"type {datum.name}, Coxeter number h = {G.coxeter_number}, gate: p - 1 = 6 > 4")
print("I = symplectic matrices over Z_7 that are lower-unipotent mod 7")

print()
print("== ordered basis and its valuation ladder ==")
basis = G.ordered_basis()
for entry in basis.entries:
    kind, vec = entry.label
    print(f"  {kind:<12} {str(vec):<12} omega = {entry.omega}")
print(f"dimension d = {len(basis)} (4 negative roots + 2 cocharacters + 4 positive roots)")

print()
print("== single generators ==")
alpha = (1, -1)
print(f"omega(u_a(1))  = {G.p_valuation(G.root_element(alpha, 1)).as_json()}"
      "   (positive root of height 1: 1/h)")
print(f"omega(u_-a(7)) = {G.p_valuation(G.root_element((-1, 1), 7)).as_json()}"
      "   (val 1 minus 1/h)")
print(f"omega(1)       = {G.p_valuation(G.identity()).as_json()}")

print()
print("== two routes agree ==")
rng = random.Random(0)
for k in range(5):
    g = sample_iwahori(G, rng)
    formula = G.p_valuation(g)
    oracle = G.p_valuation_by_conjugation(g)
    print(f"  sample {k}: factorization formula {formula.as_json():>5}   "
          f"conjugation oracle {oracle.as_json():>5}   equal: {formula == oracle}")

print()
print("== a twisted factorization, re-multiplied ==")
w = datum.weyl_group()[5]
g = sample_iwahori(G, rng, w)
fact = G.iwahori_factorize(g, w)
print(f"w = {w.name}: negative batch roots "
      f"{[list(r) for r, _ in fact.negative]}")
print(f"round trip reproduces g at precision 12: {fact.remultiply() == g}")
coords = G.coordinates(g, w)
print(f"coordinate vector has {len(coords)} exact Z_7 entries; "
      f"rebuilds g: {G.from_coordinates(coords, w) == g}")
