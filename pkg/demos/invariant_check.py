"""Check the polynomial invariants of the inverse-square class, then break one on purpose."""

from contactsym.invariants import build_invariants, check_invariant, mutated_energy_invariant
from contactsym.models import class_algebra

L = class_algebra("inverse_square")
for inv in build_invariants(L, "inverse_square"):
    bad = [r.generator for r in check_invariant(L, inv.poly) if not r.zero]
    print(f"{inv.name:6} degree {inv.degree}, {len(inv.poly.terms):4} terms, nonzero residuals: {bad or 'none'}")

print("\nwith the sign of the squared dilation term flipped:")
for r in check_invariant(L, mutated_energy_invariant(L, "inverse_square")):
    if not r.zero:
        mono, coeff = r.residual.minimal_monomial(L.labels)
        print(f"  ad({r.generator}) leaves {coeff} * {mono}")
