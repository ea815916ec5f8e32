"""Compute a few commutators from the vector fields and compare them with the stored table."""

from contactsym.models import allowlist, class_algebra, compare_brackets, generator, render_combination
from contactsym.vectorfield import commutator

L = class_algebra("constant")

for a, b in [("X^t", "X_1"), ("X^t", "X_2"), ("X_1", "X_2"), ("X_T^c1", "X_G^c1")]:
    raw = L.bracket_basis(L.index[a], L.index[b])
    print(f"[{a}, {b}] = {render_combination({L.labels[k]: v for k, v in raw.items()})}")

# the field-level commutator, before it is expressed in the basis
print("\nraw field [X_1, X_2]:")
print(commutator(generator("X_1"), generator("X_2")))

print(f"\n{len(allowlist())} allowlisted entries; the computed values:")
for m in compare_brackets(L, "constant"):
    print(f"  [{m['left']}, {m['right']}] computed {m['computed']}, stored {m['golden']}")
