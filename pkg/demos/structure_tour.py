"""Radical, simple ideals and root data for each potential class."""

from contactsym.liealg import center, nilpotent_radical, radical, semisimple_split
from contactsym.models import CLASSES, class_algebra

for cls in CLASSES:
    L = class_algebra(cls)
    split = semisimple_split(L)
    print(f"{cls}: dim {L.n}, center {center(L).labels()}")
    print(f"  nilpotent radical {nilpotent_radical(L).dim}, solvable radical {radical(L).dim}")
    for ideal in split.ideals:
        print(f"  {ideal.name:5} dim {ideal.dimension:2} rank {ideal.rank} roots {ideal.roots:2}  {ideal.labels}")
