from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from contactsym.coeffring import PSI0, T, ExpPoly, R, jet, psi_c
from contactsym.exactfield import I
from contactsym.models import LABELS, all_generators, generator, scaling
from contactsym.vectorfield import (
    FieldBasis,
    JetVariablePresent,
    NotInSpan,
    VectorField,
    apply,
    commutator,
    contact_lift,
    extended_commutator,
    prolong,
)

GENS = all_generators()


def test_apply_is_directional_derivative():
    X = VectorField.partial(T, 2)
    assert apply(X, ExpPoly.var(T) ** 2) == ExpPoly.const(4) * ExpPoly.var(T)
    with pytest.raises(JetVariablePresent):
        apply(X, ExpPoly.var(jet(0, 0)))
    with pytest.raises(JetVariablePresent):
        VectorField.partial(T, ExpPoly.var(jet(0, 1)))


def test_commutator_of_time_translation_and_boost():
    lhs = commutator(generator("X^t"), generator("X_G^c1"))
    assert lhs == generator("X_T^c1") * I


def test_prolongation_of_scaling_acts_on_gradients():
    ext = prolong(scaling()).ext
    assert ext[(0, 1)] == ExpPoly.var(jet(0, 1))
    assert ext[(1, 0)] == ExpPoly.var(jet(1, 0))


def test_contact_lift_recovers_gradient_components():
    for label in ("X_G^c2", "X^c1;r3", "X_2"):
        X = generator(label)
        point = VectorField(X.comps[:8] + [ExpPoly()] * 6)
        assert contact_lift(point) == X


def test_basis_expansion_and_failure():
    fb = FieldBasis([generator("X_S"), generator("X_T^c1"), generator("X^t")])
    coeffs = fb.express(generator("X_S") * 3 - generator("X^t") * I)
    assert coeffs == [3, 0, -I]
    with pytest.raises(NotInSpan) as info:
        fb.express(generator("X_G^c1"))
    assert "d/dPsic1" in info.value.residual
    with pytest.raises(ValueError):
        FieldBasis([generator("X_S"), generator("X_S") * 2])


def test_prolongation_is_a_homomorphism_on_every_generator_pair():
    P = [prolong(g) for g in GENS]
    for i, j in combinations(range(len(GENS)), 2):
        lhs = prolong(commutator(GENS[i], GENS[j])).ext
        rhs = extended_commutator(P[i], P[j])
        assert all(lhs[k] == rhs[k] for k in lhs), (LABELS[i], LABELS[j])


@given(st.sampled_from(LABELS), st.sampled_from(LABELS), st.sampled_from(LABELS))
def test_jacobi_identity_for_vector_fields(a, b, c):
    X, Y, Z = generator(a), generator(b), generator(c)
    total = (commutator(X, commutator(Y, Z)) + commutator(Y, commutator(Z, X))
             + commutator(Z, commutator(X, Y)))
    assert total.is_zero()


@given(st.sampled_from(LABELS), st.sampled_from(LABELS))
def test_commutator_is_antisymmetric(a, b):
    assert commutator(generator(a), generator(b)) == -commutator(generator(b), generator(a))


def test_psi_gradient_component_names():
    assert VectorField.partial(psi_c(1), 1).comps[psi_c(1)] == ExpPoly.const(1)
    assert VectorField.partial(PSI0, 1).xi == [ExpPoly()] * 7
    assert VectorField.partial(R(1), 1).chi == [ExpPoly()] * 7
