from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from contactsym.exactfield import I, ParamScalar
from contactsym.invariants import (
    PBW,
    SymPoly,
    UEAElement,
    ad_derivation,
    build_auxiliaries,
    build_invariants,
    check_invariant,
    equivariance_check,
    mutated_energy_invariant,
    poisson_bracket,
    symmetrize,
)
from contactsym.models import CLASSES, HBAR, TOTAL

DEGREES = {
    "constant": {"I_S": 1, "I^t": 4, "I^0_R": 4, "I^c;r_3": 6, "I^c;r_4": 8},
    "harmonic": {"I_S": 1, "I^t": 2, "I_R^c": 4, "I_R^r": 4},
    "inverse_square": {"I_S": 1, "I^t": 4, "I_R^c": 4, "I_R^r": 2},
    "arbitrary": {"I_S": 1, "I^t": 2, "I_R^c": 4, "I_R^r": 2},
}


def Y(L, label):
    return SymPoly.var(L.index[label])


def test_ad_derivation_examples(algebras):
    L = algebras["constant"]
    s, x1 = L.index["X_S"], L.index["X_1"]
    assert not ad_derivation(L, s, Y(L, "X_2") * Y(L, "X^t"))
    assert ad_derivation(L, x1, Y(L, "X_2")) == Y(L, "X_2") * (2 * I)


@given(st.integers(0, 30), st.integers(0, 30), st.integers(0, 30), st.integers(0, 30))
def test_ad_is_a_derivation_and_a_representation(a, b, i, j):
    from contactsym.models import class_algebra
    L = class_algebra("constant")
    P, Q = SymPoly.var(i) * SymPoly.var(j), SymPoly.var(b) + SymPoly.var(i) ** 2
    assert ad_derivation(L, a, P * Q) == ad_derivation(L, a, P) * Q + P * ad_derivation(L, a, Q)
    lhs = sum((ad_derivation(L, k, P) * c for k, c in L.bracket_basis(a, b).items()), SymPoly())
    rhs = ad_derivation(L, a, ad_derivation(L, b, P)) - ad_derivation(L, b, ad_derivation(L, a, P))
    assert lhs == rhs


def test_auxiliary_sets(algebras):
    assert sorted(build_auxiliaries(algebras["arbitrary"], "arbitrary")) == ["Y^t", "Y_R^c1", "Y_R^c2", "Y_R^c3"]
    const = build_auxiliaries(algebras["constant"], "constant")
    assert {"Y_1", "Y_2", "Y^t", "Y_R^r1", "Y^c2;r3"} <= set(const)
    assert "Y_R^r1" in build_auxiliaries(algebras["harmonic"], "harmonic")


@pytest.mark.parametrize("cls", CLASSES)
def test_invariants_are_annihilated(algebras, cls):
    L = algebras[cls]
    invs = build_invariants(L, cls)
    assert {v.name: v.degree for v in invs} == DEGREES[cls]
    for inv in invs:
        bad = [r.generator for r in check_invariant(L, inv.poly) if not r.zero]
        assert bad == [], inv.name


@pytest.mark.parametrize("cls", ["constant", "inverse_square"])
def test_mutated_energy_invariant_is_caught(algebras, cls):
    L = algebras[cls]
    res = [r for r in check_invariant(L, mutated_energy_invariant(L, cls)) if not r.zero]
    assert {r.generator for r in res} >= {"X^t", "X_2"}


def test_mutation_needs_a_square_term(algebras):
    with pytest.raises(ValueError):
        mutated_energy_invariant(algebras["harmonic"], "harmonic")


def test_poisson_bracket_with_casimirs_vanishes(algebras):
    L = algebras["harmonic"]
    invs = {v.name: v.poly for v in build_invariants(L, "harmonic")}
    assert not poisson_bracket(L, invs["I_S"], invs["I^t"])
    assert not poisson_bracket(L, invs["I_R^c"], Y(L, "X_G^c1"))
    assert poisson_bracket(L, Y(L, "X_1") if "X_1" in L.index else Y(L, "X^t"), Y(L, "X_V^r1+"))


def test_pbw_reordering(algebras):
    L = algebras["constant"]
    pbw = PBW(L)
    x1, x2 = L.index["X_1"], L.index["X_2"]
    assert pbw.normal_form(UEAElement.word(x2, x1)) == UEAElement.word(x1, x2) + UEAElement.word(x2, coeff=-2 * I)
    t, g = L.index["X_T^c1"], L.index["X_G^c1"]
    diff = pbw.normal_form(UEAElement.word(g, t) - UEAElement.word(t, g))
    assert diff == UEAElement.word(L.index["X_S"], coeff=I * TOTAL / HBAR)
    assert symmetrize(L, SymPoly.var(x1) * SymPoly.var(x2)) == UEAElement.word(x1, x2) + UEAElement.word(x2, coeff=-I)
    with pytest.raises(ValueError):
        pbw.symmetrize(SymPoly.var(x1) ** 4)


def test_normal_form_render(algebras):
    L = algebras["constant"]
    x1, x2 = L.index["X_1"], L.index["X_2"]
    w = PBW(L).normal_form(UEAElement.word(x2, x1))
    assert w.is_normal()
    assert w.render(L.labels) == "(-2*I)*X_2 + X_1*X_2"


@pytest.mark.parametrize("cls", ["arbitrary", "inverse_square"])
def test_symmetrisation_is_equivariant(algebras, cls):
    rep = equivariance_check(algebras[cls], max_degree=2)
    assert rep.passed and rep.checked > 1000


def test_symmetrisation_is_equivariant_in_degree_three(algebras):
    L = algebras["arbitrary"]
    rep = equivariance_check(L, max_degree=3, generators=[L.index["X_G^c1"], L.index["X_R^c2"]])
    assert rep.passed
