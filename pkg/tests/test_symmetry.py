from __future__ import annotations

import pytest

from contactsym.models import CLASSES, LABELS, all_generators, class_labels, generator, golden
from contactsym.symmetry import (
    BRANCHES,
    FAMILY_NAMES,
    build_system,
    classify_generators,
    generate_defining_equations,
    symmetry_residual,
    verify_general_solution,
)


@pytest.mark.parametrize("cls", CLASSES)
def test_classification_matches_membership(cls):
    res = classify_generators(build_system(cls), all_generators())
    assert res.symmetries == class_labels(cls)
    assert res.symmetries == golden()["classes"][cls]["generators"]
    assert {l for l, _, _ in res.rejected} == set(LABELS) - set(res.symmetries)


def test_projective_field_needs_constant_or_inverse_square_potential():
    for cls, ok in (("constant", True), ("inverse_square", True), ("harmonic", False), ("arbitrary", False)):
        assert (not any(symmetry_residual(generator("X_2"), build_system(cls)))) is ok


def test_rejection_carries_a_residual():
    res = classify_generators(build_system("harmonic"), [generator("X_2")])
    (label, eq, text), = res.rejected
    assert label == "X_2" and eq == "Delta^0" and "omega" in text


def test_defining_system_groups_into_fifteen_families():
    system = generate_defining_equations()
    assert len(FAMILY_NAMES) == 15
    assert system.matched_families == list(FAMILY_NAMES)
    assert system.leftovers == []
    assert {r.relation for r in system.records} <= {"proportional", "consequence"}


@pytest.mark.parametrize("branch", BRANCHES)
def test_general_solution_closes(branch):
    rep = verify_general_solution(branch)
    assert rep.passed, rep.family_residuals
    assert rep.f0_residual_is_wave_operator


def test_summed_cross_reading_fails_when_cross_constants_survive():
    rep = verify_general_solution("v_prime_zero", reading="summed")
    assert not rep.passed
    assert verify_general_solution("cross_constant_zero", reading="summed").passed
