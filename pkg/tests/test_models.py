from __future__ import annotations

import pytest

from contactsym.exactfield import I, ParamScalar
from contactsym.models import (
    CLASSES,
    HBAR,
    LABELS,
    MASS,
    OMEGA,
    TOTAL,
    V0,
    allowlist,
    class_labels,
    compare_brackets,
    diff_against_golden,
    expected_brackets,
    generator,
    golden,
    levi_civita,
    parse_combination,
    sym,
)

SIZES = {"constant": 31, "harmonic": 20, "inverse_square": 16, "arbitrary": 14}
RATIO = sym("sm") / sym("sM")


def _lookup(a, b):
    for e in expected_brackets(None):
        if (e["left"], e["right"]) == (a, b):
            return e["expected"]
        if (e["left"], e["right"]) == (b, a):
            return {k: -v for k, v in e["expected"].items()}
    raise KeyError((a, b))


# transcribed by hand, independently of the data file
SPOT = [
    ("X^t", "X_1", {"X^t": 2 * I, "X_S": 2 * I * V0}),
    ("X^t", "X_2", {"X_1": I, "X_S": ParamScalar.const(4)}),
    ("X_T^c2", "X_G^c2", {"X_S": -I * TOTAL / HBAR}),
    ("X_T^r1", "X_G^r1", {"X_S": -I * MASS / HBAR}),
    ("X_T^c1", "X_R^c2", {"X_T^c3": I}),
    ("X_T^c3", "X_2", {"X_G^c3": I}),
    ("X_T^c2", "X^c2;r3", {"X_T^r3": I / RATIO}),
    ("X_T^r2", "X^c1;r2", {"X_T^c1": -I * RATIO}),
    ("X_1", "X_2", {"X_2": 2 * I}),
    ("X^t", "X_V^r1+", {"X_V^r1+": -OMEGA}),
    ("X^t", "X_V^r3-", {"X_V^r3-": OMEGA}),
    ("X_V^r2+", "X_V^r2-", {"X_S": -2 * MASS * OMEGA / HBAR}),
    ("X^c1;r1", "X^c2;r1", {"X_R^c3": I}),
    ("X^c1;r1", "X^c1;r2", {"X_R^r3": I}),
    ("X_R^r1", "X^c2;r2", {"X^c2;r3": I}),
    ("X_G^c1", "X_G^c2", {}),
]


@pytest.mark.parametrize("a,b,value", SPOT, ids=[f"{a},{b}" for a, b, _ in SPOT])
def test_golden_brackets_against_hand_transcription(a, b, value):
    assert _lookup(a, b) == {k: ParamScalar.const(0) + v for k, v in value.items()}


def test_table_labels_and_orientation():
    entries = golden()["brackets"]
    seen = {}
    for e in entries:
        assert e["left"] in LABELS and e["right"] in LABELS
        assert all(lab in LABELS for _, lab in e["value"])
        seen[(e["left"], e["right"])] = parse_combination(e["value"])
    for (a, b), v in seen.items():
        if (b, a) in seen:
            assert seen[(b, a)] == {k: -c for k, c in v.items()}


@pytest.mark.parametrize("cls", CLASSES)
def test_class_sizes(cls):
    assert len(class_labels(cls)) == SIZES[cls] == golden()["classes"][cls]["dimension"]
    n = SIZES[cls]
    assert len(expected_brackets(cls)) == n * (n - 1) // 2


def test_membership_is_nested():
    arb = set(class_labels("arbitrary"))
    for cls in CLASSES:
        assert arb <= set(class_labels(cls))
    assert set(class_labels("inverse_square")) <= set(class_labels("constant"))


def test_generator_lookup():
    assert generator("X_S").label == "X_S"
    with pytest.raises(KeyError):
        generator("X_Q")
    with pytest.raises(ValueError):
        class_labels("quartic")


def test_levi_civita():
    assert [levi_civita(*p) for p in ((1, 2, 3), (2, 3, 1), (2, 1, 3), (1, 1, 2))] == [1, 1, -1, 0]


@pytest.mark.parametrize("cls", CLASSES)
def test_only_allowlisted_mismatches(algebras, cls):
    bad = compare_brackets(algebras[cls], cls)
    assert all(m["allowlisted"] for m in bad)
    assert len(bad) == (9 if cls == "constant" else 0)


def test_allowlist_entries_differ_by_a_factor_of_i(algebras):
    L = algebras["constant"]
    for e in allowlist():
        raw = L.bracket_basis(L.index[e["left"]], L.index[e["right"]])
        computed = {L.labels[k]: v for k, v in raw.items()}
        assert computed == {k: v * I for k, v in _lookup(e["left"], e["right"]).items()}


def test_diff_reports_a_mutated_dimension():
    cls = golden()["classes"]["constant"]
    bad = dict(cls, dimension=30)
    assert diff_against_golden(bad, cls) == [{"item": "dimension", "computed": 30, "golden": 31}]
    assert diff_against_golden({"a": {"b": 1}}, {"a": {"b": 2}}) == [{"item": "a.b", "computed": 1, "golden": 2}]
