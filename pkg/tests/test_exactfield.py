from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import QQ_I

from contactsym.exactfield import (
    I,
    DivisionByZero,
    ParamAssignment,
    ParamScalar,
    PoleAtSample,
    sample_parameters,
    sym,
)

NAMES = ("hbar", "sm", "sM", "omega", "v0", "v1")


@st.composite
def scalars(draw, allow_den=True):
    def poly():
        out = ParamScalar.const(0)
        for _ in range(draw(st.integers(1, 3))):
            c = ParamScalar.const(draw(st.integers(-5, 5)), draw(st.integers(-3, 3)))
            for n in draw(st.lists(st.sampled_from(NAMES), max_size=2)):
                c = c * sym(n)
            out = out + c
        return out

    num = poly()
    if allow_den and draw(st.booleans()):
        den = poly()
        if den:
            return num / den
    return num


def test_gaussian_arithmetic():
    assert (ParamScalar.parse("1/2") + I) * 2 == 1 + 2 * I


def test_mass_ratio_square_is_rational():
    ratio = sym("sm") / sym("sM")
    assert ratio * ratio == sym("m") / sym("M")
    assert str(ratio * ratio) == "m/M"


def test_like_terms_combine():
    h = sym("hbar") / (2 * sym("M"))
    assert h + h == sym("hbar") / sym("M")


def test_evaluate_direct_substitution():
    sigma = ParamAssignment({"hbar": 2, "sm": 1, "sM": 3, "omega": 1, "v0": 1, "v1": 1})
    assert (I * sym("M") / sym("hbar")).evaluate(sigma) == QQ_I(0, 1) * QQ_I(9, 0) / QQ_I(2, 0)
    sigma2 = ParamAssignment({"hbar": 1, "sm": 1, "sM": 2, "omega": 1, "v0": 1, "v1": 1})
    assert (sym("sm") / sym("sM")).evaluate(sigma2) == QQ_I(1, 0) / QQ_I(2, 0)


def test_zero_denominator_is_rejected():
    with pytest.raises(PoleAtSample):
        ParamScalar.const(1) / (sym("m") - sym("m"))
    with pytest.raises(DivisionByZero):
        ParamScalar.const(1) / 0


def test_pole_at_sample():
    sigma = ParamAssignment({"hbar": 1, "sm": 1, "sM": 2, "omega": 1, "v0": 1, "v1": 1})
    with pytest.raises(PoleAtSample):
        (ParamScalar.const(1) / (sym("hbar") - sym("omega"))).evaluate(sigma)


def test_sampling_is_deterministic_and_physical():
    a, b = sample_parameters(0), sample_parameters(0)
    assert a == b
    assert a != sample_parameters(1)
    for seed in range(25):
        s = sample_parameters(seed)
        assert 0 < s.mass_ratio() <= Fraction(1, 4)
        assert s.values["hbar"] > 0 and s.values["omega"] > 0 and s.values["v1"] != 0


def test_assignment_rejects_heavy_reduced_mass():
    with pytest.raises(ValueError):
        ParamAssignment({"hbar": 1, "sm": 1, "sM": 1, "omega": 1, "v0": 1, "v1": 1})


def test_parse_and_render():
    assert ParamScalar.parse("I*sqrt(M/m)") == I * sym("sM") / sym("sm")
    for text in ("-I*M/hbar", "-2*m*omega/hbar", "2*I*v0"):
        x = ParamScalar.parse(text)
        assert ParamScalar.parse(str(x).replace("^", "**")) == x
    assert str(ParamScalar.const(1) / (sym("hbar") + sym("omega"))) == "1/(hbar + omega)"


@given(scalars(), scalars(), scalars())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@given(scalars(), scalars())
def test_inverses(a, b):
    if b:
        assert (a / b) * b == a
        assert b * b.inverse() == 1


@given(scalars(allow_den=False), scalars(allow_den=False), scalars(allow_den=False), st.integers(0, 50))
def test_evaluation_is_a_homomorphism(a, b, c, seed):
    s = sample_parameters(seed)
    assert (a * b + c).evaluate(s) == a.evaluate(s) * b.evaluate(s) + c.evaluate(s)
