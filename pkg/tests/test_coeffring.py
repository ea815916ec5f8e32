from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from contactsym.coeffring import (
    PSI0,
    T,
    ExpPoly,
    R,
    RadialPotential,
    RecursiveBinding,
    declare_function,
    differentiate,
    jet,
    monomial_coefficients,
    r,
    render,
    specialize_tower,
    substitute,
)
from contactsym.exactfield import I, ParamScalar, sym

COORDS = (T, R(1), R(2), r(1), r(2), r(3), PSI0, jet(0, 1))


@st.composite
def polys(draw):
    out = ExpPoly()
    for _ in range(draw(st.integers(1, 4))):
        term = ExpPoly.const(ParamScalar.const(draw(st.integers(-4, 4)), draw(st.integers(-2, 2))))
        for at in draw(st.lists(st.sampled_from(COORDS), max_size=3)):
            term = term * ExpPoly.var(at)
        extra = draw(st.sampled_from(["", "rho", "rho-1", "exp", "w0", "w1"]))
        if extra == "rho":
            term = term * ExpPoly.rho()
        elif extra == "rho-1":
            term = term * ExpPoly.rho(-1)
        elif extra == "exp":
            term = term * ExpPoly.exp(draw(st.sampled_from([1, -1, 2])))
        elif extra:
            term = term * ExpPoly.w(int(extra[1]))
        out = out + term
    return out


def test_r1_square_is_rewritten_through_rho():
    r1, r2, r3 = (ExpPoly.var(r(k)) for k in (1, 2, 3))
    assert r1 * r1 + r2 * r2 + r3 * r3 == ExpPoly.rho()


def test_rho_chain_rule():
    assert differentiate(ExpPoly.rho(2), r(2)) == ExpPoly.const(4) * ExpPoly.var(r(2)) * ExpPoly.rho()
    assert differentiate(ExpPoly.rho(-1), r(1)) == ExpPoly.const(-2) * ExpPoly.var(r(1)) * ExpPoly.rho(-2)


def test_exponential_time_derivative():
    e = ExpPoly.exp(1)
    assert differentiate(e, T) == ExpPoly.const(I * sym("omega")) * e
    assert differentiate(ExpPoly.exp(-1), r(1)) == ExpPoly()
    assert render(ExpPoly.exp(-1)) == "exp(-I*omega*t)"


def test_potential_tower():
    assert differentiate(ExpPoly.w(0), r(3)) == ExpPoly.var(r(3)) * ExpPoly.w(1)
    v = RadialPotential({0: sym("v0"), -1: -sym("v1")})
    assert v.tower(1) == ExpPoly.const(2 * sym("v1")) * ExpPoly.rho(-2)
    # w_1 = 2 g'(rho) and d g / d r_l = r_l w_1
    assert differentiate(v.value(), r(1)) == specialize_tower(ExpPoly.var(r(1)) * ExpPoly.w(1), v.tower)


def test_abstract_functions_track_derivatives():
    declare_function("g_test", (T, R(1)))
    g = ExpPoly.func("g_test")
    assert differentiate(g, r(1)) == ExpPoly()
    assert differentiate(differentiate(g, T), R(1)) == differentiate(differentiate(g, R(1)), T)


def test_substitution_rules():
    x = ExpPoly.var(T) * ExpPoly.var(R(1))
    assert substitute(x, {T: ExpPoly.const(2)}) == ExpPoly.const(2) * ExpPoly.var(R(1))
    with pytest.raises(RecursiveBinding):
        substitute(x, {T: ExpPoly.var(R(1)), R(1): ExpPoly.var(T)})
    with pytest.raises(ValueError):
        substitute(x, {r(1): ExpPoly.const(1)})


def test_monomial_split():
    f = ExpPoly.var(jet(1, 0)) * ExpPoly.var(T) + ExpPoly.var(R(2))
    parts = monomial_coefficients(f, [jet(1, 0)])
    assert parts[()] == ExpPoly.var(R(2))
    assert parts[((jet(1, 0), 1),)] == ExpPoly.var(T)
    with pytest.raises(ValueError):
        monomial_coefficients(f, [r(1)])


@given(polys(), polys(), st.sampled_from(COORDS))
def test_leibniz(f, g, x):
    assert differentiate(f * g, x) == differentiate(f, x) * g + f * differentiate(g, x)


@given(polys(), st.sampled_from(COORDS), st.sampled_from(COORDS))
def test_mixed_partials_commute(f, x, y):
    assert differentiate(differentiate(f, x), y) == differentiate(differentiate(f, y), x)


@given(polys(), polys(), st.sampled_from(COORDS))
def test_derivative_is_linear(f, g, x):
    assert differentiate(f + g * 3, x) == differentiate(f, x) + differentiate(g, x) * 3
