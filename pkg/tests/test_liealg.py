from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from contactsym.exactfield import ParamScalar, sample_parameters
from contactsym.liealg import (
    ClosureFailure,
    DegenerateSample,
    LieAlgebra,
    RootDatum,
    center,
    fingerprint,
    lower_central_series,
    derived_series,
    nilpotent_radical,
    radical,
    semisimple_split,
    solvability_chain,
    verify_cartan,
    verify_roots,
)
from contactsym.models import CLASSES, generator, golden, parse_combination

ONE = ParamScalar.const(1)
TABLE_RADICAL_DIMS = {"constant": 13, "harmonic": 13, "inverse_square": 7, "arbitrary": 7}
IDEAL_DIMS = {"constant": [3, 15], "harmonic": [1, 3, 3], "inverse_square": [3, 3, 3], "arbitrary": [1, 3, 3]}


def test_closure_failure_names_the_pair():
    with pytest.raises(ClosureFailure) as info:
        LieAlgebra.from_vector_fields([generator("X^t"), generator("X_G^c1")])
    assert info.value.pair == ("X^t", "X_G^c1")


def test_too_few_samples_rejected():
    with pytest.raises(ValueError):
        LieAlgebra(["a"], {}, samples=[sample_parameters(0)])


def test_abelian_toy_algebra():
    L = LieAlgebra(["a", "b", "c"], {})
    assert center(L).dim == 3
    assert solvability_chain(L).is_nilpotent


def test_sl2_triple_closes_only_with_the_scaling(algebras):
    L = algebras["constant"]
    with pytest.raises(ClosureFailure):
        L.subalgebra(["X^t", "X_1", "X_2"])
    L4 = L.subalgebra(["X_S", "X^t", "X_1", "X_2"])
    assert center(L4).labels() == ["X_S"]
    assert L4.derived().dim == 3
    Q = L4.quotient(["X_S"])
    assert center(Q).dim == 0
    ch = solvability_chain(Q)
    assert ch.is_simple and ch.is_semisimple and not ch.is_solvable


def test_heisenberg_triple_is_nilpotent(algebras):
    H = algebras["arbitrary"].subalgebra(["X_T^c1", "X_G^c1", "X_S"])
    assert [s.dim for s in lower_central_series(H)] == [3, 1, 0]


def test_arbitrary_radical_is_solvable(algebras):
    L = algebras["arbitrary"]
    R7 = L.subalgebra(["X_S"] + [f"X_{k}^c{a}" for k in "TG" for a in (1, 2, 3)])
    assert solvability_chain(R7).is_solvable
    assert derived_series(R7)[-1].dim == 0


@pytest.mark.parametrize("cls", CLASSES)
def test_structure(algebras, cls):
    L = algebras[cls]
    assert center(L).labels() == ["X_S"]
    N = nilpotent_radical(L)
    assert N.dim == TABLE_RADICAL_DIMS[cls]
    assert N.labels() == golden()["classes"][cls]["radical"]
    R = radical(L)
    assert L.is_ideal(R) and N <= R
    ch = solvability_chain(L)
    assert not (ch.is_solvable or ch.is_nilpotent or ch.is_simple or ch.is_semisimple)
    split = semisimple_split(L)
    assert split.dims == IDEAL_DIMS[cls]
    assert L.n == N.dim + sum(split.dims)


def test_solvable_radical_contains_time_translation_when_it_is_central_mod_nilradical(algebras):
    assert radical(algebras["harmonic"]).dim == 14
    assert radical(algebras["arbitrary"]).dim == 8
    assert radical(algebras["constant"]).dim == 13


def test_killing_form(algebras):
    L = algebras["constant"]
    K = L.killing
    s = L.index["X_S"]
    assert all(not v for v in K[s])
    r3 = L.index["X_R^r3"]
    assert K[r3][r3]


@given(st.integers(0, 30), st.integers(0, 30), st.integers(0, 30))
def test_killing_form_is_invariant(i, j, k):
    from contactsym.models import class_algebra
    L = class_algebra("inverse_square")
    i, j, k = i % L.n, j % L.n, k % L.n
    K = L.killing
    zero = ParamScalar.const(0)
    lhs = sum((v * K[m][k] for m, v in L.bracket_basis(i, j).items()), zero)
    rhs = sum((v * K[i][m] for m, v in L.bracket_basis(j, k).items()), zero)
    assert lhs == rhs


@pytest.mark.parametrize("cls", CLASSES)
def test_structure_constants_satisfy_jacobi(algebras, cls):
    assert algebras[cls].jacobi_failures() == []


def test_results_agree_across_seeds():
    from contactsym.models import class_algebra
    dims = {tuple(semisimple_split(class_algebra("harmonic", seed, 4)).dims) for seed in (0, 11, 97)}
    assert dims == {(1, 3, 3)}


def test_disagreeing_samples_are_reported():
    from contactsym.liealg import Subspace
    L = LieAlgebra(["a", "b"], {})
    with pytest.raises(DegenerateSample):
        Subspace(L, [[{0: 1}], [], [{0: 1}]])


@pytest.mark.parametrize("cls", CLASSES)
def test_table_cartan_subalgebras(algebras, cls):
    L = algebras[cls]
    assert verify_cartan(L, L.coordinate_subspace(golden()["classes"][cls]["cartan"])).passed


def test_non_cartan_is_rejected(algebras):
    L = algebras["constant"]
    rep = verify_cartan(L, L.coordinate_subspace(["X_T^c1"]))
    assert rep.nilpotent and not rep.self_normalizing and rep.normalizer_dimension > 1


def test_sl2_roots(algebras):
    Q = semisimple_split(algebras["constant"]).quotient
    H = {"X_1": ParamScalar.parse("-I/2")}
    datum = RootDatum("L1", [H], [("E+", {"X_2": ONE}, (1,)), ("E-", {"X^t": ONE}, (-1,))])
    rep = verify_roots(Q, datum)
    assert rep.passed and rep.root_count == 2 and rep.eigen == {"E+": ["1"], "E-": ["-1"]}


def test_wrong_root_is_caught(algebras):
    Q = semisimple_split(algebras["constant"]).quotient
    spec = golden()["simple_ideals"]["L2"]
    gens = [(s["name"], parse_combination(s["value"]), tuple(s["root"])) for s in spec["standard"]]
    name, E, root = gens[0]
    gens[0] = (name, E, (root[1], root[0], root[2]))
    rep = verify_roots(Q, RootDatum("L2", [parse_combination(h) for h in spec["cartan"]], gens))
    assert not rep.passed


def test_fingerprints():
    assert fingerprint(15, 3, 12) == "O(6)"
    assert fingerprint(3, 1, 2) == "O(3)"
    assert fingerprint(1, 0, 0) == fingerprint(1, 1, 0) == "U(1)"
    assert fingerprint(8, 2, 6) is None
