"""Finite-dimensional Lie algebras over ParamScalar.

Brackets and the Killing form are kept symbolic.  Everything that needs
Gaussian elimination (kernels, spans, ideals, normalizers) runs on
Gaussian-rational specialisations at several parameter samples, and the
answers must agree across samples.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from sympy import QQ_I
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.sdm import SDM

from .exactfield import ParamAssignment, ParamScalar, PoleAtSample, sample_parameters
from .vectorfield import FieldBasis, NotInSpan, VectorField, commutator

MIN_SAMPLES = 3


class ClosureFailure(ValueError):
    """A bracket of two basis elements leaves their span."""

    def __init__(self, pair, residual):
        super().__init__(f"[{pair[0]}, {pair[1]}] is not in the span: {residual}")
        self.pair = pair
        self.residual = residual


class DegenerateSample(RuntimeError):
    """Parameter samples disagree on a rank, or a sample hits a pole."""


# -- sparse linear algebra over QQ_I --------------------------------------------------

def _matrix(rows, ncols):
    rep = {i: r for i, r in enumerate(rows) if r}
    return DomainMatrix.from_rep(SDM(rep, (len(rows), ncols), QQ_I))


def _rows(M):
    dod = M.to_dod()
    return [dict(dod[i]) for i in sorted(dod) if dod[i]]


def span(vectors, n):
    """Row-reduced basis of the span of sparse vectors."""
    vectors = [v for v in vectors if v]
    if not vectors:
        return []
    R, _ = _matrix(vectors, n).rref()
    return _rows(R)


def nullspace(rows, n):
    """Basis of ``{x : r . x = 0 for every row r}``."""
    rows = [r for r in rows if r]
    if not rows:
        return [{i: QQ_I.one} for i in range(n)]
    return span(_rows(_matrix(rows, n).nullspace()), n)


def intersect(A, B, n):
    return nullspace(nullspace(A, n) + nullspace(B, n), n)


def _dot(a, b):
    if len(a) > len(b):
        a, b = b, a
    s = QQ_I.zero
    for k, v in a.items():
        w = b.get(k)
        if w is not None:
            s += v * w
    return s


def _axpy(acc, c, v):
    for k, x in v.items():
        y = acc.get(k, QQ_I.zero) + c * x
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)


def contains(basis, v, n):
    return len(span(basis + [v], n)) == len(basis)


# -- the algebra ----------------------------------------------------------------------

def _default_samples(seed, count):
    if count < MIN_SAMPLES:
        raise ValueError(f"at least {MIN_SAMPLES} parameter samples are required, got {count}")
    return tuple(sample_parameters(seed + j) for j in range(count))


class LieAlgebra:
    """Labelled basis with structure constants ``[e_i, e_j] = sum_k c_ij^k e_k``."""

    def __init__(self, labels: Sequence[str], brackets: Mapping, samples: Sequence[ParamAssignment] | None = None,
                 seed: int = 0):
        self.labels = tuple(labels)
        self.n = len(self.labels)
        self.index = {l: i for i, l in enumerate(self.labels)}
        if len(self.index) != self.n:
            raise ValueError("basis labels must be unique")
        self.c = {}
        for (i, j), comb in brackets.items():
            comb = {k: v for k, v in comb.items() if v}
            if i == j:
                if comb:
                    raise ValueError("[e_i, e_i] must vanish")
                continue
            if comb:
                self.c[(i, j)] = comb
                self.c[(j, i)] = {k: -v for k, v in comb.items()}
        self.samples = tuple(samples) if samples is not None else _default_samples(seed, MIN_SAMPLES)
        if len(self.samples) < MIN_SAMPLES:
            raise ValueError(f"at least {MIN_SAMPLES} parameter samples are required")

    # -- construction ------------------------------------------------------------
    @classmethod
    def from_vector_fields(cls, gens: Sequence[VectorField], labels=None, samples=None, seed: int = 0):
        labels = list(labels or [g.label for g in gens])
        fb = FieldBasis(gens)
        br = {}
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                try:
                    coords = fb.express(commutator(gens[i], gens[j]))
                except NotInSpan as e:
                    raise ClosureFailure((labels[i], labels[j]), e.residual) from None
                br[(i, j)] = {k: v for k, v in enumerate(coords) if v}
        return cls(labels, br, samples, seed)

    def with_samples(self, samples) -> "LieAlgebra":
        return LieAlgebra(self.labels, self._upper(), samples)

    def _upper(self):
        return {k: v for k, v in self.c.items() if k[0] < k[1]}

    def subalgebra(self, labels: Sequence[str]) -> "LieAlgebra":
        """The span of some basis labels, which must close under the bracket."""
        idx = [self.index[l] for l in labels]
        pos = {g: k for k, g in enumerate(idx)}
        br = {}
        for a, i in enumerate(idx):
            for b in range(a + 1, len(idx)):
                comb = self.c.get((i, idx[b]), {})
                outside = [self.labels[k] for k in comb if k not in pos]
                if outside:
                    raise ClosureFailure((labels[a], labels[b]), " + ".join(outside))
                br[(a, b)] = {pos[k]: v for k, v in comb.items()}
        return LieAlgebra(labels, br, self.samples)

    def quotient(self, ideal_labels: Iterable[str]) -> "LieAlgebra":
        """``L/N`` for an ideal spanned by basis labels, on the complementary labels."""
        drop = set(ideal_labels)
        if not self.is_ideal(self.coordinate_subspace(drop)):
            raise ValueError("quotient requires an ideal")
        keep = [i for i, l in enumerate(self.labels) if l not in drop]
        pos = {g: k for k, g in enumerate(keep)}
        br = {}
        for a, i in enumerate(keep):
            for b in range(a + 1, len(keep)):
                comb = self.c.get((i, keep[b]), {})
                br[(a, b)] = {pos[k]: v for k, v in comb.items() if k in pos}
        return LieAlgebra([self.labels[i] for i in keep], br, self.samples)

    # -- symbolic layer -----------------------------------------------------------
    def bracket_basis(self, i: int, j: int) -> dict:
        return self.c.get((i, j), {})

    def bracket(self, x: Mapping[str, ParamScalar], y: Mapping[str, ParamScalar]) -> dict:
        """Bracket of label combinations, as a label combination."""
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for k, v in self.bracket_basis(self.index[a], self.index[b]).items():
                    lab = self.labels[k]
                    s = out.get(lab, ParamScalar.const(0)) + ca * cb * v
                    if s:
                        out[lab] = s
                    else:
                        out.pop(lab, None)
        return out

    def jacobi_failures(self) -> list[tuple[str, str, str]]:
        """Triples (exact arithmetic) for which the Jacobi identity fails."""
        bad = []
        zero = ParamScalar.const(0)
        for i in range(self.n):
            for j in range(i + 1, self.n):
                for k in range(j + 1, self.n):
                    tot: dict = {}
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        for m, v in self.bracket_basis(a, b).items():
                            for p, w in self.bracket_basis(m, c).items():
                                tot[p] = tot.get(p, zero) + v * w
                    if any(tot.values()):
                        bad.append((self.labels[i], self.labels[j], self.labels[k]))
        return bad

    def ad_matrix(self, i: int) -> dict:
        """Sparse ``{(row, col): c}`` with ``(ad e_i) e_col = sum_row c e_row``."""
        out = {}
        for j in range(self.n):
            for k, v in self.bracket_basis(i, j).items():
                out[(k, j)] = v
        return out

    @cached_property
    def killing(self) -> list[list[ParamScalar]]:
        """``kappa(e_i, e_j) = tr(ad e_i ad e_j)``, exact."""
        zero = ParamScalar.const(0)
        ads = [self.ad_matrix(i) for i in range(self.n)]
        cols = []
        for A in ads:
            by_col = {}
            for (r, c), v in A.items():
                by_col.setdefault(c, []).append((r, v))
            cols.append(by_col)
        K = [[zero] * self.n for _ in range(self.n)]
        for i in range(self.n):
            for j in range(i, self.n):
                s = zero
                # sum_{k,l} (ad_i)_{l k} (ad_j)_{k l}
                for k, entries in cols[i].items():
                    for l, v in entries:
                        w = ads[j].get((k, l))
                        if w is not None:
                            s = s + v * w
                K[i][j] = K[j][i] = s
        return K

    # -- sampled layer -----------------------------------------------------------
    @cached_property
    def _sampled(self):
        out = []
        for sigma in self.samples:
            try:
                out.append({key: {k: v.evaluate(sigma) for k, v in comb.items()} for key, comb in self.c.items()})
            except PoleAtSample as e:
                raise DegenerateSample(str(e)) from None
        return out

    def _bracket_s(self, s, x, y):
        C = self._sampled[s]
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                comb = C.get((i, j))
                if comb:
                    _axpy(out, a * b, comb)
        return out

    def _killing_s(self, s):
        sigma = self.samples[s]
        return [[v.evaluate(sigma) for v in row] for row in self.killing]

    def _unit(self, i):
        return {i: QQ_I.one}

    def _per_sample(self, fn) -> "Subspace":
        return Subspace(self, [fn(s) for s in range(len(self.samples))])

    def coordinate_subspace(self, labels: Iterable[str]) -> "Subspace":
        idx = sorted(self.index[l] for l in labels)
        return Subspace(self, [[self._unit(i) for i in idx] for _ in self.samples])

    def combination_subspace(self, combos: Sequence[Mapping[str, ParamScalar]]) -> "Subspace":
        def fn(s):
            sigma = self.samples[s]
            return span([{self.index[l]: v.evaluate(sigma) for l, v in c.items() if v} for c in combos], self.n)
        return self._per_sample(fn)

    def whole(self) -> "Subspace":
        return self.coordinate_subspace(self.labels)

    def zero(self) -> "Subspace":
        return Subspace(self, [[] for _ in self.samples])

    def bracket_space(self, A: "Subspace", B: "Subspace") -> "Subspace":
        def fn(s):
            return span([self._bracket_s(s, a, b) for a in A.bases[s] for b in B.bases[s]], self.n)
        return self._per_sample(fn)

    def derived(self) -> "Subspace":
        return self.bracket_space(self.whole(), self.whole())

    def is_ideal(self, V: "Subspace") -> bool:
        return self.bracket_space(self.whole(), V) <= V

    def is_subalgebra(self, V: "Subspace") -> bool:
        return self.bracket_space(V, V) <= V

    def normalizer(self, H: "Subspace") -> "Subspace":
        def fn(s):
            ann = nullspace(H.bases[s], self.n)
            rows = []
            for h in H.bases[s]:
                images = [self._bracket_s(s, self._unit(i), h) for i in range(self.n)]
                for a in ann:
                    row = {}
                    for i, img in enumerate(images):
                        v = _dot(a, img)
                        if v:
                            row[i] = v
                    rows.append(row)
            return nullspace(rows, self.n)
        return self._per_sample(fn)

    def centralizer(self, V: "Subspace") -> "Subspace":
        def fn(s):
            rows = []
            for v in V.bases[s]:
                images = [self._bracket_s(s, self._unit(i), v) for i in range(self.n)]
                for k in range(self.n):
                    row = {i: img[k] for i, img in enumerate(images) if k in img}
                    rows.append(row)
            return nullspace(rows, self.n)
        return self._per_sample(fn)

    def ideal_generated(self, V: "Subspace") -> "Subspace":
        def fn(s):
            cur = V.bases[s]
            while True:
                new = span(cur + [self._bracket_s(s, self._unit(i), v) for i in range(self.n) for v in cur], self.n)
                if len(new) == len(cur):
                    return new
                cur = new
        return self._per_sample(fn)

    def killing_perp(self, V: "Subspace") -> "Subspace":
        def fn(s):
            K = self._killing_s(s)
            rows = []
            for v in V.bases[s]:
                row = {}
                for j in range(self.n):
                    t = QQ_I.zero
                    for i, a in v.items():
                        if K[i][j]:
                            t += a * K[i][j]
                    if t:
                        row[j] = t
                rows.append(row)
            return nullspace(rows, self.n)
        return self._per_sample(fn)


@dataclass
class Subspace:
    """Per-sample row-reduced spanning sets of a subspace of an algebra."""

    algebra: LieAlgebra
    bases: list

    def __post_init__(self):
        dims = {len(b) for b in self.bases}
        if len(dims) != 1:
            raise DegenerateSample(f"dimension differs across parameter samples: {sorted(dims)}")

    @property
    def dim(self) -> int:
        return len(self.bases[0])

    def __le__(self, other: "Subspace") -> bool:
        n = self.algebra.n
        res = {all(contains(B, v, n) for v in A) for A, B in zip(self.bases, other.bases)}
        if len(res) != 1:
            raise DegenerateSample("containment differs across parameter samples")
        return res.pop()

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dim == other.dim and self <= other

    def __and__(self, other: "Subspace") -> "Subspace":
        n = self.algebra.n
        return Subspace(self.algebra, [intersect(A, B, n) for A, B in zip(self.bases, other.bases)])

    def __add__(self, other: "Subspace") -> "Subspace":
        n = self.algebra.n
        return Subspace(self.algebra, [span(A + B, n) for A, B in zip(self.bases, other.bases)])

    def labels(self) -> list[str] | None:
        """Basis labels spanning this subspace, or None if it is not a coordinate subspace."""
        found = set()
        for B in self.bases:
            if any(len(v) != 1 for v in B):
                return None
            found.add(tuple(sorted(next(iter(v)) for v in B)))
        if len(found) != 1:
            raise DegenerateSample("coordinate support differs across parameter samples")
        return [self.algebra.labels[i] for i in found.pop()]

    def describe(self):
        labs = self.labels()
        return {"dimension": self.dim, "basis": labs}


# -- structure analyses ---------------------------------------------------------------

def center(L: LieAlgebra) -> Subspace:
    return L.centralizer(L.whole())


def derived_series(L: LieAlgebra, limit: int = 64) -> list[Subspace]:
    series = [L.whole()]
    while len(series) < limit:
        nxt = L.bracket_space(series[-1], series[-1])
        if nxt.dim == series[-1].dim:
            break
        series.append(nxt)
    return series


def lower_central_series(L: LieAlgebra, limit: int = 64) -> list[Subspace]:
    series = [L.whole()]
    while len(series) < limit:
        nxt = L.bracket_space(L.whole(), series[-1])
        if nxt.dim == series[-1].dim:
            break
        series.append(nxt)
    return series


def radical(L: LieAlgebra) -> Subspace:
    """Maximal solvable ideal: the Killing-orthogonal complement of ``[L, L]``."""
    return L.killing_perp(L.derived())


def nilpotent_radical(L: LieAlgebra) -> Subspace:
    """``[L, rad L]``: the smallest ideal with reductive quotient."""
    return L.bracket_space(L.whole(), radical(L))


@dataclass
class Chains:
    derived: list[int]
    lower_central: list[int]
    is_solvable: bool
    is_nilpotent: bool
    is_simple: bool
    is_semisimple: bool

    def as_dict(self):
        return dict(self.__dict__)


def solvability_chain(L: LieAlgebra) -> Chains:
    der = derived_series(L)
    low = lower_central_series(L)
    rad = radical(L)
    semisimple = rad.dim == 0
    simple = False
    if semisimple and L.n > 0:
        simple = L.derived().dim == L.n and len(_minimal_ideals(L, L.whole())) == 1
    return Chains([s.dim for s in der], [s.dim for s in low], der[-1].dim == 0, low[-1].dim == 0, simple, semisimple)


def _minimal_ideals(L: LieAlgebra, S: Subspace) -> list[Subspace]:
    """Minimal ideals inside a semisimple ideal ``S``, found from ideals generated
    by single basis vectors and closed under intersection and Killing complements."""
    cand: list[Subspace] = []

    def add(V):
        if V.dim and not any(V == W for W in cand):
            cand.append(V)
            return True
        return False

    for s_vec in range(S.dim):
        add(L.ideal_generated(Subspace(L, [[B[s_vec]] for B in S.bases])))
    changed = True
    while changed:
        changed = False
        for V in list(cand):
            if V.dim < S.dim:
                changed |= add(L.killing_perp(V) & S)
            for W in list(cand):
                changed |= add(V & W)
    return [V for V in cand if not any(W.dim < V.dim and W <= V for W in cand)]


# -- simple-ideal splitting -----------------------------------------------------------

@dataclass
class IdealInfo:
    labels: list | None
    dimension: int
    rank: int
    roots: int
    simple: bool
    abelian: bool
    name: str | None

    def as_dict(self):
        return dict(self.__dict__)


FINGERPRINTS = {(3, 1, 2): "O(3)", (15, 3, 12): "O(6)", (1, 0, 0): "U(1)", (1, 1, 0): "U(1)"}


def fingerprint(dimension: int, rank: int, roots: int) -> str | None:
    return FINGERPRINTS.get((dimension, rank, roots))


def _restricted(L: LieAlgebra, V: Subspace, s: int):
    """Structure constants of the subalgebra ``V`` in its sample-``s`` basis."""
    B = V.bases[s]
    d = len(B)
    # express a vector in the (reduced) basis through its pivot coordinates
    piv = [min(b) for b in B]
    consts = {}
    for a in range(d):
        for b in range(d):
            w = L._bracket_s(s, B[a], B[b])
            consts[(a, b)] = {k: w[p] for k, p in enumerate(piv) if p in w}
    return d, consts


def _ad_rows(d, consts, x):
    """Sparse rows of ``ad x`` for a coordinate vector ``x`` of the restricted algebra."""
    M = [dict() for _ in range(d)]
    for i, a in x.items():
        for j in range(d):
            for k, v in consts[(i, j)].items():
                M[k][j] = M[k].get(j, QQ_I.zero) + a * v
    return [{j: v for j, v in r.items() if v} for r in M]


def _mat_mul(A, B, d):
    out = []
    for row in A:
        acc = {}
        for k, v in row.items():
            _axpy(acc, v, B[k])
        out.append(acc)
    return out


def _generic_rank(d, consts, seed):
    """Dimension of the generalised null space of ``ad x`` for pseudo-random ``x``."""
    rng = random.Random(f"contactsym-rank-{seed}")
    best = d
    for _ in range(3):
        x = {i: QQ_I(rng.randint(-9, 9), rng.randint(-9, 9)) for i in range(d)}
        x = {i: v for i, v in x.items() if v}
        A = _ad_rows(d, consts, x)
        P = A
        for _ in range(d - 1):
            P = _mat_mul(P, A, d)
        best = min(best, d - len(span(P, d)))
    return best


def _centroid_dim(d, consts):
    """Dimension of the space of maps commuting with every ``ad e_i``."""
    # unknown T[r][c] at index r*d + c; (T ad_i - ad_i T)[r][c] = 0
    rows = []
    ads = [_ad_rows(d, consts, {i: QQ_I.one}) for i in range(d)]
    for A in ads:
        cols = [dict() for _ in range(d)]
        for r, row in enumerate(A):
            for c, v in row.items():
                cols[c][r] = v
        for r in range(d):
            for c in range(d):
                eq = {}
                for k, v in cols[c].items():  # sum_k T[r][k] A[k][c]
                    _axpy(eq, v, {r * d + k: QQ_I.one})
                for k, v in A[r].items():  # - sum_k A[r][k] T[k][c]
                    _axpy(eq, -v, {k * d + c: QQ_I.one})
                if eq:
                    rows.append(eq)
    return len(nullspace(rows, d * d))


def _killing_rank(d, consts):
    ads = [_ad_rows(d, consts, {i: QQ_I.one}) for i in range(d)]
    K = []
    for i in range(d):
        row = {}
        for j in range(d):
            P = _mat_mul(ads[i], ads[j], d)
            t = QQ_I.zero
            for r in range(d):
                t += P[r].get(r, QQ_I.zero)
            if t:
                row[j] = t
        K.append(row)
    return len(span(K, d))


def analyse_ideal(L: LieAlgebra, V: Subspace) -> IdealInfo:
    """Rank, root count and simplicity of an ideal, agreed across samples."""
    results = set()
    for s in range(len(L.samples)):
        d, consts = _restricted(L, V, s)
        abelian = not any(consts.values())
        if abelian:
            results.add((d, d, 0, d == 1, True))
            continue
        rank = _generic_rank(d, consts, s)
        simple = _killing_rank(d, consts) == d and _centroid_dim(d, consts) == 1
        results.add((d, rank, d - rank, simple, False))
    if len(results) != 1:
        raise DegenerateSample(f"ideal analysis differs across parameter samples: {sorted(results)}")
    d, rank, roots, simple, abelian = results.pop()
    return IdealInfo(V.labels(), d, rank, roots, simple and not abelian, abelian, fingerprint(d, rank, roots))


@dataclass
class Split:
    """Reductive quotient ``L/N`` split into one-dimensional centre pieces and simple ideals."""

    nilpotent_radical: Subspace
    quotient: LieAlgebra
    ideals: list[IdealInfo]
    subspaces: list[Subspace] = field(repr=False, default_factory=list)

    @property
    def dims(self):
        return sorted(i.dimension for i in self.ideals)


def semisimple_split(L: LieAlgebra) -> Split:
    N = nilpotent_radical(L)
    labs = N.labels()
    if labs is None:
        raise ValueError("the nilpotent radical is not spanned by basis labels; cannot form the quotient")
    Q = L.quotient(labs)
    Z = center(Q)
    pieces: list[Subspace] = []
    zl = Z.labels()
    if zl is not None:
        pieces.extend(Q.coordinate_subspace([l]) for l in zl)
    elif Z.dim:
        pieces.append(Z)
    S = Q.derived()
    if Z.dim + S.dim != Q.n:
        raise ValueError("quotient by the nilpotent radical is not reductive")
    if S.dim:
        pieces.extend(_minimal_ideals(Q, S))
    total = Q.zero()
    for P in pieces:
        total = total + P
    if total.dim != Q.n or sum(P.dim for P in pieces) != Q.n:
        raise ValueError("ideal pieces do not form a direct sum decomposition")
    infos = [analyse_ideal(Q, P) for P in pieces]
    order = sorted(range(len(pieces)), key=lambda k: (infos[k].dimension, infos[k].labels or []))
    return Split(N, Q, [infos[k] for k in order], [pieces[k] for k in order])


# -- Cartan and root verification -----------------------------------------------------

@dataclass
class CartanReport:
    dimension: int
    subalgebra: bool
    nilpotent: bool
    self_normalizing: bool
    normalizer_dimension: int

    @property
    def passed(self):
        return self.subalgebra and self.nilpotent and self.self_normalizing

    def as_dict(self):
        return {**self.__dict__, "passed": self.passed}


def verify_cartan(L: LieAlgebra, H: Subspace) -> CartanReport:
    sub = L.is_subalgebra(H)
    nil = False
    if sub:
        cur = H
        for _ in range(H.dim + 1):
            nxt = L.bracket_space(H, cur)
            if nxt.dim == 0:
                nil = True
                break
            if nxt.dim == cur.dim:
                break
            cur = nxt
    Nh = L.normalizer(H)
    return CartanReport(H.dim, sub, nil, Nh.dim == H.dim, Nh.dim)


@dataclass
class RootDatum:
    name: str
    cartan: list  # label combinations
    generators: list  # (name, combination, integer root tuple)


@dataclass
class RootReport:
    name: str
    eigen: dict  # generator name -> list of eigenvalue strings or None
    scales: list
    failures: list
    root_count: int
    spans_ideal: bool

    @property
    def passed(self):
        return not self.failures and self.spans_ideal

    def as_dict(self):
        return {**self.__dict__, "passed": self.passed}


def _ratio(w: dict, e: dict):
    """``c`` with ``w = c e`` exactly, or None."""
    if not w:
        return ParamScalar.const(0)
    lead = next(iter(e))
    c = w.get(lead, ParamScalar.const(0)) / e[lead]
    for k in set(w) | set(e):
        if w.get(k, ParamScalar.const(0)) != c * e.get(k, ParamScalar.const(0)):
            return None
    return c


def verify_roots(L: LieAlgebra, datum: RootDatum) -> RootReport:
    """Check each standard generator is a common ad-eigenvector of the Cartan
    generators with eigenvalues proportional, axis by axis, to its listed root."""
    failures, eigen = [], {}
    for name, E, root in datum.generators:
        if not E:
            failures.append(f"{name}: zero generator")
            continue
        cs = []
        for i, H in enumerate(datum.cartan):
            c = _ratio(L.bracket(H, E), E)
            if c is None:
                failures.append(f"{name}: not an eigenvector of Cartan generator {i + 1}")
            cs.append(c)
        eigen[name] = [None if c is None else str(c) for c in cs]
    rank = len(datum.cartan)
    scales = [None] * rank
    for i in range(rank):
        for name, E, root in datum.generators:
            cs = eigen.get(name)
            if cs is None or cs[i] is None or root[i] == 0:
                continue
            c = L.bracket(datum.cartan[i], E)
            scales[i] = _ratio(c, E) / root[i]
            break
    for i in range(rank):
        if scales[i] is None or not scales[i]:
            if any(r[i] for _, _, r in datum.generators):
                failures.append(f"axis {i + 1}: no nonzero scale")
            continue
        for name, E, root in datum.generators:
            if eigen.get(name) is None or eigen[name][i] is None:
                continue
            c = _ratio(L.bracket(datum.cartan[i], E), E)
            if c != scales[i] * root[i]:
                failures.append(f"{name}: eigenvalue {c} on axis {i + 1} is not {root[i]} x {scales[i]}")
    roots = {tuple(r) for _, _, r in datum.generators if any(r)}
    combos = list(datum.cartan) + [E for _, E, _ in datum.generators]
    labels = sorted({l for c in combos for l in c}, key=L.index.get)
    spans = L.combination_subspace(combos).dim == len(labels)
    return RootReport(datum.name, eigen, [None if s is None else str(s) for s in scales], failures, len(roots), spans)


__all__ = [
    "LieAlgebra", "Subspace", "ClosureFailure", "DegenerateSample", "Chains", "IdealInfo", "Split",
    "CartanReport", "RootDatum", "RootReport", "center", "derived_series", "lower_central_series",
    "radical", "nilpotent_radical", "solvability_chain", "semisimple_split", "analyse_ideal",
    "verify_cartan", "verify_roots", "fingerprint", "FINGERPRINTS", "span", "nullspace", "intersect",
]
