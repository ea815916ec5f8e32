"""Polynomial invariants of the class algebras.

Invariance is checked in the symmetric algebra, where ``ad X_a`` acts as
a derivation.  A small PBW engine for the enveloping algebra supports the
cross-check that symmetrisation intertwines the two actions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import permutations
from math import factorial
from typing import Callable, Mapping, Sequence

from .exactfield import I, ParamScalar, sym
from .liealg import LieAlgebra
from .models import AXES, HBAR, MASS, OMEGA, TOTAL, V0, check_class, levi_civita

_ZERO = ParamScalar.const(0)
_ONE = ParamScalar.const(1)


def _scalar(c) -> ParamScalar:
    return c if isinstance(c, ParamScalar) else ParamScalar.const(c)


def _acc(d, k, v):
    s = d.get(k)
    s = v if s is None else s + v
    if s:
        d[k] = s
    else:
        d.pop(k, None)


class SymPoly:
    """Commutative polynomial; a monomial is the sorted tuple of its variable indices."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def var(cls, i: int) -> "SymPoly":
        return cls({(i,): _ONE})

    @classmethod
    def const(cls, c) -> "SymPoly":
        return cls({(): _scalar(c)})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, ParamScalar)):
            other = SymPoly.const(other)
        return isinstance(other, SymPoly) and self.terms == other.terms

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return SymPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return SymPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, ParamScalar)):
            c = _scalar(other)
            return SymPoly({k: v * c for k, v in self.terms.items()})
        out: dict = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                _acc(out, tuple(sorted(ka + kb)), va * vb)
        return SymPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = SymPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    @property
    def degree(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    def variables(self) -> set:
        return {i for k in self.terms for i in k}

    def partial(self, i: int) -> "SymPoly":
        out: dict = {}
        for k, v in self.terms.items():
            e = k.count(i)
            if e:
                j = k.index(i)
                _acc(out, k[:j] + k[j + 1:], v * e)
        return SymPoly(out)

    def compose(self, images: Mapping[int, "SymPoly"]) -> "SymPoly":
        """Substitute polynomials for some variables."""
        out = SymPoly()
        cache: dict = {}
        for k, v in self.terms.items():
            term = SymPoly({(): v})
            plain = []
            for i, e in Counter(k).items():
                if i in images:
                    if (i, e) not in cache:
                        cache[(i, e)] = images[i] ** e
                    term = term * cache[(i, e)]
                else:
                    plain.extend([i] * e)
            if plain:
                term = SymPoly({tuple(sorted(m + tuple(plain))): c for m, c in term.terms.items()})
            out = out + term
        return out

    def minimal_monomial(self, names: Sequence[str]):
        """The lowest (degree, lexicographic) monomial with its coefficient."""
        if not self.terms:
            return None
        k = min(self.terms, key=lambda m: (len(m), m))
        return render_monomial(k, names), str(self.terms[k])

    def render(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda m: (len(m), m)):
            c = str(self.terms[k])
            mono = render_monomial(k, names)
            if not mono:
                parts.append(c)
            elif c == "1":
                parts.append(mono)
            elif c == "-1":
                parts.append(f"-{mono}")
            else:
                parts.append(f"({c})*{mono}")
        return " + ".join(parts)


def _coerce(x) -> SymPoly:
    return x if isinstance(x, SymPoly) else SymPoly.const(x)


def render_monomial(k, names) -> str:
    return "*".join(f"{names[i]}^{e}" if e > 1 else names[i] for i, e in sorted(Counter(k).items()))


# -- the coadjoint derivation ---------------------------------------------------------

def ad_derivation(L: LieAlgebra, a: int, P: SymPoly) -> SymPoly:
    """The derivation extending ``Y_j -> sum_k c_aj^k Y_k``."""
    out: dict = {}
    for k, v in P.terms.items():
        for j, e in Counter(k).items():
            br = L.bracket_basis(a, j)
            if not br:
                continue
            pos = k.index(j)
            rest = k[:pos] + k[pos + 1:]
            ve = v * e
            for m, c in br.items():
                _acc(out, tuple(sorted(rest + (m,))), ve * c)
    return SymPoly(out)


def poisson_bracket(L: LieAlgebra, P: SymPoly, Q: SymPoly) -> SymPoly:
    """Lie-Poisson bracket ``sum_ij dP/dY_i dQ/dY_j [Y_i, Y_j]``."""
    out = SymPoly()
    dQ = {j: Q.partial(j) for j in Q.variables()}
    for i in P.variables():
        dPi = P.partial(i)
        for j, dQj in dQ.items():
            br = L.bracket_basis(i, j)
            if br:
                lin = SymPoly({(k,): v for k, v in br.items()})
                out = out + dPi * dQj * lin
    return out


# -- auxiliaries and invariants -------------------------------------------------------

class _Builder:
    """Variables named by generator label, for transcribing polynomial tables."""

    def __init__(self, L: LieAlgebra):
        self.L = L

    def __call__(self, label: str) -> SymPoly:
        return SymPoly.var(self.L.index[label])


def build_auxiliaries(L: LieAlgebra, cls: str) -> dict[str, SymPoly]:
    """The quadratic auxiliary operators of a class, in generator symbols."""
    check_class(cls)
    X = _Builder(L)
    S = X("X_S")
    aux: dict[str, SymPoly] = {}

    def eps(fam_a, fam_b, a):
        return sum((X(fam_a.format(b)) * X(fam_b.format(g)) * levi_civita(a, b, g)
                    for b in AXES for g in AXES if levi_civita(a, b, g)), SymPoly())

    for a in AXES:
        aux[f"Y_R^c{a}"] = S * X(f"X_R^c{a}") + eps("X_T^c{}", "X_G^c{}", a) * (HBAR / TOTAL)
    if cls == "constant":
        for l in AXES:
            aux[f"Y_R^r{l}"] = S * X(f"X_R^r{l}") + eps("X_T^r{}", "X_G^r{}", l) * (HBAR / MASS)
        root = sym("sm") * sym("sM")  # sqrt(m M)
        for a in AXES:
            for l in AXES:
                aux[f"Y^c{a};r{l}"] = (S * X(f"X^c{a};r{l}")
                                       + (X(f"X_G^c{a}") * X(f"X_T^r{l}") - X(f"X_T^c{a}") * X(f"X_G^r{l}")) * (HBAR / root))
    if cls == "harmonic":
        for l in AXES:
            aux[f"Y_R^r{l}"] = S * X(f"X_R^r{l}") + eps("X_V^r{}+", "X_V^r{}-", l) * (I * HBAR / (2 * MASS * OMEGA))
    kin_c = sum((X(f"X_T^c{a}") ** 2 for a in AXES), SymPoly()) * (HBAR / (2 * TOTAL))
    Yt = S * X("X^t") + kin_c
    if cls in ("constant", "inverse_square"):
        Yt = Yt + S * S * V0
    if cls == "constant":
        Yt = Yt + sum((X(f"X_T^r{l}") ** 2 for l in AXES), SymPoly()) * (HBAR / (2 * MASS))
    if cls == "harmonic":
        Yt = Yt + sum((X(f"X_V^r{l}+") * X(f"X_V^r{l}-") for l in AXES), SymPoly()) * (HBAR / (2 * MASS))
    aux["Y^t"] = Yt
    if cls in ("constant", "inverse_square"):
        Y1 = S * X("X_1") - S * S * 4 * I
        Y1 = Y1 + sum((X(f"X_T^c{a}") * X(f"X_G^c{a}") for a in AXES), SymPoly()) * (HBAR / TOTAL)
        Y2 = S * X("X_2") + sum((X(f"X_G^c{a}") ** 2 for a in AXES), SymPoly()) * (HBAR / (2 * TOTAL))
        if cls == "constant":
            Y1 = Y1 + sum((X(f"X_T^r{l}") * X(f"X_G^r{l}") for l in AXES), SymPoly()) * (HBAR / MASS)
            Y2 = Y2 + sum((X(f"X_G^r{l}") ** 2 for l in AXES), SymPoly()) * (HBAR / (2 * MASS))
        aux["Y_1"] = Y1
        aux["Y_2"] = Y2
    return aux


@dataclass(frozen=True)
class Invariant:
    name: str
    poly: SymPoly

    @property
    def degree(self):
        return self.poly.degree


def _casimir_terms(Y: Callable[[str], SymPoly]):
    """The cubic and quartic mixed invariants of the constant class."""
    yc = {a: Y(f"Y_R^c{a}") for a in AXES}
    yr = {l: Y(f"Y_R^r{l}") for l in AXES}
    ycr = {(a, l): Y(f"Y^c{a};r{l}") for a in AXES for l in AXES}
    eps = [(a, b, g, levi_civita(a, b, g)) for a in AXES for b in AXES for g in AXES if levi_civita(a, b, g)]
    i3 = sum((yc[a] * ycr[(a, l)] * yr[l] for a in AXES for l in AXES), SymPoly())
    cub = SymPoly()
    for a, b, g, e1 in eps:
        for l, m, n, e2 in eps:
            cub = cub + ycr[(a, l)] * ycr[(b, m)] * ycr[(g, n)] * (e1 * e2)
    i3 = i3 - cub * (ParamScalar.const(1) / 6)
    # W[a][l] = sum e_abg e_lmn Y^{cb;rm} Y^{cg;rn}
    W = {}
    for a in AXES:
        for l in AXES:
            w = SymPoly()
            for a2, b, g, e1 in eps:
                if a2 != a:
                    continue
                for l2, m, n, e2 in eps:
                    if l2 == l:
                        w = w + ycr[(b, m)] * ycr[(g, n)] * (e1 * e2)
            W[(a, l)] = w
    sc = sum((yc[a] ** 2 for a in AXES), SymPoly())
    sr = sum((yr[l] ** 2 for l in AXES), SymPoly())
    i4 = sc * sr
    i4 = i4 + sum((sum((ycr[(a, l)] * yr[l] for l in AXES), SymPoly()) ** 2 for a in AXES), SymPoly())
    i4 = i4 + sum((sum((yc[a] * ycr[(a, l)] for a in AXES), SymPoly()) ** 2 for l in AXES), SymPoly())
    i4 = i4 + sum((W[k] ** 2 for k in W), SymPoly()) * (ParamScalar.const(1) / 4)
    i4 = i4 - sum((yc[a] * W[(a, l)] * yr[l] for a in AXES for l in AXES), SymPoly())
    return i3, i4


class AuxiliaryRing:
    """Polynomials in generator symbols extended by one symbol per auxiliary."""

    def __init__(self, L: LieAlgebra, aux: Mapping[str, SymPoly]):
        self.L = L
        self.aux_names = list(aux)
        self.names = list(L.labels) + self.aux_names
        self.images = {L.n + k: aux[name] for k, name in enumerate(self.aux_names)}

    def __call__(self, name: str) -> SymPoly:
        if name in self.L.index:
            return SymPoly.var(self.L.index[name])
        return SymPoly.var(self.L.n + self.aux_names.index(name))

    def expand(self, P: SymPoly) -> SymPoly:
        return P.compose(self.images)


def build_invariants(L: LieAlgebra, cls: str, with_ring: bool = False):
    """The invariant basis of a class as polynomials in generator symbols."""
    ring = AuxiliaryRing(L, build_auxiliaries(L, cls))
    Y = ring
    I_t = Y("Y_2") * Y("Y^t") - Y("Y_1") ** 2 * (ParamScalar.const(1) / 4) if cls in ("constant", "inverse_square") else Y("Y^t")
    out = [("I_S", Y("X_S")), ("I^t", I_t)]
    if cls == "constant":
        i0 = sum((Y(n) ** 2 for n in ring.aux_names if n.startswith("Y_R^") or n.startswith("Y^c")), SymPoly())
        i3, i4 = _casimir_terms(Y)
        out += [("I^0_R", i0), ("I^c;r_3", i3), ("I^c;r_4", i4)]
    else:
        out.append(("I_R^c", sum((Y(f"Y_R^c{a}") ** 2 for a in AXES), SymPoly())))
        inner = "Y_R^r{}" if cls == "harmonic" else "X_R^r{}"
        out.append(("I_R^r", sum((Y(inner.format(l)) ** 2 for l in AXES), SymPoly())))
    invs = [Invariant(name, ring.expand(P)) for name, P in out]
    return (invs, ring, out) if with_ring else invs


def mutated_energy_invariant(L: LieAlgebra, cls: str) -> SymPoly:
    """``I^t`` with the sign of its ``(Y_1)^2`` term flipped (classes that have one)."""
    ring = AuxiliaryRing(L, build_auxiliaries(L, cls))
    if "Y_1" not in ring.aux_names:
        raise ValueError(f"class {cls!r} has no (Y_1)^2 term to mutate")
    P = ring("Y_2") * ring("Y^t") + ring("Y_1") ** 2 * (ParamScalar.const(1) / 4)
    return ring.expand(P)


@dataclass
class Residual:
    generator: str
    residual: SymPoly

    @property
    def zero(self):
        return not self.residual


def check_invariant(L: LieAlgebra, P: SymPoly) -> list[Residual]:
    return [Residual(L.labels[a], ad_derivation(L, a, P)) for a in range(L.n)]


# -- universal enveloping algebra -----------------------------------------------------

class UEAElement:
    """Formal sum of words (tuples of basis indices) with ParamScalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def word(cls, *idx, coeff=1) -> "UEAElement":
        return cls({tuple(idx): _scalar(coeff)})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return UEAElement(out)

    def __neg__(self):
        return UEAElement({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = _scalar(c)
        return UEAElement({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        out: dict = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                _acc(out, ka + kb, va * vb)
        return UEAElement(out)

    def __eq__(self, other):
        return isinstance(other, UEAElement) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def is_normal(self) -> bool:
        return all(all(w[i] <= w[i + 1] for i in range(len(w) - 1)) for w in self.terms)

    def render(self, names) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            word = "*".join(names[i] for i in w) or "1"
            c = str(self.terms[w])
            parts.append(word if c == "1" else f"-{word}" if c == "-1" else f"({c})*{word}")
        return " + ".join(parts)


class PBW:
    """Normal forms in the enveloping algebra of ``L`` (non-decreasing words)."""

    def __init__(self, L: LieAlgebra):
        self.L = L
        self._memo: dict = {}

    def _word(self, w: tuple) -> dict:
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        for i in range(len(w) - 1):
            if w[i] > w[i + 1]:
                b, a = w[i], w[i + 1]
                out = dict(self._word(w[:i] + (a, b) + w[i + 2:]))
                for k, c in self.L.bracket_basis(b, a).items():
                    for ww, v in self._word(w[:i] + (k,) + w[i + 2:]).items():
                        _acc(out, ww, c * v)
                break
        else:
            out = {w: _ONE}
        self._memo[w] = out
        return out

    def normal_form(self, x: UEAElement) -> UEAElement:
        out: dict = {}
        for w, c in x.terms.items():
            for ww, v in self._word(w).items():
                _acc(out, ww, c * v)
        return UEAElement(out)

    def commutator(self, a: int, x: UEAElement) -> UEAElement:
        Xa = UEAElement.word(a)
        return self.normal_form(Xa * x - x * Xa)

    def symmetrize(self, P: SymPoly, max_degree: int = 3) -> UEAElement:
        """Average each monomial over all orderings, then normalise."""
        if P.degree > max_degree:
            raise ValueError(f"symmetrisation is limited to degree {max_degree}")
        out = UEAElement()
        for k, v in P.terms.items():
            n = factorial(len(k))
            words: dict = {}
            for perm in permutations(k):
                words[perm] = words.get(perm, 0) + 1
            avg = UEAElement({w: v * ParamScalar.const(c) / n for w, c in words.items()})
            out = out + self.normal_form(avg)
        return out


def pbw_normal_form(L: LieAlgebra, w: UEAElement) -> UEAElement:
    return PBW(L).normal_form(w)


def symmetrize(L: LieAlgebra, P: SymPoly) -> UEAElement:
    return PBW(L).symmetrize(P)


@dataclass
class EquivarianceReport:
    checked: int
    failures: list

    @property
    def passed(self):
        return not self.failures


def equivariance_check(L: LieAlgebra, max_degree: int = 2, generators: Sequence[int] | None = None) -> EquivarianceReport:
    """``[X_a, sym(P)] == sym(ad_a P)`` for every monomial ``P`` of degree at most ``max_degree``."""
    pbw = PBW(L)
    gens = range(L.n) if generators is None else generators
    monos = [()]
    layer = [()]
    for _ in range(max_degree):
        layer = sorted({tuple(sorted(m + (i,))) for m in layer for i in range(L.n)})
        monos.extend(layer)
    failures, count = [], 0
    for m in monos:
        P = SymPoly({m: _ONE})
        sP = pbw.symmetrize(P)
        for a in gens:
            count += 1
            lhs = pbw.commutator(a, sP)
            rhs = pbw.symmetrize(ad_derivation(L, a, P))
            if lhs != rhs:
                failures.append((L.labels[a], render_monomial(m, L.labels)))
    return EquivarianceReport(count, failures)


__all__ = [
    "SymPoly", "ad_derivation", "poisson_bracket", "build_auxiliaries", "build_invariants", "Invariant",
    "AuxiliaryRing", "mutated_energy_invariant", "check_invariant", "Residual", "UEAElement", "PBW",
    "pbw_normal_form", "symmetrize", "equivariance_check", "EquivarianceReport", "render_monomial",
]
