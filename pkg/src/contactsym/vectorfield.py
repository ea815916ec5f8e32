"""First-order differential operators on (q, Psi) space and their first extension."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .coeffring import (
    BASE_NAMES,
    NBASE,
    ZERO_POLY,
    ExpPoly,
    differentiate,
    is_jet,
    jet,
    psi,
    substitute,
)
from .exactfield import ParamScalar

NQ = 7


class JetVariablePresent(ValueError):
    """``apply`` was given a function of jet variables."""


class NotInSpan(ValueError):
    """A vector field is not a combination of the given basis."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


def _coerce_coeff(c) -> ExpPoly:
    return c if isinstance(c, ExpPoly) else ExpPoly.const(c)


class VectorField:
    """``sum_a xi^a d/dq^a + chi^a d/dPsi^a``; ``comps[i]`` multiplies ``d/d(base variable i)``."""

    __slots__ = ("comps", "label")

    def __init__(self, comps: Sequence[ExpPoly] | None = None, label: str | None = None):
        if comps is None:
            comps = [ZERO_POLY] * NBASE
        comps = list(comps)
        if len(comps) != NBASE:
            raise ValueError(f"expected {NBASE} components, got {len(comps)}")
        for c in comps:
            if c.has_jets():
                raise JetVariablePresent("vector field components may not depend on jet variables")
        self.comps = comps
        self.label = label

    @classmethod
    def partial(cls, var: int, coeff=1, label=None) -> "VectorField":
        comps = [ZERO_POLY] * NBASE
        comps[var] = _coerce_coeff(coeff)
        return cls(comps, label)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, ExpPoly]], label=None) -> "VectorField":
        comps = [ZERO_POLY] * NBASE
        for var, c in terms:
            comps[var] = comps[var] + _coerce_coeff(c)
        return cls(comps, label)

    @property
    def xi(self):
        return self.comps[:NQ]

    @property
    def chi(self):
        return self.comps[NQ:]

    def named(self, label: str) -> "VectorField":
        return VectorField(self.comps, label)

    def is_zero(self) -> bool:
        return not any(self.comps)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField([a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField([a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return VectorField([-a for a in self.comps])

    def __mul__(self, c):
        c = _coerce_coeff(c)
        return VectorField([c * a for a in self.comps])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.comps == other.comps

    def __hash__(self):
        return hash(tuple(self.comps))

    def __str__(self):
        parts = [f"({c})*d/d{BASE_NAMES[i]}" for i, c in enumerate(self.comps) if c]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"VectorField({self.label or str(self)!r})"

    def __call__(self, f: ExpPoly) -> ExpPoly:
        return apply(self, f)

    def flatten(self) -> dict:
        """``{(component, monomial): ParamScalar}``, the coordinates used by basis expansion."""
        out = {}
        for i, c in enumerate(self.comps):
            for mono, s in c.by_monomial().items():
                out[(i, mono)] = s
        return out


def apply(X: VectorField, f: ExpPoly) -> ExpPoly:
    if f.has_jets():
        raise JetVariablePresent("use extended_apply for functions of jet variables")
    return _base_action(X, f)


def _base_action(X, f):
    out = ZERO_POLY
    for i, c in enumerate(X.comps):
        if c:
            d = differentiate(f, i)
            if d:
                out = out + c * d
    return out


def commutator(X: VectorField, Y: VectorField) -> VectorField:
    return VectorField([_base_action(X, b) - _base_action(Y, a) for a, b in zip(X.comps, Y.comps)])


@dataclass
class ExtendedVectorField:
    """A vector field together with its 49 jet components ``chi^{a;b}``."""

    base: VectorField
    ext: dict = field(default_factory=dict)  # (a, b) -> ExpPoly

    @property
    def label(self):
        return self.base.label


def prolong(X: VectorField) -> ExtendedVectorField:
    """First extension: ``chi^{a;b} = D_b chi^a - sum_b' Psi^a_{b'} D_b xi^{b'}``."""
    J = {(a, b): ExpPoly.var(jet(a, b)) for a in range(7) for b in range(NQ)}
    xi, chi = X.xi, X.chi

    def total(f, b):
        out = differentiate(f, b)
        for a2 in range(7):
            d = differentiate(f, psi(a2))
            if d:
                out = out + J[(a2, b)] * d
        return out

    dxi = {(bp, b): total(xi[bp], b) for bp in range(NQ) if xi[bp] for b in range(NQ)}
    ext = {}
    for a in range(7):
        for b in range(NQ):
            v = total(chi[a], b)
            for bp in range(NQ):
                d = dxi.get((bp, b))
                if d:
                    v = v - J[(a, bp)] * d
            ext[(a, b)] = v
    return ExtendedVectorField(X, ext)


def extended_apply(X1: ExtendedVectorField, f: ExpPoly) -> ExpPoly:
    out = _base_action(X1.base, f)
    for (a, b), c in X1.ext.items():
        if c:
            d = differentiate(f, jet(a, b))
            if d:
                out = out + c * d
    return out


def extended_commutator(X1: ExtendedVectorField, Y1: ExtendedVectorField) -> dict:
    """Jet components of the bracket of two extended fields."""
    return {k: extended_apply(X1, Y1.ext[k]) - extended_apply(Y1, X1.ext[k]) for k in X1.ext}


def contact_lift(point: VectorField) -> VectorField:
    """Complete a generator given by its (q, Psi0) part with the gradient components
    ``chi^g = chi^{0;g}`` restricted to ``Psi^0_{q^g} = Psi^g``."""
    X1 = prolong(point)
    bind = {jet(0, g): ExpPoly.var(psi(g)) for g in range(1, 7)}
    comps = list(point.comps)
    for g in range(1, 7):
        v = substitute(X1.ext[(0, g)], bind)
        if v.has_jets():
            raise JetVariablePresent("the point part does not lift to a jet-free contact field")
        comps[psi(g)] = v
    return VectorField(comps, point.label)


class FieldBasis:
    """Echelonised basis used to read off coordinates of vector fields."""

    def __init__(self, basis: Sequence[VectorField]):
        self.basis = list(basis)
        self.n = len(self.basis)
        self.pivots = []  # (key, pivot value, reduced vector, transform)
        for k, B in enumerate(self.basis):
            v = B.flatten()
            t = {k: ParamScalar.const(1)}
            v, t = self._reduce(v, t)
            if not v:
                raise ValueError(f"basis element {B.label or k} is linearly dependent on earlier ones")
            key = min(v, key=lambda kk: (not v[kk].is_monomial(), kk[0], repr(kk[1])))
            self.pivots.append((key, v[key], v, t))

    def _reduce(self, v, t):
        for key, pv, pvec, ptr in self.pivots:
            c = v.get(key)
            if c is None:
                continue
            f = c / pv
            for kk, s in pvec.items():
                nv = v[kk] - f * s if kk in v else -(f * s)
                if nv:
                    v[kk] = nv
                else:
                    v.pop(kk, None)
            for j, s in ptr.items():
                nt = t.get(j, ParamScalar.const(0)) - f * s
                if nt:
                    t[j] = nt
                else:
                    t.pop(j, None)
        return v, t

    def express(self, X: VectorField) -> list[ParamScalar]:
        v, t = self._reduce(X.flatten(), {})
        if v:
            raise NotInSpan(f"{X.label or 'field'} is not in the span of the basis", render_flat(v))
        zero = ParamScalar.const(0)
        return [-t.get(k, zero) for k in range(self.n)]


def render_flat(v: dict) -> str:
    from .coeffring import render_mono
    items = sorted(v.items(), key=lambda kv: (kv[0][0], repr(kv[0][1])))
    return "; ".join(f"d/d{BASE_NAMES[i]}: ({s})*{render_mono(m) or '1'}" for (i, m), s in items)


def express_in_basis(X: VectorField, basis: Sequence[VectorField] | FieldBasis) -> list[ParamScalar]:
    fb = basis if isinstance(basis, FieldBasis) else FieldBasis(basis)
    return fb.express(X)


def combination(coeffs: Sequence, basis: Sequence[VectorField]) -> VectorField:
    out = VectorField()
    for c, B in zip(coeffs, basis):
        if c:
            out = out + B * c
    return out


__all__ = [
    "VectorField", "ExtendedVectorField", "FieldBasis", "JetVariablePresent", "NotInSpan",
    "apply", "commutator", "prolong", "extended_apply", "extended_commutator",
    "contact_lift", "express_in_basis", "combination", "is_jet",
]
