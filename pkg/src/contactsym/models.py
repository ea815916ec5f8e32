"""The concrete generators, potential classes and golden reference data."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cache
from importlib import resources
from typing import Callable

from .coeffring import PSI0, T, ExpPoly, R, RadialPotential, psi, psi_c, psi_r, r
from .exactfield import I, ParamScalar, sample_parameters, sym
from .liealg import LieAlgebra
from .vectorfield import VectorField

CLASSES = ("constant", "harmonic", "inverse_square", "arbitrary")
AXES = (1, 2, 3)

HBAR = sym("hbar")
MASS = sym("m")
TOTAL = sym("M")
OMEGA = sym("omega")
V0 = sym("v0")
V1 = sym("v1")


def levi_civita(a: int, b: int, c: int) -> int:
    return (a - b) * (b - c) * (c - a) // 2


def _v(i):
    return ExpPoly.var(i)


def _c(x):
    return ExpPoly.const(x)


# -- generators -------------------------------------------------------------------

def scaling() -> VectorField:
    return VectorField.from_terms(((psi(a), _v(psi(a))) for a in range(7)), "X_S")


def time_translation() -> VectorField:
    return VectorField.partial(T, I, "X^t")


def translation(kind: str, k: int) -> VectorField:
    var = R(k) if kind == "c" else r(k)
    return VectorField.partial(var, -I, f"X_T^{kind}{k}")


def galilean(kind: str, k: int) -> VectorField:
    mass = TOTAL if kind == "c" else MASS
    coord = R(k) if kind == "c" else r(k)
    grad = psi_c(k) if kind == "c" else psi_r(k)
    inner = scaling() * _v(coord) + VectorField.partial(grad, _v(PSI0))
    X = translation(kind, k) * _v(T) + inner * (mass / HBAR)
    return X.named(f"X_G^{kind}{k}")


def rotation(kind: str, k: int) -> VectorField:
    coord = R if kind == "c" else r
    grad = psi_c if kind == "c" else psi_r
    terms = []
    for b in AXES:
        for g in AXES:
            e = levi_civita(k, b, g)
            if e:
                terms.append((coord(g), _c(-I * e) * _v(coord(b))))
                terms.append((grad(g), _c(-I * e) * _v(grad(b))))
    return VectorField.from_terms(terms, f"X_R^{kind}{k}")


def cross_rotation(alpha: int, lam: int) -> VectorField:
    ratio = sym("sm") / sym("sM")  # sqrt(m/M)
    terms = [
        (R(alpha), _c(-I * ratio) * _v(r(lam))),
        (psi_r(lam), _c(I * ratio) * _v(psi_c(alpha))),
        (r(lam), _c(I / ratio) * _v(R(alpha))),
        (psi_c(alpha), _c(-I / ratio) * _v(psi_r(lam))),
    ]
    return VectorField.from_terms(terms, f"X^c{alpha};r{lam}")


def _translations_weighted(weight: ExpPoly) -> VectorField:
    X = VectorField()
    for k in AXES:
        X = X - translation("c", k) * (weight * _v(R(k))) - translation("r", k) * (weight * _v(r(k)))
    return X


def dilation() -> VectorField:
    t = _v(T)
    X = (time_translation() * (2 * t) + _translations_weighted(ExpPoly.const(1))
         + scaling() * (_c(2 * V0) * t) + VectorField.partial(PSI0, _c(I) * _v(PSI0)))
    return X.named("X_1")


def projective() -> VectorField:
    t = _v(T)
    R2 = sum((_v(R(k)) ** 2 for k in AXES), ExpPoly())
    rho = ExpPoly.rho()
    weight = _c(TOTAL / (2 * HBAR)) * R2 + _c(MASS / (2 * HBAR)) * rho + _c(4 * I) * t - _c(V0) * t * t
    inner = VectorField.partial(PSI0, _c(-I) * t)
    for k in AXES:
        inner = inner + VectorField.partial(psi_c(k), _c(TOTAL / HBAR) * _v(R(k)))
        inner = inner + VectorField.partial(psi_r(k), _c(MASS / HBAR) * _v(r(k)))
    X = time_translation() * (t * t) + _translations_weighted(t) - scaling() * weight - inner * _v(PSI0)
    return X.named("X_2")


def vibration(lam: int, sign: int) -> VectorField:
    k = _c(sign * I * MASS * OMEGA / HBAR)
    inner = (translation("r", lam) + scaling() * (k * _v(r(lam)))
             + VectorField.partial(psi_r(lam), k * _v(PSI0)))
    return (inner * ExpPoly.exp(sign)).named(f"X_V^r{lam}{'+' if sign > 0 else '-'}")


@dataclass(frozen=True)
class GeneratorSpec:
    label: str
    classes: frozenset
    build: Callable[[], VectorField]


def _spec(label, classes, build):
    return GeneratorSpec(label, frozenset(classes), build)


_ALL = CLASSES
_CONST = ("constant",)
_CONST_INV = ("constant", "inverse_square")


def _generator_specs():
    specs = [_spec("X_S", _ALL, scaling), _spec("X^t", _ALL, time_translation)]
    for kind, who in (("c", _ALL), ("r", _CONST)):
        for k in AXES:
            specs.append(_spec(f"X_T^{kind}{k}", who, lambda kind=kind, k=k: translation(kind, k)))
        for k in AXES:
            specs.append(_spec(f"X_G^{kind}{k}", who, lambda kind=kind, k=k: galilean(kind, k)))
        for k in AXES:
            specs.append(_spec(f"X_R^{kind}{k}", _ALL, lambda kind=kind, k=k: rotation(kind, k)))
    for a in AXES:
        for l in AXES:
            specs.append(_spec(f"X^c{a};r{l}", _CONST, lambda a=a, l=l: cross_rotation(a, l)))
    specs.append(_spec("X_1", _CONST_INV, dilation))
    specs.append(_spec("X_2", _CONST_INV, projective))
    for sign in (1, -1):
        for l in AXES:
            lab = f"X_V^r{l}{'+' if sign > 0 else '-'}"
            specs.append(_spec(lab, ("harmonic",), lambda l=l, sign=sign: vibration(l, sign)))
    return specs


GENERATOR_SPECS = tuple(_generator_specs())
LABELS = tuple(s.label for s in GENERATOR_SPECS)


@cache
def generator(label: str) -> VectorField:
    for s in GENERATOR_SPECS:
        if s.label == label:
            return s.build()
    raise KeyError(f"unknown generator {label!r}")


def all_generators() -> list[VectorField]:
    return [generator(l) for l in LABELS]


def class_labels(cls: str) -> list[str]:
    check_class(cls)
    return [s.label for s in GENERATOR_SPECS if cls in s.classes]


def generator_table(cls: str) -> list[VectorField]:
    return [generator(l) for l in class_labels(cls)]


@cache
def class_algebra(cls: str, seed: int = 0, samples: int = 3) -> LieAlgebra:
    """The class algebra with its brackets computed from the vector fields."""
    sigma = [sample_parameters(seed + j) for j in range(samples)]
    return LieAlgebra.from_vector_fields(generator_table(cls), samples=sigma)


def check_class(cls: str) -> str:
    if cls not in CLASSES:
        raise ValueError(f"unknown potential class {cls!r}; choose from {', '.join(CLASSES)}")
    return cls


def potential(cls: str) -> RadialPotential | None:
    """The radial potential of a class, or None for the abstract tower."""
    check_class(cls)
    if cls == "constant":
        return RadialPotential({0: V0})
    if cls == "harmonic":
        return RadialPotential({0: V0, 1: MASS * OMEGA * OMEGA / (2 * HBAR)})
    if cls == "inverse_square":
        return RadialPotential({0: V0, -1: -V1})
    return None


# -- golden data -----------------------------------------------------------------

def _load(name):
    return json.loads(resources.files("contactsym.data").joinpath(name).read_text())


@cache
def golden() -> dict:
    return _load("golden.json")


@cache
def allowlist() -> list[dict]:
    return _load("allowlist.json")["entries"]


def parse_combination(terms) -> dict[str, ParamScalar]:
    """``[["2*I", "X_2"], ...]`` -> ``{"X_2": 2i}``."""
    out: dict[str, ParamScalar] = {}
    for coeff, label in terms:
        c = out.get(label, ParamScalar.const(0)) + ParamScalar.parse(coeff)
        if c:
            out[label] = c
        else:
            out.pop(label, None)
    return out


def expected_brackets(cls: str | None = None) -> list[dict]:
    """Every pair of generators sharing a class, with its expected combination.

    Pairs absent from the table are expected to commute.
    """
    table = {(b["left"], b["right"]): parse_combination(b["value"]) for b in golden()["brackets"]}
    if cls is None:
        members = {l: {c for c in CLASSES if l in class_labels(c)} for l in LABELS}
        pairs = [(a, b) for i, a in enumerate(LABELS) for b in LABELS[i + 1:] if members[a] & members[b]]
    else:
        labels = class_labels(cls)
        pairs = [(a, b) for i, a in enumerate(labels) for b in labels[i + 1:]]
    out = []
    for a, b in pairs:
        if (a, b) in table:
            val = table[(a, b)]
        elif (b, a) in table:
            val = {k: -v for k, v in table[(b, a)].items()}
        else:
            val = {}
        out.append({"left": a, "right": b, "expected": val})
    return out


def compare_brackets(algebra, cls: str | None = None) -> list[dict]:
    """Computed brackets of a class algebra against the transcribed table.

    Returns one record per mismatching pair, flagged when the pair is on the
    allowlist of known transcription slips.
    """
    allowed = {(e["left"], e["right"]) for e in allowlist()}
    out = []
    for e in expected_brackets(cls):
        a, b = e["left"], e["right"]
        if a not in algebra.index or b not in algebra.index:
            continue
        raw = algebra.bracket_basis(algebra.index[a], algebra.index[b])
        computed = {algebra.labels[k]: v for k, v in raw.items()}
        if computed != e["expected"]:
            out.append({
                "left": a, "right": b,
                "computed": render_combination(computed),
                "golden": render_combination(e["expected"]),
                "allowlisted": (a, b) in allowed or (b, a) in allowed,
            })
    return out


def render_combination(comb: dict[str, ParamScalar]) -> str:
    if not comb:
        return "0"
    parts = []
    for label in sorted(comb, key=LABELS.index):
        s = str(comb[label])
        parts.append(f"{label}" if s == "1" else f"-{label}" if s == "-1" else f"({s})*{label}")
    return " + ".join(parts)


def diff_against_golden(computed: dict, expected: dict, prefix: str = "") -> list[dict]:
    """Compare two nested records; returns ``{item, computed, golden}`` entries."""
    out = []
    keys = sorted(set(computed) | set(expected))
    for k in keys:
        item = f"{prefix}{k}"
        a, b = computed.get(k), expected.get(k)
        if isinstance(a, dict) and isinstance(b, dict):
            out.extend(diff_against_golden(a, b, item + "."))
        elif a != b:
            out.append({"item": item, "computed": a, "golden": b})
    return out
