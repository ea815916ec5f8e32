"""Exponential polynomials on the jet space.

Every quantity the engine manipulates (velocity vectors, prolonged
components, residuals, defining equations) is an :class:`ExpPoly`: a finite
sum of terms ``scalar * monomial``.  Monomials are products of *atoms*:

* the 14 base coordinates ``t, R1..R3, r1..r3, Psi0, Psic1..3, Psir1..3``
  and the 49 jet coordinates ``Psi<a>_<b>`` (first derivatives);
* ``rho = r1**2 + r2**2 + r3**2``, allowed with negative exponents;
* the exponential ``E = exp(I*omega*t)`` with integer exponents;
* the potential tower ``w0 = v(r)``, ``w1 = v'(r)/r``, ... with
  ``d w_k / d r_l = r_l * w_{k+1}``;
* abstract functions (unknown velocity vectors, ``b(t)``, ``f0(t,R,r)``...),
  each carrying a derivative multi-index.

``r1**2`` is always rewritten as ``rho - r2**2 - r3**2``; with this rule the
monomials ``r1**e r2**a r3**b rho**k`` (``e`` in {0, 1}) form a basis of the
ring of polynomials in r with powers of ``rho`` inverted, so the term
dictionary is a canonical form and equality is dictionary equality.

Scalar coefficients are stored flattened: the dictionary key is
``(monomial, parameter_key)`` and the value a rational number.
"""

from __future__ import annotations

from math import factorial
from typing import Callable, Iterable, Mapping

from gmpy2 import mpq as Q

from .exactfield import (
    NPARAM,
    ONE_KEY,
    PARAMS,
    ParamScalar,
    key_mul,
    render_key,
)

# -- the variable universe -----------------------------------------------

Q_NAMES = ("t", "R1", "R2", "R3", "r1", "r2", "r3")
DEP_NAMES = ("0", "c1", "c2", "c3", "r1", "r2", "r3")
BASE_NAMES = Q_NAMES + tuple("Psi" + a for a in DEP_NAMES)
NBASE = len(BASE_NAMES)  # 14

T = 0
PSI0 = 7
RHO = 63
EXPW = 64
W_BASE = 100
FUNC_BASE = 1000
_R1 = 4
_SMALL_R = (4, 5, 6)
_OMEGA_I_KEY = tuple(1 if p == "omega" else 0 for p in PARAMS) + (1,)


def R(alpha: int) -> int:
    """Centre-of-mass coordinate ``R_alpha`` (alpha = 1..3)."""
    return alpha


def r(lam: int) -> int:
    """Relative coordinate ``r_lambda``."""
    return 3 + lam


def psi_c(alpha: int) -> int:
    return 7 + alpha


def psi_r(lam: int) -> int:
    return 10 + lam


def q(b: int) -> int:
    """Independent coordinate number ``b`` (0 = t, 1..3 = R, 4..6 = r)."""
    return b


def psi(a: int) -> int:
    """Dependent variable number ``a`` (0 = Psi0, 1..3 = Psic, 4..6 = Psir)."""
    return 7 + a


def jet(a: int, b: int) -> int:
    """Jet coordinate ``Psi^a_{q^b}``."""
    return NBASE + 7 * a + b


def jet_indices(atom: int) -> tuple[int, int]:
    return divmod(atom - NBASE, 7)


def is_jet(atom: int) -> bool:
    return NBASE <= atom < NBASE + 49


JET_ATOMS = tuple(jet(a, b) for a in range(7) for b in range(7))
GRADIENT_JETS = tuple(jet(a, b) for a in range(1, 7) for b in range(7))


class RecursiveBinding(ValueError):
    """A substitution right-hand side mentions a bound variable."""


# -- abstract functions ----------------------------------------------------

class _FunctionRegistry:
    """Interns ``(name, derivative multi-index)`` pairs as integer atoms."""

    def __init__(self):
        self.args: dict[str, frozenset[int]] = {}
        self.ids: dict[tuple[str, tuple[int, ...]], int] = {}
        self.entries: list[tuple[str, tuple[int, ...]]] = []

    def declare(self, name: str, args: Iterable[int]):
        args = frozenset(args)
        old = self.args.get(name)
        if old is not None and old != args:
            raise ValueError(f"function {name!r} already declared with arguments {sorted(old)}")
        self.args[name] = args

    def atom(self, name: str, deriv: tuple[int, ...] = ()) -> int:
        key = (name, deriv)
        at = self.ids.get(key)
        if at is None:
            if name not in self.args:
                raise KeyError(f"undeclared function {name!r}")
            at = FUNC_BASE + len(self.entries)
            self.entries.append(key)
            self.ids[key] = at
        return at

    def info(self, atom: int) -> tuple[str, tuple[int, ...]]:
        return self.entries[atom - FUNC_BASE]

    def derivative(self, atom: int, x: int) -> int | None:
        name, deriv = self.entries[atom - FUNC_BASE]
        if x not in self.args[name]:
            return None
        return self.atom(name, tuple(sorted(deriv + (x,))))


FUNCTIONS = _FunctionRegistry()


def declare_function(name: str, args: Iterable[int]) -> None:
    FUNCTIONS.declare(name, args)


# -- monomial helpers --------------------------------------------------------

def _reduce_r1(d):
    e = d.pop(_R1)
    quo, rem = divmod(e, 2)
    if rem:
        d[_R1] = 1
    out = []
    # (rho - r2^2 - r3^2)^quo
    for i in range(quo + 1):
        for j in range(quo - i + 1):
            k = quo - i - j
            coef = factorial(quo) // (factorial(i) * factorial(j) * factorial(k))
            if (j + k) % 2:
                coef = -coef
            dd = dict(d)
            if i:
                dd[RHO] = dd.get(RHO, 0) + i
            if j:
                dd[5] = dd.get(5, 0) + 2 * j
            if k:
                dd[6] = dd.get(6, 0) + 2 * k
            out.append((coef, tuple(sorted((a, x) for a, x in dd.items() if x))))
    return out


def mono_mul(a, b):
    """Product of two monomials as a list of ``(integer factor, monomial)``."""
    if not a:
        return ((1, b),)
    if not b:
        return ((1, a),)
    d = dict(a)
    for at, e in b:
        d[at] = d.get(at, 0) + e
    if d.get(_R1, 0) >= 2:
        return _reduce_r1(d)
    return ((1, tuple(sorted((k, e) for k, e in d.items() if e))),)


def _mono_replace(mono, idx, newexp):
    at = mono[idx][0]
    if newexp:
        return mono[:idx] + ((at, newexp),) + mono[idx + 1:]
    return mono[:idx] + mono[idx + 1:]


# -- the ring element --------------------------------------------------------

def _acc(out, k, v):
    nv = out.get(k, 0) + v
    if nv:
        out[k] = nv
    else:
        out.pop(k, None)


class ExpPoly:
    """Canonical sparse exponential polynomial (immutable by convention)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, c) -> "ExpPoly":
        if isinstance(c, ExpPoly):
            return c
        if not isinstance(c, ParamScalar):
            c = ParamScalar.const(c)
        if not c.is_laurent():
            raise ValueError(f"ExpPoly coefficients must be Laurent polynomials, got {c}")
        return cls({((), k): v for k, v in c.num.items()})

    @classmethod
    def atom(cls, at: int, power: int = 1) -> "ExpPoly":
        if at == _R1 and power >= 2:
            return cls({(m, ONE_KEY): Q(f) for f, m in _reduce_r1({_R1: power})})
        return cls({(((at, power),), ONE_KEY): Q(1)})

    @classmethod
    def var(cls, at: int) -> "ExpPoly":
        return cls.atom(at)

    @classmethod
    def exp(cls, n: int) -> "ExpPoly":
        """``exp(n*I*omega*t)``."""
        return cls.atom(EXPW, n) if n else ONE_POLY

    @classmethod
    def rho(cls, power: int = 1) -> "ExpPoly":
        return cls.atom(RHO, power) if power else ONE_POLY

    @classmethod
    def w(cls, k: int) -> "ExpPoly":
        return cls.atom(W_BASE + k)

    @classmethod
    def func(cls, name: str, deriv: Iterable[int] = ()) -> "ExpPoly":
        return cls.atom(FUNCTIONS.atom(name, tuple(sorted(deriv))))

    # -- basic protocol ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, ExpPoly):
            try:
                other = ExpPoly.const(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = _as_poly(other)
        if not other.terms:
            return self
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return ExpPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = _as_poly(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, -v)
        return ExpPoly(out)

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if not self.terms or not other.terms:
            return ZERO_POLY
        out = {}
        for (m1, p1), c1 in self.terms.items():
            for (m2, p2), c2 in other.terms.items():
                s, p = key_mul(p1, p2)
                c = c1 * c2 if s > 0 else -(c1 * c2)
                for f, m in mono_mul(m1, m2):
                    _acc(out, (m, p), c * f if f != 1 else c)
        return ExpPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        out = ONE_POLY
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c) -> "ExpPoly":
        return self * ExpPoly.const(c)

    # -- structure ------------------------------------------------------------
    def atoms(self) -> set[int]:
        return {at for (m, _), _ in self.terms.items() for at, _ in m}

    def has_jets(self) -> bool:
        return any(is_jet(at) for at in self.atoms())

    def functions(self) -> set[int]:
        return {at for at in self.atoms() if at >= FUNC_BASE}

    def is_constant(self) -> bool:
        return all(not m for (m, _) in self.terms)

    def scalar(self) -> ParamScalar:
        """The value of a constant polynomial as a :class:`ParamScalar`."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return ParamScalar.from_terms({p: c for (_, p), c in self.terms.items()})

    def by_monomial(self) -> dict[tuple, ParamScalar]:
        """Group terms: ``{monomial: ParamScalar coefficient}``."""
        groups: dict[tuple, dict] = {}
        for (m, p), c in self.terms.items():
            groups.setdefault(m, {})[p] = c
        return {m: ParamScalar(d) for m, d in groups.items()}

    def render(self) -> str:
        return render(self)

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"ExpPoly({render(self)!r})"


def _as_poly(x) -> ExpPoly:
    if isinstance(x, ExpPoly):
        return x
    return ExpPoly.const(x)


ZERO_POLY = ExpPoly({})
ONE_POLY = ExpPoly({((), ONE_KEY): Q(1)})


# -- calculus ---------------------------------------------------------------

def differentiate(f: ExpPoly, x: int) -> ExpPoly:
    """Exact partial derivative with respect to the base or jet coordinate ``x``."""
    out: dict = {}
    x_is_r = x in _SMALL_R
    for (mono, p), c in f.terms.items():
        for idx, (at, e) in enumerate(mono):
            if at == x:
                _acc(out, (_mono_replace(mono, idx, e - 1), p), c * e)
            elif at == RHO:
                if x_is_r:
                    base = _mono_replace(mono, idx, e - 1)
                    for fct, m in mono_mul(base, ((x, 1),)):
                        _acc(out, (m, p), c * (2 * e * fct))
            elif at == EXPW:
                if x == T:
                    s, pp = key_mul(p, _OMEGA_I_KEY)
                    _acc(out, (mono, pp), c * (s * e))
            elif W_BASE <= at < FUNC_BASE:
                if x_is_r:
                    base = _mono_replace(mono, idx, e - 1)
                    for fct, m in mono_mul(base, ((x, 1), (at + 1, 1))):
                        _acc(out, (m, p), c * (e * fct))
            elif at >= FUNC_BASE:
                dat = FUNCTIONS.derivative(at, x)
                if dat is not None:
                    base = _mono_replace(mono, idx, e - 1)
                    for fct, m in mono_mul(base, ((dat, 1),)):
                        _acc(out, (m, p), c * (e * fct))
    return ExpPoly(out)


def differentiate_many(f: ExpPoly, xs: Iterable[int]) -> ExpPoly:
    for x in xs:
        f = differentiate(f, x)
    return f


def map_atoms(f: ExpPoly, replace: Callable[[int], ExpPoly | None]) -> ExpPoly:
    """Replace atoms by polynomials; ``replace`` returns None to keep an atom."""
    cache: dict[int, ExpPoly | None] = {}
    powers: dict[tuple[int, int], ExpPoly] = {}
    out = ZERO_POLY.terms.copy()
    for (mono, p), c in f.terms.items():
        kept = []
        factor = None
        for at, e in mono:
            if at not in cache:
                cache[at] = replace(at)
            rep = cache[at]
            if rep is None:
                kept.append((at, e))
                continue
            if e < 0:
                raise ValueError("cannot substitute into a negative power")
            pw = powers.get((at, e))
            if pw is None:
                pw = powers[(at, e)] = rep ** e
            factor = pw if factor is None else factor * pw
        if factor is None:
            _acc(out, (mono, p), c)
            continue
        if not factor.terms:
            continue
        kept = tuple(kept)
        for (m2, p2), c2 in factor.terms.items():
            s, pp = key_mul(p, p2)
            for fct, m in mono_mul(kept, m2):
                _acc(out, (m, pp), c * c2 * (s * fct))
    return ExpPoly(out)


def substitute(f: ExpPoly, bindings: Mapping[int, ExpPoly]) -> ExpPoly:
    """Simultaneous substitution of coordinates by polynomials."""
    bound = set(bindings)
    for at, rhs in bindings.items():
        if at >= RHO or at in _SMALL_R:
            # r1**2 is stored through rho, so the relative coordinates cannot be rebound
            raise ValueError(f"cannot bind {atom_name(at)}")
        hit = bound & rhs.atoms()
        if hit:
            raise RecursiveBinding(
                f"right-hand side for {atom_name(at)} mentions bound {sorted(atom_name(h) for h in hit)}")
    if not bound:
        return f
    return map_atoms(f, lambda at: bindings.get(at))


def substitute_functions(f: ExpPoly, rule: Callable[[str, tuple[int, ...]], ExpPoly | None]) -> ExpPoly:
    """Replace abstract-function atoms; ``rule(name, deriv)`` returns None to keep."""
    def rep(at):
        if at < FUNC_BASE:
            return None
        return rule(*FUNCTIONS.info(at))
    return map_atoms(f, rep)


def function_substitution(definitions: Mapping[str, ExpPoly]) -> Callable:
    """A rule for :func:`substitute_functions` replacing each named function by a
    concrete polynomial (derivatives are taken of the replacement)."""
    cache: dict = {}

    def rule(name, deriv):
        base = definitions.get(name)
        if base is None:
            return None
        key = (name, deriv)
        if key not in cache:
            cache[key] = differentiate_many(base, deriv)
        return cache[key]

    return rule


def specialize_tower(f: ExpPoly, tower: Callable[[int], ExpPoly]) -> ExpPoly:
    """Replace the potential symbols ``w_k`` by ``tower(k)``."""
    return map_atoms(f, lambda at: tower(at - W_BASE) if W_BASE <= at < FUNC_BASE else None)


def monomial_coefficients(f: ExpPoly, variables: Iterable[int]) -> dict[tuple, ExpPoly]:
    """Split ``f`` as a sum of monomials in ``variables`` times coefficients free of them."""
    vs = set(variables)
    if vs & {_R1, RHO}:
        raise ValueError("r1 and rho are not independent under the canonical rewrite")
    out: dict[tuple, dict] = {}
    for (mono, p), c in f.terms.items():
        inside = tuple((a, e) for a, e in mono if a in vs)
        rest = tuple((a, e) for a, e in mono if a not in vs)
        out.setdefault(inside, {})[(rest, p)] = c
    return {m: ExpPoly(t) for m, t in out.items()}


# -- radial potentials --------------------------------------------------------

class RadialPotential:
    """``v = sum_p c_p rho**p`` with constant coefficients.

    Since ``d g(rho)/d r_l = 2 r_l g'(rho)``, the tower is
    ``w_k = 2**k * g^(k)(rho)``.
    """

    def __init__(self, coeffs: Mapping[int, ParamScalar]):
        self.coeffs = {p: c for p, c in coeffs.items() if c}

    def tower(self, k: int) -> ExpPoly:
        out = ZERO_POLY
        for p, c in self.coeffs.items():
            fall = 1
            for j in range(k):
                fall *= (p - j)
            if fall:
                out = out + ExpPoly.const(c * (2 ** k * fall)) * ExpPoly.rho(p - k)
        return out

    def value(self) -> ExpPoly:
        return self.tower(0)


# -- rendering -----------------------------------------------------------------

def atom_name(at: int) -> str:
    if at < NBASE:
        return BASE_NAMES[at]
    if at < RHO:
        a, b = jet_indices(at)
        return f"Psi{DEP_NAMES[a]}_{Q_NAMES[b]}"
    if at == RHO:
        return "rho"
    if at == EXPW:
        return "E"
    if at < FUNC_BASE:
        return f"w{at - W_BASE}"
    name, deriv = FUNCTIONS.info(at)
    if not deriv:
        return name
    return f"{name}_{{{','.join(BASE_NAMES[x] for x in deriv)}}}"


def atom_sort_key(at: int):
    if at < FUNC_BASE:
        return (0, at, "", ())
    name, deriv = FUNCTIONS.info(at)
    return (1, 0, name, deriv)


def mono_sort_key(mono):
    edeg = 0
    rest = []
    for at, e in mono:
        if at == EXPW:
            edeg = e
        else:
            rest.append((atom_sort_key(at), e))
    return (edeg, tuple(sorted(rest)))


def render_mono(mono) -> str:
    parts = []
    for at, e in sorted(mono, key=lambda ae: atom_sort_key(ae[0])):
        if at == EXPW:
            parts.append({1: "exp(I*omega*t)", -1: "exp(-I*omega*t)"}.get(e, f"exp({e}*I*omega*t)"))
            continue
        name = atom_name(at)
        parts.append(name if e == 1 else f"{name}^{e}" if e > 0 else f"{name}^({e})")
    return "*".join(parts)


def render(f: ExpPoly) -> str:
    """Deterministic text form: one group per monomial, exponential degree first."""
    if not f.terms:
        return "0"
    groups = f.by_monomial()
    chunks = []
    for mono in sorted(groups, key=mono_sort_key):
        s = str(groups[mono])
        m = render_mono(mono)
        if not m:
            chunks.append(f"({s})" if " " in s else s)
        elif s == "1":
            chunks.append(m)
        elif s == "-1":
            chunks.append("-" + m)
        else:
            chunks.append(f"({s})*{m}" if (" " in s or "/" in s) else f"{s}*{m}")
    out = chunks[0]
    for ch in chunks[1:]:
        out += " - " + ch[1:] if ch.startswith("-") else " + " + ch
    return out


def scalar_poly(c) -> ExpPoly:
    return ExpPoly.const(c)


__all__ = [
    "ExpPoly", "ZERO_POLY", "ONE_POLY", "RadialPotential", "RecursiveBinding",
    "differentiate", "differentiate_many", "substitute", "substitute_functions",
    "function_substitution", "specialize_tower", "monomial_coefficients", "map_atoms",
    "declare_function", "FUNCTIONS", "jet", "jet_indices", "is_jet", "R", "r", "psi_c",
    "psi_r", "psi", "q", "T", "PSI0", "RHO", "EXPW", "JET_ATOMS", "GRADIENT_JETS",
    "BASE_NAMES", "NBASE", "atom_name", "render", "render_mono", "NPARAM",
]
