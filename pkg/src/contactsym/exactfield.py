"""Exact scalars: Gaussian rationals extended by the physical parameters.

A :class:`ParamScalar` is a quotient ``num / den`` where ``num`` is a Laurent
polynomial with Gaussian-rational coefficients in the indeterminates
``hbar, sm, sM, omega, v0, v1`` and ``den`` is an ordinary polynomial with
rational coefficients and no monomial content.  The masses are ``m = sm**2``
and ``M = sM**2`` so that ``sqrt(m/M) = sm/sM`` stays rational.

Denominators that are single monomials are folded into negative exponents of
the numerator, so every scalar occurring in the generator tables is a Laurent
polynomial with ``den == 1``.  Only Gaussian elimination can produce
multi-term denominators; for those, equality is decided by cross
multiplication.
"""

from __future__ import annotations

import ast
import random
from dataclasses import dataclass, field
from typing import Mapping

from gmpy2 import mpq as Q
from sympy import QQ_I

PARAMS = ("hbar", "sm", "sM", "omega", "v0", "v1")
NPARAM = len(PARAMS)
_IBIT = NPARAM
_ZERO_EXP = (0,) * NPARAM
ONE_KEY = (0,) * (NPARAM + 1)
I_KEY = _ZERO_EXP + (1,)


class ExactFieldError(ArithmeticError):
    pass


class PoleAtSample(ExactFieldError):
    """The denominator vanishes at the chosen parameter values."""


class DivisionByZero(PoleAtSample, ZeroDivisionError):
    """Division by a scalar that normalizes to zero."""


def key_mul(a, b):
    """Multiply two parameter keys; returns ``(sign, key)`` with ``i**2 = -1``."""
    k = [x + y for x, y in zip(a, b)]
    if k[_IBIT] == 2:
        k[_IBIT] = 0
        return -1, tuple(k)
    return 1, tuple(k)


def _poly_mul(p, q):
    out = {}
    for ka, ca in p.items():
        for kb, cb in q.items():
            s, k = key_mul(ka, kb)
            v = out.get(k, 0) + s * ca * cb
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def _poly_add(p, q, scale=1):
    out = dict(p)
    for k, c in q.items():
        v = out.get(k, 0) + scale * c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _conj(p):
    return {k: (-c if k[_IBIT] else c) for k, c in p.items()}


def _shift(p, exps):
    """Multiply every monomial of ``p`` by ``x**exps`` (``exps`` has NPARAM entries)."""
    out = {}
    for k, c in p.items():
        out[tuple(a + b for a, b in zip(k[:NPARAM], exps)) + k[NPARAM:]] = c
    return out


def _min_exps(p):
    keys = list(p)
    return tuple(min(k[j] for k in keys) for j in range(NPARAM))


def _den_key(k):
    # denominators never carry the imaginary unit
    return k + (0,) if len(k) == NPARAM else k


def _exact_div(num, den):
    """Return ``num / den`` if ``den`` divides ``num`` exactly, else None.

    ``num`` and ``den`` are polynomials (no negative exponents) and ``den``
    carries no imaginary unit.  Division is by lex leading terms.
    """
    lead = max(den)
    lc = den[lead]
    rem = dict(num)
    quo = {}
    while rem:
        k = max(rem, key=lambda t: t[:NPARAM])
        diff = tuple(a - b for a, b in zip(k[:NPARAM], lead[:NPARAM]))
        if min(diff) < 0:
            return None
        qk = diff + (k[_IBIT],)
        qc = rem[k] / lc
        quo[qk] = qc
        rem = _poly_add(rem, _poly_mul({qk: qc}, den), -1)
    return quo


class ParamScalar:
    """Immutable exact scalar ``num / den``."""

    __slots__ = ("num", "den")

    def __init__(self, num=None, den=None):
        self.num = num or {}
        self.den = den

    # -- construction -------------------------------------------------
    @classmethod
    def _make(cls, num, den=None):
        if not num:
            return ZERO
        if den is None:
            return cls(num)
        den = {_den_key(k): c for k, c in den.items()}
        if len(den) == 1:
            (k, c), = den.items()
            inv = tuple(-e for e in k[:NPARAM])
            return cls({kk: v / c for kk, v in _shift(num, inv).items()})
        g = _min_exps(den)
        if any(g):
            den = _shift(den, tuple(-e for e in g))
            num = _shift(num, tuple(-e for e in g))
        lead = max(den)
        lc = den[lead]
        if lc != 1:
            den = {k: c / lc for k, c in den.items()}
            num = {k: c / lc for k, c in num.items()}
        # cancel an exact polynomial factor when possible
        s = _min_exps(num)
        shifted = _shift(num, tuple(-e for e in s)) if any(s) else num
        quo = _exact_div(shifted, den)
        if quo is not None:
            return cls(_shift(quo, s) if any(s) else quo)
        return cls(num, den)

    @classmethod
    def const(cls, re, im=0):
        num = {}
        if re:
            num[ONE_KEY] = Q(re)
        if im:
            num[I_KEY] = Q(im)
        return cls(num) if num else ZERO

    @classmethod
    def symbol(cls, name, power=1):
        """The indeterminate ``name``; ``m``/``M`` expand to ``sm**2``/``sM**2``."""
        if name == "m":
            name, power = "sm", 2 * power
        elif name == "M":
            name, power = "sM", 2 * power
        elif name in ("I", "i"):
            return I if power % 2 else ONE
        k = [0] * (NPARAM + 1)
        k[PARAMS.index(name)] = power
        return cls({tuple(k): Q(1)})

    @classmethod
    def from_terms(cls, terms):
        """Build from a ``{key: rational}`` mapping (keys are 7-tuples)."""
        return cls._make({k: Q(c) for k, c in terms.items() if c})

    @classmethod
    def parse(cls, text):
        """Parse expressions such as ``"-I*M/hbar"`` or ``"I*sqrt(M/m)"``."""
        return _parse(ast.parse(text.strip(), mode="eval").body)

    # -- predicates ---------------------------------------------------
    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_laurent(self):
        return self.den is None

    def is_monomial(self):
        """True for a single Laurent term, i.e. an obviously invertible scalar."""
        return self.den is None and len(self.num) == 1

    def is_constant(self):
        return self.den is None and all(k[:NPARAM] == _ZERO_EXP for k in self.num)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.den is None and other.den is None:
            return ParamScalar._make(_poly_add(self.num, other.num))
        if self.den == other.den:
            return ParamScalar._make(_poly_add(self.num, other.num), self.den)
        a = _poly_mul(self.num, other.den or {ONE_KEY: Q(1)})
        b = _poly_mul(other.num, self.den or {ONE_KEY: Q(1)})
        den = _poly_mul(self.den or {ONE_KEY: Q(1)}, other.den or {ONE_KEY: Q(1)})
        return ParamScalar._make(_poly_add(a, b), den)

    __radd__ = __add__

    def __neg__(self):
        return ParamScalar({k: -c for k, c in self.num.items()}, self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return ZERO
        num = _poly_mul(self.num, other.num)
        if self.den is None and other.den is None:
            return ParamScalar._make(num)
        den = _poly_mul(self.den or {ONE_KEY: Q(1)}, other.den or {ONE_KEY: Q(1)})
        return ParamScalar._make(num, den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DivisionByZero("division by a scalar that normalizes to zero")
        den = self.den or {ONE_KEY: Q(1)}
        if len(self.num) == 1:
            (k, c), = self.num.items()
            inv = tuple(-e for e in k[:NPARAM])
            # 1/(c i^b x^e) = (1/c) (-i)^b x^-e
            coeff = Q(1) / c
            ib = k[_IBIT]
            if ib:
                coeff = -coeff
            return ParamScalar._make(_poly_mul(_shift({_ZERO_EXP + (ib,): coeff}, inv), den))
        if not any(k[_IBIT] for k in self.num):
            return ParamScalar._make(dict(den), self.num)
        conj = _conj(self.num)
        norm = _poly_mul(self.num, conj)  # free of i
        return ParamScalar._make(_poly_mul(den, conj), norm)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate_i(self):
        """Complex conjugation (parameters are real)."""
        den = self.den
        return ParamScalar(_conj(self.num), den)

    def sqrt(self):
        """Square root of a monomial with even exponents and positive real coefficient."""
        if not self.is_monomial():
            raise ValueError(f"sqrt only defined for monomials, got {self}")
        (k, c), = self.num.items()
        if k[_IBIT] or any(e % 2 for e in k[:NPARAM]) or c < 0:
            raise ValueError(f"no rational square root of {self}")
        num_r, den_r = _isqrt(c.numerator), _isqrt(c.denominator)
        if num_r is None or den_r is None:
            raise ValueError(f"no rational square root of {self}")
        return ParamScalar({tuple(e // 2 for e in k[:NPARAM]) + (0,): Q(num_r, den_r)})

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        if self.den is None and other.den is None:
            return self.num == other.num
        return (self - other).is_zero()

    def __hash__(self):
        if self.den is None:
            return hash(frozenset(self.num.items()))
        raise TypeError("ParamScalar with a non-monomial denominator is unhashable")

    # -- evaluation ---------------------------------------------------
    def evaluate(self, sigma: "ParamAssignment"):
        """Exact Gaussian-rational value (a sympy ``QQ_I`` element)."""
        vals = sigma.indeterminates()
        num = _eval_poly(self.num, vals)
        if self.den is not None:
            den = _eval_poly(self.den, vals)
            if den == QQ_I.zero:
                raise PoleAtSample(f"denominator of {self} vanishes at {sigma}")
            return num / den
        return num

    # -- rendering ----------------------------------------------------
    def __str__(self):
        num = _render_poly(self.num)
        if self.den is None:
            return num
        if len(self.num) > 1:
            num = f"({num})"
        return f"{num}/({_render_poly(self.den)})"

    def __repr__(self):
        return f"ParamScalar({str(self)!r})"


def _isqrt(n):
    import math
    r = math.isqrt(int(n))
    return r if r * r == n else None


def _coerce(x):
    if isinstance(x, ParamScalar):
        return x
    if isinstance(x, (int, type(Q(1)))):
        return ParamScalar.const(x)
    try:
        from fractions import Fraction
        if isinstance(x, Fraction):
            return ParamScalar.const(Q(x.numerator, x.denominator))
    except ImportError:  # pragma: no cover
        pass
    return NotImplemented


def _eval_poly(p, vals):
    re = Q(0)
    im = Q(0)
    for k, c in p.items():
        v = c
        for j in range(NPARAM):
            e = k[j]
            if e:
                v = v * vals[j] ** e
        if len(k) > NPARAM and k[_IBIT]:
            im += v
        else:
            re += v
    return QQ_I(re, im)


_DISPLAY = {1: "m", 2: "M"}


def _render_atom(j, e):
    """Render ``PARAMS[j]**e`` (``e > 0``); ``sm``/``sM`` show as powers of ``m``/``M``."""
    if j in _DISPLAY:
        base = _DISPLAY[j]
        if e % 2 == 0:
            e //= 2
            return base if e == 1 else f"{base}^{e}"
        return f"{base}^({e}/2)"
    base = PARAMS[j]
    return base if e == 1 else f"{base}^{e}"


def render_key(k):
    """Render the parameter part of a key as ``(numerator atoms, denominator atoms)``."""
    up, down = [], []
    for j in range(NPARAM):
        e = k[j]
        if e > 0:
            up.append(_render_atom(j, e))
        elif e < 0:
            down.append(_render_atom(j, -e))
    if len(k) > NPARAM and k[_IBIT]:
        up.insert(0, "I")
    return up, down


def _render_term(k, c, first):
    up, down = render_key(k)
    neg = c < 0
    a = -c if neg else c
    parts = []
    if a != 1 or not up:
        parts.append(str(a))
    parts.extend(up)
    s = "*".join(parts)
    for d in down:
        s += "/" + d
    if first:
        return ("-" if neg else "") + s
    return (" - " if neg else " + ") + s


def _term_order(k):
    # deterministic display order: by total degree, then exponents, then i
    return (-sum(abs(e) for e in k[:NPARAM]), tuple(-e for e in k[:NPARAM]), len(k) > NPARAM and k[_IBIT])


def _render_poly(p):
    if not p:
        return "0"
    keys = sorted(p, key=_term_order)
    return "".join(_render_term(k, p[k], i == 0) for i, k in enumerate(keys))


def render_terms(terms):
    """Render a ``{key: rational}`` mapping the same way scalars are rendered."""
    return _render_poly(terms)


# -- parsing ----------------------------------------------------------

def _parse(node):
    if isinstance(node, ast.BinOp):
        a, b = _parse(node.left), _parse(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
        if isinstance(node.op, ast.Pow):
            if not (isinstance(node.right, ast.Constant) or isinstance(node.right, ast.UnaryOp)):
                raise ValueError("exponent must be an integer literal")
            n = int(ast.literal_eval(node.right))
            return a ** n
    if isinstance(node, ast.UnaryOp):
        v = _parse(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return ParamScalar.const(node.value)
    if isinstance(node, ast.Name):
        return ParamScalar.symbol(node.id)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt":
        (arg,) = node.args
        return _parse(arg).sqrt()
    raise ValueError(f"cannot parse scalar expression near {ast.dump(node)}")


ZERO = ParamScalar({})
ONE = ParamScalar({ONE_KEY: Q(1)})
I = ParamScalar({I_KEY: Q(1)})


def sym(name, power=1):
    return ParamScalar.symbol(name, power)


# -- parameter sampling -------------------------------------------------

@dataclass(frozen=True)
class ParamAssignment:
    """Nonzero rational values for every indeterminate.

    The masses satisfy ``0 < m/M <= 1/4``; ``hbar`` and ``omega`` are
    positive and ``v1`` is nonzero.
    """

    values: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        vals = {k: Q(v) for k, v in self.values.items()}
        missing = set(PARAMS) - set(vals)
        if missing:
            raise ValueError(f"unassigned indeterminates: {sorted(missing)}")
        if any(v == 0 for v in vals.values()):
            raise ValueError("every indeterminate must be nonzero")
        ratio = (vals["sm"] / vals["sM"]) ** 2
        if not (0 < ratio <= Q(1, 4)):
            raise ValueError(f"mass ratio m/M = {ratio} outside (0, 1/4]")
        if vals["hbar"] <= 0 or vals["omega"] <= 0:
            raise ValueError("hbar and omega must be positive")
        object.__setattr__(self, "values", vals)

    def indeterminates(self):
        return tuple(self.values[p] for p in PARAMS)

    def mass_ratio(self):
        return (self.values["sm"] / self.values["sM"]) ** 2

    def as_dict(self):
        return {p: str(self.values[p]) for p in PARAMS}

    def __str__(self):
        return ", ".join(f"{p}={self.values[p]}" for p in PARAMS)


def sample_parameters(seed: int) -> ParamAssignment:
    """Deterministic pseudo-random assignment obeying the physical constraints."""
    rng = random.Random(f"contactsym-params-{seed}")

    def positive():
        return Q(rng.randint(1, 97), rng.randint(1, 13))

    def signed():
        v = positive()
        return v if rng.random() < 0.5 else -v

    sm = Q(rng.randint(1, 11), rng.randint(1, 7))
    # sM >= 2 sm keeps (sm/sM)^2 <= 1/4
    sM = sm * (2 + Q(rng.randint(0, 29), rng.randint(1, 7)))
    return ParamAssignment({
        "hbar": positive(),
        "sm": sm,
        "sM": sM,
        "omega": positive(),
        "v0": signed(),
        "v1": signed(),
    })
