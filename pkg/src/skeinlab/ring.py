"""Exact coefficient arithmetic.

Three layers:

* ``Rational`` is :class:`fractions.Fraction`.
* :class:`LaurentPoly` is a multivariate Laurent polynomial over the rationals.
* :class:`RatFunc` is an element of the fraction field, kept in a canonical
  reduced form so that structural equality is mathematical equality.

Multivariate gcds are delegated to :mod:`sympy`'s sparse polynomial rings;
everything else is done here on plain dictionaries.

Text grammar accepted by :func:`parse` (and produced by ``str``)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('-' | '+') factor | atom ('^' exponent)?
    atom   := INTEGER | NAME | '(' expr ')'
    exponent := ('-')? INTEGER | '(' ('-')? INTEGER ')'

so ``3/2*A^-2*t + 1`` and ``(t - 1)/(t - 2)`` both parse.
"""

from __future__ import annotations

import cmath
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from sympy import QQ
from sympy.polys.rings import ring as _sympy_ring

Rational = Fraction

__all__ = [
    "Rational",
    "LaurentPoly",
    "RatFunc",
    "DivisionByZero",
    "PoleEncountered",
    "RingParseError",
    "parse",
    "var",
    "const",
    "as_ratfunc",
    "substitute",
    "eval_complex",
    "star_involution",
]


class DivisionByZero(ZeroDivisionError):
    pass


class PoleEncountered(ArithmeticError):
    pass


class RingParseError(ValueError):
    pass


Exp = tuple  # tuple[int, ...]


def _strip(variables: tuple, terms: dict) -> tuple[tuple, dict]:
    """Drop variables that appear with exponent zero in every term."""
    if not variables:
        return variables, terms
    used = [i for i in range(len(variables)) if any(e[i] for e in terms)]
    if len(used) == len(variables):
        return variables, terms
    nv = tuple(variables[i] for i in used)
    nt = {tuple(e[i] for i in used): c for e, c in terms.items()}
    return nv, nt


def _embed(terms: dict, src: tuple, dst: tuple) -> dict:
    if src == dst:
        return terms
    idx = [dst.index(v) for v in src]
    n = len(dst)
    out = {}
    for e, c in terms.items():
        ne = [0] * n
        for i, k in enumerate(idx):
            ne[k] = e[i]
        out[tuple(ne)] = c
    return out


class LaurentPoly:
    """Multivariate Laurent polynomial with rational coefficients (immutable)."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Iterable[str] = (), terms: Mapping | None = None):
        variables = tuple(variables)
        raw = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != len(variables):
                raise ValueError("exponent length does not match variable count")
            c = Fraction(c)
            if c:
                raw[e] = raw.get(e, 0) + c
        raw = {e: c for e, c in raw.items() if c}
        if list(variables) != sorted(variables) or len(set(variables)) != len(variables):
            order = sorted(set(variables))
            merged: dict = {}
            for e, c in raw.items():
                ne = [0] * len(order)
                for v, k in zip(variables, e):
                    ne[order.index(v)] += k
                ne = tuple(ne)
                merged[ne] = merged.get(ne, 0) + c
            variables = tuple(order)
            raw = {e: c for e, c in merged.items() if c}
        variables, raw = _strip(variables, raw)
        self.variables = variables
        self.terms = dict(sorted(raw.items()))
        self._hash = None

    @classmethod
    def _make(cls, variables: tuple, terms: dict) -> "LaurentPoly":
        # trusted constructor: sorted unique variables, nonzero Fraction coefficients
        variables, terms = _strip(variables, terms)
        obj = object.__new__(cls)
        obj.variables = variables
        obj.terms = dict(sorted(terms.items()))
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        c = Fraction(c)
        return cls._make((), {(): c} if c else {})

    @classmethod
    def variable(cls, name: str, power: int = 1) -> "LaurentPoly":
        return cls._make((name,), {(power,): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.variables

    def constant_value(self) -> Fraction:
        if self.variables:
            raise ValueError("not a constant")
        return self.terms.get((), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def _aligned(self, other: "LaurentPoly"):
        if self.variables == other.variables:
            return self.variables, self.terms, other.terms
        vs = tuple(sorted(set(self.variables) | set(other.variables)))
        return vs, _embed(self.terms, self.variables, vs), _embed(other.terms, other.variables, vs)

    def __add__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        vs, a, b = self._aligned(other)
        out = dict(a)
        for e, c in b.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly._make(vs, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._make(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_laurent(other)
        if other is NotImplemented:
            return NotImplemented
        vs, a, b = self._aligned(other)
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return LaurentPoly._make(vs, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial Laurent polynomial")
            (e, c), = self.terms.items()
            return LaurentPoly._make(self.variables, {tuple(k * n for k in e): c ** n})
        result = LaurentPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, tuple(self.terms.items())))
        return self._hash

    def min_exponents(self) -> tuple:
        if not self.terms:
            return tuple(0 for _ in self.variables)
        return tuple(min(e[i] for e in self.terms) for i in range(len(self.variables)))

    def shift(self, exps: tuple) -> "LaurentPoly":
        """Multiply by the monomial with exponent vector ``exps``."""
        return LaurentPoly._make(
            self.variables,
            {tuple(a + b for a, b in zip(e, exps)): c for e, c in self.terms.items()},
        )

    def leading(self) -> tuple:
        """Lexicographically largest (exponent, coefficient)."""
        e = max(self.terms)
        return e, self.terms[e]

    def inverse_variables(self, names) -> "LaurentPoly":
        idx = [i for i, v in enumerate(self.variables) if v in names]
        if not idx:
            return self
        out = {}
        for e, c in self.terms.items():
            ne = list(e)
            for i in idx:
                ne[i] = -ne[i]
            out[tuple(ne)] = c
        return LaurentPoly._make(self.variables, out)

    def __str__(self):
        return _format_laurent(self)

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"


def _as_laurent(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPoly.constant(x)
    return NotImplemented


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_laurent(p: LaurentPoly) -> str:
    if not p.terms:
        return "0"
    pieces = []
    # highest degree first reads more naturally
    for e, c in sorted(p.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-k for k in kv[0]))):
        mono = []
        for v, k in zip(p.variables, e):
            if k == 1:
                mono.append(v)
            elif k:
                mono.append(f"{v}^{k}")
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = "*".join(mono)
        else:
            body = _format_coeff(a) + "*" + "*".join(mono)
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for s, b in pieces[1:]:
        out += f" {s} {b}"
    return out


@lru_cache(maxsize=None)
def _sympy_ring_for(variables: tuple):
    return _sympy_ring(",".join(variables), QQ)[0]


def _to_sympy(p: LaurentPoly, variables: tuple):
    R = _sympy_ring_for(variables)
    return R.from_dict({e: QQ(c.numerator, c.denominator) for e, c in _embed(p.terms, p.variables, variables).items()})


def _from_sympy(elem, variables: tuple) -> LaurentPoly:
    terms = {}
    for e, c in elem.items():
        terms[tuple(e)] = Fraction(int(c.numerator), int(c.denominator))
    return LaurentPoly._make(variables, terms)


class RatFunc:
    """Canonical element of the fraction field of :class:`LaurentPoly`.

    Canonical form: ``num/den`` with ``den`` an ordinary polynomial having no
    monomial factor, coprime to ``num``, and lexicographic leading coefficient 1.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1, *, _normalized: bool = False):
        num = _as_laurent(num) if not isinstance(num, LaurentPoly) else num
        den = _as_laurent(den) if not isinstance(den, LaurentPoly) else den
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("RatFunc expects LaurentPoly, int or Fraction parts")
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if not _normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, num: LaurentPoly, den: LaurentPoly) -> "RatFunc":
        obj = object.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @property
    def variables(self) -> tuple:
        return tuple(sorted(set(self.num.variables) | set(self.den.variables)))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_laurent(self) -> bool:
        return self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_value() / self.den.constant_value()

    def __add__(self, other):
        other = as_ratfunc(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            if self.den.is_constant():
                return RatFunc._raw(self.num + other.num, self.den)
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = as_ratfunc(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = as_ratfunc(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_constant() and other.den.is_constant():
            return RatFunc._raw(self.num * other.num, LaurentPoly.constant(1))
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = as_ratfunc(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by zero RatFunc")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_ratfunc(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if self.den.is_constant():
            return RatFunc._raw(self.num ** n, self.den)
        return RatFunc._raw(self.num ** n, self.den ** n)

    def __eq__(self, other):
        other = as_ratfunc(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        n, d = str(self.num), str(self.den)
        if len(self.num.terms) > 1:
            n = f"({n})"
        if len(self.den.terms) > 1 or self.den.variables:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RatFunc({str(self)!r})"

    # convenience wrappers
    def substitute(self, bindings) -> "RatFunc":
        return substitute(self, bindings)

    def eval_complex(self, bindings) -> complex:
        return eval_complex(self, bindings)

    def star(self, unitary_vars) -> "RatFunc":
        return star_involution(self, unitary_vars)


def _normalize(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    one = LaurentPoly.constant(1)
    if num.is_zero():
        return num, one
    # pull monomial content out of the denominator
    dmin = den.min_exponents()
    if any(dmin):
        neg = tuple(-k for k in dmin)
        num = num.shift_named(den.variables, neg)
        den = den.shift(neg)
    if den.is_monomial():
        (_, c), = den.terms.items()
        return LaurentPoly._make(num.variables, {k: v / c for k, v in num.terms.items()}), one
    # genuine polynomial denominator: cancel the gcd with the polynomial part of num
    nmin = num.min_exponents()
    npoly = num.shift(tuple(-k for k in nmin))
    vs = tuple(sorted(set(npoly.variables) | set(den.variables)))
    sn, sd = _to_sympy(npoly, vs), _to_sympy(den, vs)
    g = sn.gcd(sd)
    if not g.is_ground:
        sn = sn.exquo(g)
        sd = sd.exquo(g)
    npoly, den = _from_sympy(sn, vs), _from_sympy(sd, vs)
    num = npoly.shift_named(num.variables, nmin)
    _, lc = den.leading()
    if lc != 1:
        den = LaurentPoly._make(den.variables, {k: v / lc for k, v in den.terms.items()})
        num = LaurentPoly._make(num.variables, {k: v / lc for k, v in num.terms.items()})
    return num, den


def _shift_named(self: LaurentPoly, names: tuple, exps: tuple) -> LaurentPoly:
    """Multiply by prod(names[i]^exps[i]) where names may not all be present."""
    if not names or not any(exps):
        return self
    mono = LaurentPoly._make(tuple(names), {tuple(exps): Fraction(1)})
    return self * mono


LaurentPoly.shift_named = _shift_named


def var(name: str) -> RatFunc:
    return RatFunc._raw(LaurentPoly.variable(name), LaurentPoly.constant(1))


def const(c) -> RatFunc:
    return RatFunc._raw(LaurentPoly.constant(c), LaurentPoly.constant(1))


Coercible = Union[RatFunc, LaurentPoly, int, Fraction, str]


def as_ratfunc(x, strict: bool = True):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, LaurentPoly):
        return RatFunc._raw(x, LaurentPoly.constant(1))
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, (int, Fraction)):
        return const(x)
    if isinstance(x, str):
        return parse(x)
    if strict:
        raise TypeError(f"cannot interpret {x!r} as RatFunc")
    return NotImplemented


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        pos = m.end()
        if m.group(1):
            toks.append(("int", int(m.group(1))))
        elif m.group(2):
            toks.append(("name", m.group(2)))
        elif m.group(3):
            ch = m.group(3)
            if ch.isspace():
                continue
            if ch not in "+-*/^()":
                raise RingParseError(f"unexpected character {ch!r} in {text!r}")
            toks.append(("op", ch))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise RingParseError(f"unexpected token {tok[1]!r} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> RatFunc:
        if not self.toks:
            raise RingParseError("empty expression")
        v = self.expr()
        if self.i != len(self.toks):
            raise RingParseError(f"trailing input in {self.text!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            v = v + t if op == "+" else v - t
        return v

    def term(self):
        v = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            f = self.factor()
            v = v * f if op == "*" else v / f
        return v

    def factor(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.factor()
        if self.peek() == ("op", "+"):
            self.take()
            return self.factor()
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            return base ** self.exponent()
        return base

    def exponent(self) -> int:
        if self.peek() == ("op", "("):
            self.take()
            e = self.exponent()
            self.take("op", ")")
            return e
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        return sign * self.take("int")[1]

    def atom(self):
        kind, val = self.peek()
        if kind == "int":
            self.take()
            return const(val)
        if kind == "name":
            self.take()
            return var(val)
        if (kind, val) == ("op", "("):
            self.take()
            v = self.expr()
            self.take("op", ")")
            return v
        raise RingParseError(f"unexpected token {val!r} in {self.text!r}")


def parse(text: str) -> RatFunc:
    """Parse the textual form into a :class:`RatFunc`."""
    return _Parser(text).parse()


# ---------------------------------------------------------------- evaluation


def _eval_laurent(p: LaurentPoly, values: dict, zero, one):
    total = zero
    for e, c in p.terms.items():
        term = one * c if not isinstance(one, complex) else complex(c)
        for v, k in zip(p.variables, e):
            if k == 0:
                continue
            x = values[v]
            if k < 0:
                if x == 0:
                    raise PoleEncountered(f"{v} = 0 under a negative power")
                term = term * (x ** k if not isinstance(x, RatFunc) else x.inverse() ** (-k))
            else:
                term = term * (x ** k)
        total = total + term
    return total


def substitute(f, bindings: Mapping) -> RatFunc:
    """Ring homomorphism sending each bound variable to a RatFunc."""
    f = as_ratfunc(f)
    vals = {k: as_ratfunc(v) for k, v in bindings.items()}
    for v in f.variables:
        vals.setdefault(v, var(v))
    try:
        n = _eval_laurent(f.num, vals, const(0), const(1))
        d = _eval_laurent(f.den, vals, const(0), const(1))
    except DivisionByZero as exc:
        raise PoleEncountered(str(exc)) from exc
    if d.is_zero():
        raise PoleEncountered(f"denominator of {f} vanishes under {dict(bindings)}")
    return n / d


def eval_complex(f, bindings: Mapping, tol: float = 1e-12) -> complex:
    f = as_ratfunc(f)
    vals = {k: complex(v) for k, v in bindings.items()}
    missing = [v for v in f.variables if v not in vals]
    if missing:
        raise KeyError(f"unbound variables: {missing}")
    n = _eval_laurent(f.num, vals, 0j, 1 + 0j)
    d = _eval_laurent(f.den, vals, 0j, 1 + 0j)
    if abs(d) < tol:
        raise PoleEncountered(f"|denominator| < {tol} for {f}")
    return n / d


def star_involution(f, unitary_vars: Iterable[str] = ()) -> RatFunc:
    """Invert every unitary variable; rational constants are fixed."""
    f = as_ratfunc(f)
    names = set(unitary_vars)
    if not names.intersection(f.variables):
        return f
    return RatFunc(f.num.inverse_variables(names), f.den.inverse_variables(names))


def root_of_unity(k: int, n: int) -> complex:
    return cmath.exp(2j * cmath.pi * k / n)
