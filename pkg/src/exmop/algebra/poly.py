"""Univariate polynomials and rational functions over the rationals.

A :class:`Poly` stores its coefficients as a tuple of ``Fraction`` in
ascending degree, ``c[k]`` being the coefficient of ``t**k``.  The zero
polynomial is the empty tuple and has degree ``-1``.

A :class:`RatFunc` is a reduced quotient ``num/den`` with ``den`` monic, so two
rational functions are mathematically equal iff their fields are equal.

Both types are immutable and support the usual operators, mixing freely with
``int`` and ``Fraction``::

    >>> t = Poly.t()
    >>> f = (3*t + 5) / (t - 7)
    >>> f * (1 / f)
    RatFunc(1)
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce

ZERO = Fraction(0)
ONE = Fraction(1)


def Q(x, d=None) -> Fraction:
    """Coerce to an exact rational; floats are rejected to keep arithmetic exact."""
    if isinstance(x, float):
        raise TypeError(f"refusing inexact float {x!r}; pass a Fraction or string")
    if d is not None:
        return Fraction(x, d)
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def _trim(c):
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


class Poly:
    __slots__ = ("c", "_hash")

    def __init__(self, coeffs=()):
        if isinstance(coeffs, (int, Fraction)):
            coeffs = (coeffs,)
        self.c = _trim([Q(x) for x in coeffs])
        self._hash = None

    @classmethod
    def _raw(cls, c):
        # c must already be a trimmed tuple of Fractions
        p = object.__new__(cls)
        p.c = c
        p._hash = None
        return p

    @classmethod
    def t(cls) -> Poly:
        return cls._raw((ZERO, ONE))

    @classmethod
    def const(cls, x) -> Poly:
        x = Q(x)
        return cls._raw((x,) if x else ())

    @classmethod
    def monomial(cls, k: int, coeff=1) -> Poly:
        coeff = Q(coeff)
        if not coeff:
            return cls._raw(())
        return cls._raw((ZERO,) * k + (coeff,))

    # -- structure -------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self) -> Fraction:
        return self.c[-1] if self.c else ZERO

    def coeff(self, k: int) -> Fraction:
        return self.c[k] if 0 <= k < len(self.c) else ZERO

    def is_zero(self) -> bool:
        return not self.c

    def is_const(self) -> bool:
        return len(self.c) <= 1

    def monic(self) -> Poly:
        if not self.c or self.c[-1] == 1:
            return self
        inv = 1 / self.c[-1]
        return Poly._raw(tuple(x * inv for x in self.c))

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == Poly.const(other).c
        if isinstance(other, RatFunc):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Poly", self.c))
        return self._hash

    def __repr__(self):
        return f"Poly({self.to_str()})"

    def to_str(self, var: str = "t") -> str:
        if not self.c:
            return "0"
        parts = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if not a:
                continue
            sign = "-" if a < 0 else "+"
            a = abs(a)
            if k == 0:
                body = str(a)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        s0, b0 = parts[0]
        out = ("-" if s0 == "-" else "") + b0
        for s, b in parts[1:]:
            out += f" {s} {b}"
        return out

    # -- arithmetic ------------------------------------------------------
    def __neg__(self):
        return Poly._raw(tuple(-x for x in self.c))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        elif not isinstance(other, Poly):
            return NotImplemented
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return Poly._raw(_trim(out))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        elif not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly._raw(())
            return Poly._raw(tuple(x * other for x in self.c))
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.c, other.c
        if not a or not b:
            return Poly._raw(())
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly._raw(_trim(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc(Poly.const(1), self) ** (-k)
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("polynomial divided by zero")
            inv = 1 / Q(other)
            return Poly._raw(tuple(x * inv for x in self.c))
        if isinstance(other, Poly):
            return RatFunc(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFunc(Poly.const(other), self)
        return NotImplemented

    def __divmod__(self, other: Poly):
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        db = len(other.c) - 1
        if len(r) - 1 < db:
            return Poly._raw(()), self
        inv = 1 / other.c[-1]
        q = [ZERO] * (len(r) - db)
        bc = other.c
        for k in range(len(r) - 1, db - 1, -1):
            x = r[k]
            if x:
                f = x * inv
                q[k - db] = f
                for j in range(db + 1):
                    r[k - db + j] -= f * bc[j]
        return Poly._raw(_trim(q)), Poly._raw(_trim(r[:db]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: Poly) -> Poly:
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other!r} does not divide {self!r}")
        return q

    # -- calculus and evaluation -----------------------------------------
    def deriv(self, k: int = 1) -> Poly:
        c = self.c
        for _ in range(k):
            c = tuple(i * c[i] for i in range(1, len(c)))
        return Poly._raw(c)

    def antideriv(self, constant=0) -> Poly:
        """Antiderivative with the given constant term."""
        c = (Q(constant),) + tuple(x / (i + 1) for i, x in enumerate(self.c))
        return Poly._raw(_trim(c))

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, (int, Fraction)) else ZERO
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for a in reversed(self.c):
            acc = acc * x + float(a)
        return acc

    def compose(self, inner: Poly) -> Poly:
        acc = Poly._raw(())
        for a in reversed(self.c):
            acc = acc * inner + a
        return acc

    def valuation_at(self, c) -> int:
        """Multiplicity of ``c`` as a root (``-1`` marks the zero polynomial)."""
        if not self.c:
            return -1
        lin = Poly._raw((-Q(c), ONE))
        k, p = 0, self
        while True:
            q, r = divmod(p, lin)
            if r:
                return k
            k, p = k + 1, q

    def content_primitive(self):
        """Split into (rational content, primitive integer polynomial) with positive lc."""
        if not self.c:
            return ZERO, self
        from math import gcd, lcm

        den = reduce(lcm, (x.denominator for x in self.c), 1)
        ints = [int(x * den) for x in self.c]
        g = reduce(gcd, ints, 0)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), Poly._raw(tuple(Fraction(i // g) for i in ints))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (``gcd(0, 0) = 0``)."""
    if not b.c:
        return a.monic()
    if not a.c:
        return b.monic()
    if len(a.c) == 1 or len(b.c) == 1:
        return Poly._raw((ONE,))
    # primitive remainder sequence keeps coefficient growth in check
    _, a = a.content_primitive()
    _, b = b.content_primitive()
    while b.c:
        if len(b.c) == 1:
            return Poly._raw((ONE,))
        _, r = divmod(a, b)
        a = b
        b = r.content_primitive()[1] if r.c else r
    return a.monic()


_POLY_ONE = Poly._raw((ONE,))


class RatFunc:
    """Reduced rational function ``num/den`` with monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None):
        if not isinstance(num, Poly):
            num = Poly(num) if not isinstance(num, RatFunc) else num
        if isinstance(num, RatFunc):
            if den is not None:
                raise TypeError("RatFunc(RatFunc, den) is ambiguous")
            self.num, self.den, self._hash = num.num, num.den, None
            return
        if den is None:
            den = _POLY_ONE
        elif not isinstance(den, Poly):
            den = Poly(den)
        if not den.c:
            raise ZeroDivisionError("rational function with zero denominator")
        if len(den.c) > 1 and num.c:
            g = poly_gcd(num, den)
            if len(g.c) > 1:
                num = num.exact_div(g)
                den = den.exact_div(g)
        if not num.c:
            den = _POLY_ONE
        lc = den.c[-1]
        if lc != 1:
            num = num / lc
            den = den / lc
        self.num, self.den, self._hash = num, den, None

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> RatFunc:
        r = object.__new__(cls)
        r.num, r.den, r._hash = num, den, None
        return r

    @classmethod
    def coerce(cls, x) -> RatFunc:
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Poly):
            return cls._raw(x, _POLY_ONE)
        if isinstance(x, (int, Fraction)):
            return cls._raw(Poly.const(x), _POLY_ONE)
        raise TypeError(f"cannot coerce {type(x).__name__} to RatFunc")

    @classmethod
    def t(cls) -> RatFunc:
        return cls._raw(Poly.t(), _POLY_ONE)

    # -- structure -------------------------------------------------------
    def is_poly(self) -> bool:
        return len(self.den.c) == 1

    def is_const(self) -> bool:
        return len(self.den.c) == 1 and len(self.num.c) <= 1

    def is_zero(self) -> bool:
        return not self.num.c

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError(f"{self!r} is not constant")
        return self.num.coeff(0)

    def as_poly(self) -> Poly:
        if not self.is_poly():
            raise ValueError(f"{self!r} is not a polynomial")
        return self.num

    @property
    def degree(self) -> int:
        """Degree at infinity: deg(num) - deg(den) (``None`` for zero)."""
        if not self.num.c:
            return None
        return self.num.degree - self.den.degree

    def __bool__(self):
        return bool(self.num.c)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num.c == other.num.c and self.den.c == other.den.c
        if isinstance(other, Poly):
            return self.is_poly() and self.num.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.is_const() and self.num.coeff(0) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num.c, self.den.c))
        return self._hash

    def __repr__(self):
        return f"RatFunc({self.to_str()})"

    def to_str(self, var: str = "t") -> str:
        if self.is_poly():
            return self.num.to_str(var)
        return f"({self.num.to_str(var)})/({self.den.to_str(var)})"

    # -- arithmetic ------------------------------------------------------
    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __add__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if len(self.den.c) == 1 and len(o.den.c) == 1:
            return RatFunc._raw(self.num + o.num, _POLY_ONE)
        if self.den.c == o.den.c:
            return RatFunc(self.num + o.num, self.den)
        if len(o.den.c) == 1:
            return RatFunc(self.num + o.num * self.den, self.den)
        if len(self.den.c) == 1:
            return RatFunc(self.num * o.den + o.num, o.den)
        g = poly_gcd(self.den, o.den)
        if len(g.c) == 1:
            return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)
        d1 = self.den.exact_div(g)
        d2 = o.den.exact_div(g)
        return RatFunc(self.num * d2 + o.num * d1, self.den * d2)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFunc._raw(Poly._raw(()), _POLY_ONE)
            return RatFunc._raw(self.num * other, self.den)
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if not self.num.c or not o.num.c:
            return RatFunc._raw(Poly._raw(()), _POLY_ONE)
        a, b, c, d = self.num, self.den, o.num, o.den
        if len(b.c) == 1 and len(d.c) == 1:
            return RatFunc._raw(a * c, _POLY_ONE)
        if len(d.c) > 1 and len(a.c) > 1:
            g = poly_gcd(a, d)
            if len(g.c) > 1:
                a, d = a.exact_div(g), d.exact_div(g)
        if len(b.c) > 1 and len(c.c) > 1:
            g = poly_gcd(c, b)
            if len(g.c) > 1:
                c, b = c.exact_div(g), b.exact_div(g)
        return RatFunc._raw(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if not self.num.c:
            raise ZeroDivisionError("inverse of the zero rational function")
        lc = self.num.c[-1]
        return RatFunc._raw(self.den / lc, self.num / lc)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("rational function divided by zero")
            return RatFunc._raw(self.num / other, self.den)
        try:
            o = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc._raw(self.num ** k, self.den ** k)

    # -- calculus and evaluation -----------------------------------------
    def deriv(self) -> RatFunc:
        if len(self.den.c) == 1:
            return RatFunc._raw(self.num.deriv(), _POLY_ONE)
        n, d = self.num, self.den
        return RatFunc(n.deriv() * d - n * d.deriv(), d * d)

    def __call__(self, x):
        dv = self.den(x)
        if not dv:
            raise ZeroDivisionError(f"evaluation of {self!r} at a pole t={x}")
        return self.num(x) / dv

    def eval_float(self, x: float) -> float:
        return self.num.eval_float(x) / self.den.eval_float(x)

    def valuation_at(self, c) -> int:
        """Order of vanishing at ``c`` (negative for a pole); ``None`` for zero."""
        if not self.num.c:
            return None
        return self.num.valuation_at(c) - self.den.valuation_at(c)


def ratfunc_arith(x, y=None, op: str = "add"):
    """Functional front end: ``op`` in {add, sub, mul, div, derive, eval}.

    For ``derive`` the second argument is ignored; for ``eval`` it is the
    evaluation point.
    """
    x = RatFunc.coerce(x)
    if op == "derive":
        return x.deriv()
    if op == "eval":
        return x(Q(y))
    y = RatFunc.coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown op {op!r}")


__all__ = ["Q", "Poly", "RatFunc", "poly_gcd", "ratfunc_arith"]
