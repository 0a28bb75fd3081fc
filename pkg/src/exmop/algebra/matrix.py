"""Square matrices over rational functions.

:class:`RatMat` is immutable; entries are :class:`RatFunc`.  Polynomial
matrices are simply RatMats whose entries happen to have denominator 1, with
:meth:`RatMat.is_poly` and :meth:`RatMat.degree` to query that structure.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly, Q, RatFunc

_ZERO_RF = RatFunc.coerce(0)
_ONE_RF = RatFunc.coerce(1)


class SingularMatrixError(ArithmeticError):
    pass


def _rf(x) -> RatFunc:
    return RatFunc.coerce(x)


class RatMat:
    __slots__ = ("rows", "n", "_hash")

    def __init__(self, rows):
        rows = tuple(tuple(_rf(x) for x in r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("RatMat must be square and non-empty")
        self.rows = rows
        self.n = n
        self._hash = None

    @classmethod
    def _raw(cls, rows) -> RatMat:
        m = object.__new__(cls)
        m.rows = rows
        m.n = len(rows)
        m._hash = None
        return m

    @classmethod
    def identity(cls, n: int = 2) -> RatMat:
        return cls.scalar(1, n)

    @classmethod
    def zero(cls, n: int = 2) -> RatMat:
        return cls._raw(tuple((_ZERO_RF,) * n for _ in range(n)))

    @classmethod
    def scalar(cls, x, n: int = 2) -> RatMat:
        x = _rf(x)
        return cls._raw(tuple(tuple(x if i == j else _ZERO_RF for j in range(n)) for i in range(n)))

    @classmethod
    def diag(cls, *entries) -> RatMat:
        n = len(entries)
        return cls._raw(
            tuple(tuple(_rf(entries[i]) if i == j else _ZERO_RF for j in range(n)) for i in range(n))
        )

    @classmethod
    def unit(cls, i: int, j: int, n: int = 2, value=1) -> RatMat:
        """Matrix with ``value`` at (i, j) and zeros elsewhere."""
        v = _rf(value)
        return cls._raw(
            tuple(tuple(v if (r, c) == (i, j) else _ZERO_RF for c in range(n)) for r in range(n))
        )

    # -- structure -------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        for r in self.rows:
            yield from r

    def is_zero(self) -> bool:
        return all(not x.num.c for x in self.entries())

    def is_poly(self) -> bool:
        return all(x.is_poly() for x in self.entries())

    def is_const(self) -> bool:
        return all(x.is_const() for x in self.entries())

    def is_symmetric(self) -> bool:
        return self == self.T

    @property
    def degree(self) -> int:
        """Maximal entry degree of a polynomial matrix (``-1`` for zero)."""
        if not self.is_poly():
            raise ValueError("degree is only defined for polynomial matrices")
        return max(x.num.degree for x in self.entries())

    def coeff(self, k: int) -> RatMat:
        """Constant matrix of ``t**k`` coefficients of a polynomial matrix."""
        return RatMat._raw(tuple(tuple(_rf(x.as_poly().coeff(k)) for x in r) for r in self.rows))

    @property
    def lc(self) -> RatMat:
        return self.coeff(self.degree)

    def const_entries(self) -> tuple:
        """Entries of a constant matrix as nested tuples of Fraction."""
        return tuple(tuple(x.const_value() for x in r) for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, RatMat):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self):
        inner = ", ".join("[" + ", ".join(x.to_str() for x in r) + "]" for r in self.rows)
        return f"RatMat([{inner}])"

    # -- arithmetic ------------------------------------------------------
    @property
    def T(self) -> RatMat:
        return RatMat._raw(tuple(zip(*self.rows)))

    def map(self, fn) -> RatMat:
        return RatMat._raw(tuple(tuple(fn(x) for x in r) for r in self.rows))

    def __neg__(self):
        return self.map(lambda x: -x)

    def __add__(self, other):
        if not isinstance(other, RatMat):
            return NotImplemented
        return RatMat._raw(
            tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows))
        )

    def __sub__(self, other):
        if not isinstance(other, RatMat):
            return NotImplemented
        return RatMat._raw(
            tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows))
        )

    def __mul__(self, other):
        if isinstance(other, RatMat):
            return self.matmul(other)
        if isinstance(other, (int, Fraction, Poly, RatFunc)):
            o = _rf(other)
            return self.map(lambda x: x * o)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Poly, RatFunc)):
            o = _rf(other)
            return self.map(lambda x: o * x)
        return NotImplemented

    def __matmul__(self, other):
        if not isinstance(other, RatMat):
            return NotImplemented
        return self.matmul(other)

    def matmul(self, other: RatMat) -> RatMat:
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        cols = tuple(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = _ZERO_RF
                for x, y in zip(r, c):
                    if x.num.c and y.num.c:
                        acc = acc + x * y
                row.append(acc)
            out.append(tuple(row))
        return RatMat._raw(tuple(out))

    def __truediv__(self, other):
        o = _rf(other)
        return self.map(lambda x: x / o)

    def deriv(self) -> RatMat:
        return self.map(lambda x: x.deriv())

    def __call__(self, t0) -> RatMat:
        """Evaluate at an exact point, returning a constant RatMat."""
        t0 = Q(t0)
        return self.map(lambda x: _rf(x(t0)))

    def eval_float(self, x: float):
        return [[e.eval_float(x) for e in r] for r in self.rows]

    def trace(self) -> RatFunc:
        acc = _ZERO_RF
        for i in range(self.n):
            acc = acc + self.rows[i][i]
        return acc

    # -- determinant and inverse ----------------------------------------
    def det(self) -> RatFunc:
        return mat_det(self)

    def inverse(self) -> RatMat:
        return mat_inverse(self)

    def adjugate(self) -> RatMat:
        return _adjugate(self)


def _det2(a, b, c, d):
    return a * d - b * c


def _det_cofactor(m: RatMat) -> RatFunc:
    r = m.rows
    n = m.n
    if n == 1:
        return r[0][0]
    if n == 2:
        return _det2(r[0][0], r[0][1], r[1][0], r[1][1])
    acc = _ZERO_RF
    for j in range(n):
        if not r[0][j]:
            continue
        minor = RatMat._raw(tuple(tuple(x for k, x in enumerate(row) if k != j) for row in r[1:]))
        term = r[0][j] * _det_cofactor(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def _det_bareiss(m: RatMat) -> RatFunc:
    # clear denominators, then fraction-free elimination over Q[t]
    rows = [list(r) for r in m.rows]
    n = m.n
    scale = _ONE_RF
    a = []
    for r in rows:
        d = Poly.const(1)
        for x in r:
            d = d * x.den // _gcd_poly(d, x.den)
        scale = scale * _rf(d)
        a.append([(x * _rf(d)).as_poly() for x in r])
    sign = 1
    prev = Poly.const(1)
    for k in range(n - 1):
        if not a[k][k]:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return _ZERO_RF
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
            a[i][k] = Poly()
        prev = a[k][k]
    return _rf(a[n - 1][n - 1]) * sign / scale


def _gcd_poly(a, b):
    from .poly import poly_gcd

    return poly_gcd(a, b)


def mat_det(m: RatMat) -> RatFunc:
    """Exact determinant: cofactor expansion for N <= 3, Bareiss above."""
    if m.n <= 3:
        return _det_cofactor(m)
    return _det_bareiss(m)


def _adjugate(m: RatMat) -> RatMat:
    n = m.n
    r = m.rows
    if n == 1:
        return RatMat._raw(((_ONE_RF,),))
    if n == 2:
        return RatMat._raw(((r[1][1], -r[0][1]), (-r[1][0], r[0][0])))
    cof = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = RatMat._raw(
                tuple(tuple(x for k, x in enumerate(rr) if k != j) for ii, rr in enumerate(r) if ii != i)
            )
            d = mat_det(minor)
            row.append(d if (i + j) % 2 == 0 else -d)
        cof.append(tuple(row))
    return RatMat._raw(tuple(cof)).T


def _inverse_elim(m: RatMat) -> RatMat:
    n = m.n
    a = [list(r) + [_ONE_RF if i == j else _ZERO_RF for j in range(n)] for i, r in enumerate(m.rows)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        inv = a[k][k].inverse()
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return RatMat._raw(tuple(tuple(r[n:]) for r in a))


def mat_inverse(m: RatMat) -> RatMat:
    """Exact inverse: adjugate for N <= 3, Gauss-Jordan above."""
    if m.n > 3:
        return _inverse_elim(m)
    d = mat_det(m)
    if not d:
        raise SingularMatrixError(f"matrix is singular: {m!r}")
    dinv = d.inverse()
    return _adjugate(m).map(lambda x: x * dinv)


def const_mat(rows) -> RatMat:
    """Build a constant RatMat from nested rationals."""
    return RatMat([[Q(x) for x in r] for r in rows])


__all__ = ["RatMat", "SingularMatrixError", "mat_det", "mat_inverse", "const_mat"]
