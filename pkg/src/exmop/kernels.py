"""Scalar kernels ``exp(e(t)) * prod |t - c|**g`` and quasi-rational matrices.

A :class:`QuasiRatMat` is a kernel times a rational matrix body.  The class
is closed under differentiation (the kernel's logarithmic derivative is
rational), products and inversion, which is all the seeds and weights in
this package ever need.

Power factors are taken in absolute value, so a kernel is real and positive
on any interval avoiding its centers.  The logarithmic derivative is the same
as for the signed power, ``g / (t - c)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Poly, Q, RatFunc, RatMat


def _merge_powers(pairs) -> tuple:
    acc: dict[Fraction, Fraction] = {}
    for c, g in pairs:
        c, g = Q(c), Q(g)
        acc[c] = acc.get(c, Fraction(0)) + g
    return tuple(sorted((c, g) for c, g in acc.items() if g))


@dataclass(frozen=True)
class Kernel:
    exp_arg: Poly = field(default_factory=Poly)
    powers: tuple = ()

    def __post_init__(self):
        e = self.exp_arg if isinstance(self.exp_arg, Poly) else Poly(self.exp_arg)
        # a constant exponent only rescales; we drop it to keep kernels canonical
        if e.degree >= 0 and e.coeff(0):
            e = e - e.coeff(0)
        object.__setattr__(self, "exp_arg", e)
        object.__setattr__(self, "powers", _merge_powers(self.powers))

    @classmethod
    def one(cls) -> Kernel:
        return cls()

    @classmethod
    def gaussian(cls) -> Kernel:
        return cls(Poly([0, 0, -1]))

    @classmethod
    def laguerre(cls, alpha) -> Kernel:
        return cls(Poly([0, -1]), ((0, alpha),))

    @classmethod
    def jacobi_symmetric(cls, gamma) -> Kernel:
        """``(1 - t**2)**gamma`` on ``[-1, 1]``."""
        return cls(Poly(), ((-1, gamma), (1, gamma)))

    def is_trivial(self) -> bool:
        return not self.exp_arg and not self.powers

    def log_derivative(self) -> RatFunc:
        t = Poly.t()
        acc = RatFunc.coerce(self.exp_arg.deriv())
        for c, g in self.powers:
            acc = acc + RatFunc(Poly.const(g), t - c)
        return acc

    def __mul__(self, other: Kernel) -> Kernel:
        if not isinstance(other, Kernel):
            return NotImplemented
        return Kernel(self.exp_arg + other.exp_arg, self.powers + other.powers)

    def inverse(self) -> Kernel:
        return Kernel(-self.exp_arg, tuple((c, -g) for c, g in self.powers))

    def __truediv__(self, other: Kernel) -> Kernel:
        return self * other.inverse()

    def __pow__(self, k: int) -> Kernel:
        return Kernel(self.exp_arg * k, tuple((c, g * k) for c, g in self.powers))

    def eval_float(self, x: float) -> float:
        v = math.exp(self.exp_arg.eval_float(x))
        for c, g in self.powers:
            v *= abs(x - float(c)) ** float(g)
        return v

    def eval_mp(self, x):
        import mpmath as mp

        v = mp.exp(self.exp_arg(x))
        for c, g in self.powers:
            v *= abs(x - mp.mpf(c.numerator) / c.denominator) ** (mp.mpf(g.numerator) / g.denominator)
        return v

    def describe(self) -> str:
        parts = []
        if self.exp_arg:
            parts.append(f"exp({self.exp_arg.to_str()})")
        for c, g in self.powers:
            base = "|t|" if c == 0 else f"|t - {c}|" if c > 0 else f"|t + {-c}|"
            parts.append(f"{base}^({g})")
        return " * ".join(parts) or "1"


def side_sign(c: Fraction, support) -> int:
    """Sign of ``t - c`` on the interior of ``support`` (``0`` if c is inside)."""
    lo, hi = support
    if lo is not None and c <= lo:
        return 1
    if hi is not None and c >= hi:
        return -1
    return 0


def kernel_ratio_as_rational(k: Kernel, support) -> RatFunc | None:
    """Return ``k`` as a rational function on ``support`` when that is possible.

    Possible iff the exponential part is trivial, every exponent is an integer
    and every center lies outside the open support.
    """
    if k.exp_arg:
        return None
    t = Poly.t()
    acc = RatFunc.coerce(1)
    for c, g in k.powers:
        if g.denominator != 1:
            return None
        s = side_sign(c, support)
        if s == 0:
            return None
        # |t - c|**g = (s*(t - c))**g
        acc = acc * (s * (t - c)) ** int(g)
    return acc


@dataclass(frozen=True)
class QuasiRatMat:
    kernel: Kernel
    body: RatMat

    @classmethod
    def rational(cls, body: RatMat) -> QuasiRatMat:
        return cls(Kernel(), body)

    @property
    def n(self) -> int:
        return self.body.n

    def is_zero(self) -> bool:
        return self.body.is_zero()

    def is_rational(self) -> bool:
        return self.kernel.is_trivial() or self.body.is_zero()

    def as_rational(self) -> RatMat:
        if not self.is_rational():
            raise ValueError(f"kernel {self.kernel.describe()} is not trivial")
        return self.body

    def deriv(self) -> QuasiRatMat:
        body = self.body.deriv()
        if not self.kernel.is_trivial():
            body = body + self.body * self.kernel.log_derivative()
        return QuasiRatMat(self.kernel, body)

    def derivs(self, k: int) -> list:
        out = [self]
        for _ in range(k):
            out.append(out[-1].deriv())
        return out

    def _align(self, other: QuasiRatMat):
        if self.kernel == other.kernel:
            return self.kernel, self.body, other.body
        if self.body.is_zero():
            return other.kernel, RatMat.zero(self.n), other.body
        if other.body.is_zero():
            return self.kernel, self.body, RatMat.zero(self.n)
        raise ValueError(
            f"kernels differ: {self.kernel.describe()} vs {other.kernel.describe()}"
        )

    def __add__(self, other):
        if isinstance(other, RatMat):
            other = QuasiRatMat.rational(other)
        if not isinstance(other, QuasiRatMat):
            return NotImplemented
        k, a, b = self._align(other)
        return QuasiRatMat(k, a + b)

    __radd__ = __add__

    def __neg__(self):
        return QuasiRatMat(self.kernel, -self.body)

    def __sub__(self, other):
        if isinstance(other, RatMat):
            other = QuasiRatMat.rational(other)
        if not isinstance(other, QuasiRatMat):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __matmul__(self, other):
        if isinstance(other, RatMat):
            return QuasiRatMat(self.kernel, self.body @ other)
        if isinstance(other, QuasiRatMat):
            return QuasiRatMat(self.kernel * other.kernel, self.body @ other.body)
        return NotImplemented

    def __rmatmul__(self, other):
        if isinstance(other, RatMat):
            return QuasiRatMat(self.kernel, other @ self.body)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly, RatFunc)):
            return QuasiRatMat(self.kernel, self.body * other)
        return self.__matmul__(other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Poly, RatFunc)):
            return QuasiRatMat(self.kernel, other * self.body)
        return self.__rmatmul__(other)

    @property
    def T(self) -> QuasiRatMat:
        return QuasiRatMat(self.kernel, self.body.T)

    def inverse(self) -> QuasiRatMat:
        return QuasiRatMat(self.kernel.inverse(), self.body.inverse())

    def det_body(self) -> RatFunc:
        return self.body.det()

    def equals_on(self, other: QuasiRatMat, support) -> bool:
        """Equality as functions on the open ``support``.

        Kernels may differ by integer powers of factors whose centers lie
        outside the support; those are folded into the body before comparing.
        """
        ratio = kernel_ratio_as_rational(self.kernel / other.kernel, support)
        if ratio is None:
            return self.kernel == other.kernel and self.body == other.body
        return self.body * ratio == other.body

    def proportional_on(self, other: QuasiRatMat, support):
        """Return the constant c with ``self = c * other`` on ``support``, else None."""
        ratio = kernel_ratio_as_rational(self.kernel / other.kernel, support)
        if ratio is None:
            return None
        lhs = self.body * ratio
        c = None
        for x, y in zip(lhs.entries(), other.body.entries()):
            if not y:
                if x:
                    return None
                continue
            q = x / y
            if not q.is_const():
                return None
            if c is None:
                c = q.const_value()
            elif q.const_value() != c:
                return None
        return c

    def eval_float(self, x: float):
        k = self.kernel.eval_float(x)
        return [[k * v for v in row] for row in self.body.eval_float(x)]


def log_derivative(k: Kernel) -> RatFunc:
    return k.log_derivative()


def qr_differentiate(f: QuasiRatMat) -> QuasiRatMat:
    return f.deriv()


__all__ = [
    "Kernel",
    "QuasiRatMat",
    "kernel_ratio_as_rational",
    "log_derivative",
    "qr_differentiate",
    "side_sign",
]
