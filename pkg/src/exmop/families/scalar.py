"""Scalar classical orthogonal polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ..algebra import Poly, Q

KINDS = ("hermite-physicists", "laguerre-monic", "jacobi-monic")


@lru_cache(maxsize=None)
def hermite(n: int) -> Poly:
    """Physicists' Hermite: ``H_{n+1} = 2t H_n - 2n H_{n-1}``."""
    if n < 0:
        return Poly()
    t = Poly.t()
    h0, h1 = Poly.const(1), 2 * t
    if n == 0:
        return h0
    for k in range(1, n):
        h0, h1 = h1, 2 * t * h1 - 2 * k * h0
    return h1


@lru_cache(maxsize=None)
def laguerre_monic(n: int, alpha=Fraction(0)) -> Poly:
    """Monic Laguerre: ``l_{n+1} = (t - 2n - alpha - 1) l_n - n (n + alpha) l_{n-1}``."""
    alpha = Q(alpha)
    if alpha <= -1:
        raise ValueError("Laguerre parameter must exceed -1")
    if n < 0:
        return Poly()
    t = Poly.t()
    l0, l1 = Poly.const(1), t - (alpha + 1)
    if n == 0:
        return l0
    for k in range(1, n):
        l0, l1 = l1, (t - (2 * k + alpha + 1)) * l1 - k * (k + alpha) * l0
    return l1


def _jacobi_rec(k: int, al: Fraction, be: Fraction):
    """Monic Jacobi recurrence ``p_{k+1} = (t - b_k) p_k - c_k p_{k-1}``."""
    s = al + be
    if k == 0:
        b = (be - al) / (s + 2)
    else:
        b = (be * be - al * al) / ((2 * k + s) * (2 * k + s + 2))
    if k == 0:
        c = Fraction(0)
    elif k == 1:
        c = 4 * (1 + al) * (1 + be) / ((2 + s) ** 2 * (3 + s))
    else:
        c = 4 * k * (k + al) * (k + be) * (k + s) / ((2 * k + s) ** 2 * (2 * k + s + 1) * (2 * k + s - 1))
    return b, c


@lru_cache(maxsize=None)
def jacobi_monic(n: int, alpha=Fraction(0), beta=Fraction(0)) -> Poly:
    """Monic Jacobi polynomial, orthogonal against ``(1-t)^alpha (1+t)^beta``."""
    al, be = Q(alpha), Q(beta)
    if al <= -1 or be <= -1:
        raise ValueError("Jacobi parameters must exceed -1")
    if n < 0:
        return Poly()
    t = Poly.t()
    p0 = Poly.const(1)
    b, _ = _jacobi_rec(0, al, be)
    p1 = t - b
    if n == 0:
        return p0
    for k in range(1, n):
        b, c = _jacobi_rec(k, al, be)
        p0, p1 = p1, (t - b) * p1 - c * p0
    return p1


def scalar_classical(kind: str, n: int, **params) -> Poly:
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if kind == "hermite-physicists":
        return hermite(n)
    if kind == "laguerre-monic":
        return laguerre_monic(n, Q(params.get("alpha", 0)))
    if kind == "jacobi-monic":
        return jacobi_monic(n, Q(params.get("alpha", 0)), Q(params.get("beta", params.get("alpha", 0))))
    raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
