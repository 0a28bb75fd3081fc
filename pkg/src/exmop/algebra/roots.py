"""Exact real-root counting with Sturm sequences.

Interval endpoints are rationals or ``None`` for an infinite end.
"""

from __future__ import annotations

from .poly import Poly, Q, poly_gcd


def squarefree_part(p: Poly) -> Poly:
    if p.degree <= 0:
        return p
    return p.exact_div(poly_gcd(p, p.deriv()))


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.deriv()]
    while seq[-1]:
        r = -(seq[-2] % seq[-1])
        if not r:
            break
        # positive rescaling keeps signs and tames coefficient growth
        c, prim = r.content_primitive()
        seq.append(prim if c > 0 else -prim)
    return seq


def _sign_at(p: Poly, x, side: int = 0) -> int:
    """Sign of p at x; with x None, side=+1 means +inf and -1 means -inf."""
    if x is None:
        if not p:
            return 0
        s = 1 if p.lc > 0 else -1
        return s if side > 0 or p.degree % 2 == 0 else -s
    v = p(x)
    return (v > 0) - (v < 0)


def _variations(seq, x, side) -> int:
    signs = [s for s in (_sign_at(q, x, side) for q in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: Poly, lo=None, hi=None, closed: bool = True) -> int:
    """Number of distinct real roots of ``p`` in the interval ``[lo, hi]``.

    Infinite ends (``None``) are always open.  With ``closed=False`` the
    finite endpoints are excluded too.
    """
    if not p:
        raise ValueError("the zero polynomial has infinitely many roots")
    lo = None if lo is None else Q(lo)
    hi = None if hi is None else Q(hi)
    if p.degree == 0:
        return 0
    sq = squarefree_part(p)
    seq = sturm_sequence(sq)
    # Sturm counts roots in the half-open interval (lo, hi]
    n = _variations(seq, lo, -1) - _variations(seq, hi, +1)
    if hi is not None and not sq(hi) and not closed:
        n -= 1
    if lo is not None and not sq(lo) and closed:
        n += 1
    return n


def has_root_in(p: Poly, lo=None, hi=None, closed: bool = True) -> bool:
    return count_real_roots(p, lo, hi, closed) > 0


def isolate_real_roots(p: Poly, lo=None, hi=None, width=Q(1, 10**6)) -> list[tuple]:
    """Disjoint rational intervals ``(a, b]`` each holding exactly one root."""
    if lo is None or hi is None:
        bound = 1 + max((abs(c / p.lc) for c in p.c[:-1]), default=Q(0))
        lo = -bound if lo is None else Q(lo)
        hi = bound if hi is None else Q(hi)
    sq = squarefree_part(p)
    seq = sturm_sequence(sq)
    out = []
    stack = [(Q(lo), Q(hi))]
    while stack:
        a, b = stack.pop()
        k = _variations(seq, a, 0) - _variations(seq, b, 0)
        if k == 0:
            continue
        if k == 1 and b - a <= width:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        stack.append((mid, b))
        stack.append((a, mid))
    return sorted(out)


__all__ = ["sturm_sequence", "count_real_roots", "has_root_in", "isolate_real_roots", "squarefree_part"]
