"""Gauss rules for ``exp(-t^2) / d(t)`` with ``d`` free of real zeros.

Gauss-Hermite converges only geometrically in ``sqrt(n)`` on integrands with
complex poles near the real axis, so inner products against rational weights
stall well above rounding level.  Building the Gauss rule for the modified
measure instead makes the remaining integrand polynomial and the rule exact
on it.

Construction: modified moments of the new measure in the Hermite basis come
from the Hermite functions of the second kind at the roots of ``d``
(Faddeeva function plus forward recurrence at high precision), partial
fractions of ``1/d``, and the modified Chebyshev algorithm.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

import mpmath as mp

from ..algebra import Poly, poly_gcd
from ..kernels import Kernel
from .quadrature import QuadratureRule, _refine, recurrence_coefficients


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: ``p = lc * prod s_i^i`` with squarefree, coprime ``s_i``."""
    out = []
    p = p.monic()
    if p.degree <= 0:
        return out
    a = p
    b = a.deriv()
    c = poly_gcd(a, b)
    w = a.exact_div(c)
    y = b.exact_div(c) if c.degree >= 0 else b
    z = y - w.deriv()
    i = 1
    while w.degree > 0:
        g = poly_gcd(w, z)
        if g.degree > 0:
            out.append((g, i))
        w = w.exact_div(g)
        y = z.exact_div(g)
        z = y - w.deriv()
        i += 1
    return out


def _faddeeva_derivs(z, order: int):
    """``F^(j)(z)`` for ``F(z) = int exp(-t^2) / (z - t) dt``, ``j <= order``."""
    flip = mp.im(z) < 0
    if flip:
        z = mp.conj(z)
    w = [mp.exp(-z * z) * mp.erfc(-1j * z)]
    if order >= 1:
        w.append(-2 * z * w[0] + 2j / mp.sqrt(mp.pi))
    for j in range(1, order):
        w.append(-2 * z * w[j] - 2 * j * w[j - 1])
    vals = [-1j * mp.pi * v for v in w]
    if flip:
        vals = [mp.conj(v) for v in vals]
    return vals


def _second_kind(z, npoints: int, order: int):
    """``K_k^(j)(z) = d^j/dz^j int q_k(t) exp(-t^2) / (z - t) dt`` for orthonormal Hermite ``q_k``."""
    m0 = mp.sqrt(mp.pi)
    sm0 = mp.sqrt(m0)
    sb = [mp.sqrt(mp.mpf(k) / 2) for k in range(npoints + 1)]
    F = _faddeeva_derivs(z, order)
    K = [[F[j] / sm0] for j in range(order + 1)]
    prev = [mp.mpc(0)] * (order + 1)
    for k in range(npoints - 1):
        nxt = []
        for j in range(order + 1):
            v = z * K[j][k] - sb[k] * (K[j][k - 1] if k else prev[j])
            if j:
                v += j * K[j - 1][k]
            if k == 0 and j == 0:
                v -= sm0
            nxt.append(v / sb[k + 1])
        for j in range(order + 1):
            K[j].append(nxt[j])
    return K


def _partial_fractions(roots):
    """Coefficients ``c[z][l]`` with ``1/d = sum c[z][l] / (t - z)^l``.

    ``roots`` is a list of ``(z, multiplicity)``; ``d`` is monic.
    """
    out = []
    for z, m in roots:
        series = [mp.mpc(1)] + [mp.mpc(0)] * (m - 1)
        for z2, m2 in roots:
            if z2 is z:
                continue
            u = z - z2
            # (u + h)^(-m2) = u^(-m2) sum_r (-1)^r C(m2+r-1, r) (h/u)^r
            fac = [u ** (-m2) * (-1) ** r * comb(m2 + r - 1, r) * u ** (-r) for r in range(m)]
            series = [sum(series[i] * fac[r - i] for i in range(r + 1)) for r in range(m)]
        out.append((z, m, {l: series[m - l] for l in range(1, m + 1)}))
    return out


def _modified_chebyshev(mom, a, b, npoints: int):
    """Recurrence coefficients from monic modified moments (Gautschi's algorithm)."""
    n2 = 2 * npoints
    alpha = [mp.mpf(0)] * npoints
    beta = [mp.mpf(0)] * npoints
    sig_prev = [mp.mpf(0)] * n2
    sig = list(mom)
    alpha[0] = a[0] + mom[1] / mom[0]
    beta[0] = mom[0]
    for k in range(1, npoints):
        new = [mp.mpf(0)] * n2
        for l in range(k, n2 - k):
            new[l] = sig[l + 1] - (alpha[k - 1] - a[l]) * sig[l] - beta[k - 1] * sig_prev[l] + b[l] * sig[l - 1]
        alpha[k] = a[k] + new[k + 1] / new[k] - sig[k] / sig[k - 1]
        beta[k] = new[k] / sig[k - 1]
        sig_prev, sig = sig, new
    return alpha, beta


@lru_cache(maxsize=16)
def rational_gauss_quadrature(denominator: Poly, npoints: int, dps: int | None = None) -> QuadratureRule:
    """Gauss rule for ``exp(-t^2) / denominator(t)`` on the real line.

    The rule's ``denominator`` field records the modification: integrating
    ``f`` with it approximates ``int f(t) exp(-t^2) / denominator(t) dt`` and
    is exact for polynomial ``f`` of degree below ``2 * npoints``.
    """
    d = denominator
    lc = d.lc
    dm = d.monic()
    factors = squarefree_decomposition(dm)
    base = (dps or 16) + 40
    with mp.workdps(base):
        roots = []
        for s, mult in factors:
            cs = [mp.mpf(c.numerator) / c.denominator for c in reversed(s.c)]
            rs = mp.polyroots(cs, maxsteps=200, extraprec=2 * base) if s.degree > 1 else [-cs[1] / cs[0]]
            for r in rs:
                roots.append((mp.mpc(r), mult))
        if any(abs(mp.im(z)) < mp.mpf(10) ** (-base // 2) for z, _ in roots):
            raise ValueError("denominator has real zeros")
        max_im = max(abs(mp.im(z)) for z, _ in roots)
    # forward recurrence for the minimal solution loses about this many digits
    loss = int(2 * float(max_im) * (4 * npoints) ** 0.5 / 2.302585) + 10
    work = base + loss
    n2 = 2 * npoints + 2
    with mp.workdps(work):
        roots = [(mp.mpc(z), m) for z, m in roots]
        pf = _partial_fractions(roots)
        order = max(m for _, m in roots) - 1
        nu = [mp.mpc(0)] * n2
        for z, m, coeffs in pf:
            K = _second_kind(z, n2, order)
            for l, c in coeffs.items():
                f = c / mp.factorial(l - 1)
                for k in range(n2):
                    nu[k] -= f * K[l - 1][k]
        nu = [mp.re(v) / (mp.mpf(lc.numerator) / lc.denominator) for v in nu]
        # orthonormal -> monic Hermite moments
        a_f, b_f = recurrence_coefficients("hermite", None, n2 + 1)
        a = [mp.mpf(0)] * (n2 + 1)
        b = [mp.mpf(x.numerator) / x.denominator for x in b_f]
        norm = mp.sqrt(mp.sqrt(mp.pi))
        mom = []
        for k in range(n2):
            if k:
                norm *= mp.sqrt(b[k])
            mom.append(nu[k] * norm)
        alpha, beta = _modified_chebyshev(mom, a, b, npoints + 1)
        m0 = beta[0]
        rule = _refine(alpha, beta, m0, npoints, dps if dps is not None else 30, Kernel.gaussian(), "sqrt(pi)", d)
    if dps is None:
        rule = QuadratureRule(
            tuple(float(x) for x in rule.nodes),
            tuple(float(x) for x in rule.weights),
            rule.base_kernel,
            npoints,
            rule.unit,
            None,
            d,
        )
    return rule


__all__ = ["rational_gauss_quadrature", "squarefree_decomposition"]
