"""Gauss quadrature for the classical kernels and numeric inner products.

Rules come from the symmetric tridiagonal (Jacobi) matrix of the kernel's
exact recurrence coefficients.  By default the rule is plain double
precision; with ``dps`` set, the double nodes are polished by Newton steps on
the orthonormal recurrence in ``mpmath`` and the weights recomputed from the
Christoffel function, so integrals of large polynomial entries keep their
absolute accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath as mp
import numpy as np

from ..algebra import Poly, RatMat, count_real_roots
from ..kernels import Kernel, QuasiRatMat
from ..weights import WeightSpec, kernel_family, unit_value_float, unit_value_mp


class PoleOnSupport(ValueError):
    pass


def recurrence_coefficients(kind: str, param, n: int):
    """Exact monic recurrence ``p_{k+1} = (t - alpha_k) p_k - beta_k p_{k-1}``."""
    alphas, betas = [], []
    for k in range(n):
        if kind == "hermite":
            alphas.append(Fraction(0))
            betas.append(Fraction(k, 2))
        elif kind == "laguerre":
            alphas.append(2 * k + param + 1)
            betas.append(k * (k + param))
        elif kind == "jacobi":
            g = param
            alphas.append(Fraction(0))
            if k == 0:
                betas.append(Fraction(0))
            elif k == 1:
                betas.append(1 / (2 * g + 3))
            else:
                betas.append(k * (k + 2 * g) / ((2 * k + 2 * g + 1) * (2 * k + 2 * g - 1)))
        else:
            raise ValueError(f"unsupported kernel kind {kind!r}")
    return alphas, betas


@dataclass(frozen=True)
class QuadratureRule:
    nodes: tuple
    weights: tuple
    base_kernel: Kernel
    order: int
    unit: str
    dps: int | None = None
    denominator: Poly | None = None

    def integrate(self, f) -> float:
        return sum(w * f(x) for x, w in zip(self.nodes, self.weights))


def _kernel_for(kind, param) -> tuple:
    if kind == "hermite":
        return Kernel.gaussian(), (None, None)
    if kind == "laguerre":
        return Kernel.laguerre(param), (0, None)
    return Kernel.jacobi_symmetric(param), (-1, 1)


def _refine(alphas, betas, m0, npoints: int, dps: int | None, kernel, unit, denominator=None):
    """Golub-Welsch in double, optionally polished in extended precision.

    ``alphas``/``betas`` are monic recurrence coefficients (mpf or Fraction);
    ``m0`` is the total mass.
    """
    a = np.array([float(x) for x in alphas[:npoints]])
    b = np.sqrt(np.array([float(x) for x in betas[1:npoints]]))
    J = np.diag(a) + np.diag(b, 1) + np.diag(b, -1)
    x, V = np.linalg.eigh(J)
    if dps is None and denominator is None:
        w = float(m0) * V[0, :] ** 2
        return QuadratureRule(tuple(x), tuple(w), kernel, npoints, unit, None, denominator)
    work = (dps or 16) + 10
    with mp.workdps(work):
        al = [_to_mp(v) for v in alphas[: npoints + 1]]
        sb = [mp.sqrt(_to_mp(v)) for v in betas[: npoints + 1]]
        m0m = _to_mp(m0)

        def orthonormal(xv):
            # sqrt(b_{k+1}) q_{k+1} = (x - a_k) q_k - sqrt(b_k) q_{k-1}
            q0, q1 = mp.mpf(0), mp.mpf(1)
            d0, d1 = mp.mpf(0), mp.mpf(0)
            ssum = mp.mpf(1)
            for k in range(npoints):
                q2 = ((xv - al[k]) * q1 - sb[k] * q0) / sb[k + 1]
                d2 = (q1 + (xv - al[k]) * d1 - sb[k] * d0) / sb[k + 1]
                if k < npoints - 1:
                    ssum += q2 * q2
                q0, q1, d0, d1 = q1, q2, d1, d2
            return q1, d1, ssum

        nodes, weights = [], []
        tol = mp.mpf(10) ** (-(work - 3))
        for xi in x:
            xv = mp.mpf(xi)
            for _ in range(10):
                q, dq, _s = orthonormal(xv)
                step = q / dq
                xv -= step
                if abs(step) < tol * (1 + abs(xv)):
                    break
            _q, _dq, s = orthonormal(xv)
            nodes.append(+xv)
            weights.append(m0m / s)
    if dps is None:
        nodes = [float(v) for v in nodes]
        weights = [float(v) for v in weights]
    return QuadratureRule(tuple(nodes), tuple(weights), kernel, npoints, unit, dps, denominator)


def _to_mp(v):
    if isinstance(v, Fraction):
        return mp.mpf(v.numerator) / v.denominator
    if isinstance(v, int):
        return mp.mpf(v)
    return v


@lru_cache(maxsize=32)
def _rule(kind: str, param, npoints: int, dps: int | None) -> QuadratureRule:
    alphas, betas = recurrence_coefficients(kind, param, npoints + 1)
    kernel, support = _kernel_for(kind, param)
    unit = kernel_family(WeightSpec(support, kernel, RatMat.identity(1)))[1]
    if dps is None:
        m0 = unit_value_float(unit)
    else:
        with mp.workdps(dps + 10):
            m0 = unit_value_mp(unit)
    return _refine(alphas, betas, m0, npoints, dps, kernel, unit)


def gauss_quadrature(kernel_or_weight, npoints: int, dps: int | None = None) -> QuadratureRule:
    """Gauss rule for one of the classical kernels.

    ``kernel_or_weight`` is a :class:`WeightSpec` or a ``(kind, param)`` pair
    with kind in {hermite, laguerre, jacobi}.
    """
    if isinstance(kernel_or_weight, WeightSpec):
        kind, _unit, param = kernel_family(kernel_or_weight)
    else:
        kind, param = kernel_or_weight
    param = None if param is None else Fraction(param)
    return _rule(kind, param, npoints, dps)


# ---------------------------------------------------------------------------
# evaluation helpers


def screen_poles(mats, w: WeightSpec):
    """Raise when a denominator has a real zero on the closed support."""
    lo, hi = w.support
    for M in mats:
        for x in M.entries():
            d = x.den
            if d.degree > 0 and count_real_roots(d, lo, hi, closed=True):
                raise PoleOnSupport(f"denominator {d.to_str()} vanishes on the support")


def _mp_poly(p: Poly):
    return [mp.mpf(c.numerator) / c.denominator for c in p.c]


def _horner(coeffs, x):
    acc = mp.mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


class _Evaluator:
    """Evaluate rational matrices at the nodes of a rule, once each."""

    def __init__(self, rule: QuadratureRule):
        self.rule = rule
        self.mp = rule.dps is not None

    def values(self, M: RatMat):
        n = M.n
        out = []
        if self.mp:
            with mp.workdps(self.rule.dps + 10):
                ents = [[(_mp_poly(e.num), _mp_poly(e.den)) for e in row] for row in M.rows]
                for x in self.rule.nodes:
                    out.append(
                        [[_horner(nm, x) / _horner(dn, x) for nm, dn in row] for row in ents]
                    )
            return out
        ents = [[(np.array([float(c) for c in e.num.c[::-1]] or [0.0]), np.array([float(c) for c in e.den.c[::-1]])) for e in row] for row in M.rows]
        xs = np.array(self.rule.nodes)
        cols = [[np.polyval(nm, xs) / np.polyval(dn, xs) for nm, dn in row] for row in ents]
        for k in range(len(xs)):
            out.append([[cols[i][j][k] for j in range(n)] for i in range(n)])
        return out


def _fold(F, w: WeightSpec):
    """Split ``F`` into a rational body relative to the base kernel of ``w``."""
    if isinstance(F, RatMat):
        return F
    if isinstance(F, QuasiRatMat):
        if F.kernel.is_trivial():
            return F.body
        raise ValueError("numeric_inner_product expects rational or polynomial arguments")
    raise TypeError(type(F).__name__)


def common_denominator(M: RatMat) -> Poly:
    """Monic least common multiple of the entry denominators."""
    from ..algebra import poly_gcd

    d = Poly.const(1)
    for x in M.entries():
        d = d * x.den.exact_div(poly_gcd(d, x.den))
    return d.monic()


def numeric_gram(
    polys: dict,
    w: WeightSpec,
    npoints: int = 200,
    dps: int | None = None,
    pairs=None,
    rule: str = "auto",
) -> dict:
    """Numeric ``int F dW G^T`` for pairs drawn from a dict of matrices.

    ``rule="base"`` uses the Gauss rule of the weight's kernel with the whole
    rational density folded into the integrand.  ``rule="rational"`` (Gaussian
    kernel only) uses the Gauss rule of ``kernel / d`` where ``d`` is the
    common denominator of the density, so the integrand is polynomial.
    ``"auto"`` picks the rational rule whenever it applies.

    Returns ``{(n, m): numpy float array}``; point masses are added exactly.
    """
    kind = kernel_family(w)[0]
    den = common_denominator(w.density)
    if rule == "auto":
        rule = "rational" if kind == "hermite" and den.degree > 0 else "base"
    mats = {k: _fold(F, w) for k, F in polys.items()}
    screen_poles(list(mats.values()) + [w.density], w)
    if rule == "rational":
        from .rational_rule import rational_gauss_quadrature

        if kind != "hermite":
            raise ValueError("the rational rule is implemented for the Gaussian kernel only")
        qr = rational_gauss_quadrature(den, npoints, dps)
        dens_mat = w.density * den
    elif rule == "base":
        qr = gauss_quadrature(w, npoints, dps)
        dens_mat = w.density
    else:
        raise ValueError(f"unknown rule {rule!r}")
    ev = _Evaluator(qr)
    dens = ev.values(dens_mat)
    vals = {k: ev.values(M) for k, M in mats.items()}
    keys = sorted(mats)
    if pairs is None:
        pairs = [(n, m) for n in keys for m in keys]
    n = w.n
    out = {}
    use_mp = qr.dps is not None
    with mp.workdps((qr.dps or 15) + 10):
        if w.unit_normalized:
            unit_scale = unit_value_mp(qr.unit) if use_mp else unit_value_float(qr.unit)
        else:
            unit_scale = 1
        # right factors w_i D(x_i) G(x_i)^T, cached per index
        right = {}
        for k in keys:
            rv = []
            for i, wt in enumerate(qr.weights):
                Dm, Gm = dens[i], vals[k][i]
                rv.append([[wt * sum(Dm[r][s] * Gm[c][s] for s in range(n)) for c in range(n)] for r in range(n)])
            right[k] = rv
        for p, q in pairs:
            acc = [[0] * n for _ in range(n)]
            Fv, Rv = vals[p], right[q]
            for i in range(len(qr.nodes)):
                Fi, Ri = Fv[i], Rv[i]
                for r in range(n):
                    for c in range(n):
                        acc[r][c] += sum(Fi[r][s] * Ri[s][c] for s in range(n))
            if w.unit_normalized:
                acc = [[v / unit_scale for v in row] for row in acc]
            for pm in w.point_masses:
                term = (mats[p](pm.t0) @ pm.matrix @ mats[q](pm.t0).T * pm.zeta).const_entries()
                conv = _to_mp if use_mp else float
                acc = [[acc[r][c] + conv(term[r][c]) for c in range(n)] for r in range(n)]
            out[(p, q)] = np.array([[float(v) for v in row] for row in acc])
    return out


def numeric_inner_product(
    F, G, w: WeightSpec, npoints: int = 200, dps: int | None = None, rule: str = "auto"
) -> np.ndarray:
    """Numeric ``int F dW G^T``; see :func:`numeric_gram`."""
    return numeric_gram({0: F, 1: G}, w, npoints, dps, pairs=[(0, 1)], rule=rule)[(0, 1)]


def absorb_endpoint_factors(w: WeightSpec) -> WeightSpec:
    """Move powers of ``(t - c)`` at finite endpoints from the density into the kernel.

    After this the density has neither a pole nor a common zero at any finite
    endpoint, which is the form the Gauss rules expect.
    """
    dens = w.density
    kernel = w.kernel
    t = Poly.t()
    for c in w.support:
        if c is None:
            continue
        vals = [x.valuation_at(c) for x in dens.entries() if x]
        if not vals:
            continue
        v = min(vals)
        if not v:
            continue
        s = 1 if c == w.support[0] else -1
        # |t - c|^v = (s (t - c))^v on the support
        dens = dens * ((s * (t - c)) ** (-v))
        kernel = kernel * Kernel(Poly(), ((c, v),))
    return WeightSpec(w.support, kernel, dens, w.point_masses, w.unit_normalized)


__all__ = [
    "PoleOnSupport",
    "QuadratureRule",
    "absorb_endpoint_factors",
    "common_denominator",
    "gauss_quadrature",
    "numeric_gram",
    "numeric_inner_product",
    "recurrence_coefficients",
    "screen_poles",
]
