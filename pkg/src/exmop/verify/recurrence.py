"""Recurrence relations ``q P_n = sum_{|j| <= r} A_{n,j} P_{n+j}`` for exceptional families."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra import Poly, RatMat


@dataclass
class RecurrenceFit:
    q: Poly
    band: int
    coefficients: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return all(r is None for r in self.residuals.values())

    def failed(self) -> list:
        return sorted(n for n, r in self.residuals.items() if r is not None)

    def reconstruct(self, polys: dict, n: int) -> RatMat:
        """``sum_j A_{n,j} P_{n+j}`` from the stored coefficients."""
        acc = RatMat.zero(polys[n].n)
        for (m, j), A in self.coefficients.items():
            if m == n:
                acc = acc + A @ polys[n + j]
        return acc


def _window(polys: dict, n: int, band: int) -> dict:
    out = {}
    for k in range(n - band, n + band + 1):
        if k in polys and not polys[k].is_zero():
            out[k] = polys[k]
    return out


def _eliminate(target: RatMat, basis: dict):
    """Leading-coefficient elimination of ``target`` against ``basis``.

    Returns ``(coefficients, residual)``; the residual is ``None`` when the
    expansion is exact and otherwise the polynomial left over when the top
    degree has no basis element.
    """
    by_deg = {B.degree: k for k, B in basis.items()}
    coeffs = {}
    r = target
    while not r.is_zero():
        k = by_deg.get(r.degree)
        if k is None:
            return coeffs, r
        B = basis[k]
        C = r.coeff(r.degree) @ B.lc.inverse()
        coeffs[k] = coeffs.get(k, RatMat.zero(r.n)) + C
        r = r - C @ B
    return coeffs, None


def fit_recurrence(polys: dict, qprime: Poly, band: int, indices=None) -> RecurrenceFit:
    """Fit ``q P_n = sum_{j=-band}^{band} A_{n,j} P_{n+j}`` with ``q' = qprime``, ``q(0) = 0``.

    ``polys`` maps degree indices to polynomials (gap indices absent or zero);
    each basis element must have degree equal to its index and a nonsingular
    leading coefficient.  ``indices`` selects the ``n`` to fit (default: every
    ``n`` whose window lies inside the available indices).
    """
    if band < 0:
        raise ValueError("band must be nonnegative")
    q = qprime.antideriv(0)
    for k, P in polys.items():
        if P.is_zero():
            continue
        if P.degree != k or not P.lc.det():
            raise ValueError(f"basis element {k} has degree {P.degree} or singular leading coefficient")
    top = max(polys)
    if indices is None:
        indices = [n for n in sorted(polys) if not polys[n].is_zero() and n + band <= top]
    fit = RecurrenceFit(q, band)
    for n in indices:
        if n + band > top:
            raise ValueError(f"need polynomials up to index {n + band}")
        coeffs, residual = _eliminate(polys[n] * q, _window(polys, n, band))
        for k, C in coeffs.items():
            fit.coefficients[(n, k - n)] = C
        fit.residuals[n] = residual
    return fit


__all__ = ["RecurrenceFit", "fit_recurrence"]
