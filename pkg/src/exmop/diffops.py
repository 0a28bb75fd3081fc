"""Right-acting matrix differential operators ``y -> sum_j y^(j) F_j``."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .algebra import RatMat
from .kernels import QuasiRatMat
from .weights import WeightSpec, decay_check


def _as_quasi(y) -> QuasiRatMat:
    if isinstance(y, QuasiRatMat):
        return y
    if isinstance(y, RatMat):
        return QuasiRatMat.rational(y)
    raise TypeError(f"cannot act on {type(y).__name__}")


class DiffOp:
    """Immutable operator with right coefficients ``coeffs[j]`` of ``y^(j)``.

    Trailing zero coefficients are dropped, so ``order`` is the index of the
    top nonzero coefficient (``0`` for multiplication operators).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [c if isinstance(c, RatMat) else RatMat(c) for c in coeffs]
        if not cs:
            raise ValueError("DiffOp needs at least one coefficient")
        n = cs[0].n
        while len(cs) > 1 and cs[-1].is_zero():
            cs.pop()
        if any(c.n != n for c in cs):
            raise ValueError("coefficient dimensions differ")
        self.coeffs = tuple(cs)

    @classmethod
    def multiplication(cls, F: RatMat) -> DiffOp:
        return cls([F])

    @classmethod
    def derivative(cls, n: int = 2) -> DiffOp:
        return cls([RatMat.zero(n), RatMat.identity(n)])

    @classmethod
    def identity(cls, n: int = 2) -> DiffOp:
        return cls([RatMat.identity(n)])

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def n(self) -> int:
        return self.coeffs[0].n

    def coeff(self, j: int) -> RatMat:
        return self.coeffs[j] if j < len(self.coeffs) else RatMat.zero(self.n)

    def is_zero(self) -> bool:
        return self.order == 0 and self.coeffs[0].is_zero()

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = ", ".join(f"F{j}={c!r}" for j, c in enumerate(self.coeffs))
        return f"DiffOp({terms})"

    def __add__(self, other: DiffOp) -> DiffOp:
        m = max(len(self.coeffs), len(other.coeffs))
        return DiffOp([self.coeff(j) + other.coeff(j) for j in range(m)])

    def __sub__(self, other: DiffOp) -> DiffOp:
        return self + other * -1

    def __neg__(self):
        return self * -1

    def __mul__(self, c) -> DiffOp:
        """Scale every coefficient by a scalar (rational or rational function)."""
        return DiffOp([F * c for F in self.coeffs])

    __rmul__ = __mul__

    def right_mul(self, M: RatMat) -> DiffOp:
        """Operator ``y -> E(y) M``."""
        return DiffOp([F @ M for F in self.coeffs])

    def __call__(self, y):
        return apply(self, y)


def apply(D: DiffOp, y):
    """``sum_j y^(j) F_j``; rational input gives a RatMat, otherwise a QuasiRatMat."""
    rational_in = isinstance(y, RatMat)
    q = _as_quasi(y)
    acc = None
    cur = q
    for j, F in enumerate(D.coeffs):
        if j:
            cur = cur.deriv()
        if F.is_zero():
            continue
        term = cur @ F
        acc = term if acc is None else acc + term
    if acc is None:
        acc = QuasiRatMat(q.kernel, RatMat.zero(q.n))
    return acc.body if rational_in else acc


def compose(outer: DiffOp, inner: DiffOp) -> DiffOp:
    """Operator ``y -> outer(inner(y))``.

    With inner coefficients ``G_k`` and outer ``F_j`` the coefficient of
    ``y^(l)`` is ``sum_{k+j-i=l} C(j,i) G_k^(i) F_j``.
    """
    n = outer.n
    G = inner.coeffs
    # derivative tables for each inner coefficient
    gd = [[g] for g in G]
    for tab in gd:
        for _ in range(outer.order):
            tab.append(tab[-1].deriv())
    out = [RatMat.zero(n) for _ in range(outer.order + inner.order + 1)]
    for j, F in enumerate(outer.coeffs):
        if F.is_zero():
            continue
        for k in range(len(G)):
            for i in range(j + 1):
                Gi = gd[k][i]
                if Gi.is_zero():
                    continue
                out[k + j - i] = out[k + j - i] + (Gi @ F) * comb(j, i)
    return DiffOp(out)


def formal_adjoint(E: DiffOp, W) -> DiffOp:
    """Adjoint of ``E`` for the pairing ``int P W Q^T``.

    ``E_dagger(y) = (sum_j (-1)^j (y W E_j^T)^(j)) W^{-1}``, expanded by
    Leibniz; the kernel of ``W`` cancels so coefficients are rational.
    """
    Wq = _as_quasi(W.as_quasi() if isinstance(W, WeightSpec) else W)
    Winv = Wq.inverse()
    n = E.n
    out = [RatMat.zero(n) for _ in range(E.order + 1)]
    for j, Ej in enumerate(E.coeffs):
        if Ej.is_zero():
            continue
        derivs = (Wq @ Ej.T).derivs(j)
        sign = -1 if j % 2 else 1
        for i in range(j + 1):
            term = (derivs[j - i] @ Winv).as_rational()
            out[i] = out[i] + term * (sign * comb(j, i))
    return DiffOp(out)


@dataclass(frozen=True)
class EigenResult:
    ok: bool
    gamma: RatMat | None = None
    residual: RatMat | None = None

    def __bool__(self):
        return self.ok


def eigencheck(D: DiffOp, P) -> EigenResult:
    """Return ``Gamma`` when ``D(P) = Gamma P`` with ``Gamma`` constant."""
    q = _as_quasi(P)
    if not q.body.det():
        raise ValueError("eigencheck needs an invertible P")
    R = (apply(D, q) @ q.inverse()).as_rational()
    if R.is_const():
        return EigenResult(True, R)
    return EigenResult(False, None, R)


@dataclass(frozen=True)
class SymmetryResult:
    symmetric: bool
    failed: str | None = None
    residual: object = None

    def __bool__(self):
        return self.symmetric


def _endpoints(support):
    lo, hi = support
    return ["-inf" if lo is None else lo, "+inf" if hi is None else hi]


def symmetry_check(D: DiffOp, w: WeightSpec) -> SymmetryResult:
    """Exact symmetry equations for a second-order operator and a weight.

    Checks ``F2 W = W F2^T``, ``2 (F2 W)' = W F1^T + F1 W`` and
    ``(F2 W)'' - (F1 W)' + F0 W = W F0^T``, decay of the two boundary
    expressions at both ends of the support, and the point-mass
    compatibility ``F2(t0) M = 0``, ``F1(t0) M = 0``, ``F0(t0) M = M F0(t0)^T``.
    """
    if D.order > 2:
        raise ValueError("symmetry_check handles order <= 2")
    W = w.as_quasi()
    F0, F1, F2 = D.coeff(0), D.coeff(1), D.coeff(2)
    F2W = F2 @ W
    F1W = F1 @ W
    r1 = F2W - W @ F2.T
    if not r1.is_zero():
        return SymmetryResult(False, "F2 W = W F2^T", r1)
    r2 = F2W.deriv() * 2 - (W @ F1.T + F1W)
    if not r2.is_zero():
        return SymmetryResult(False, "2 (F2 W)' = W F1^T + F1 W", r2)
    r3 = F2W.deriv().deriv() - F1W.deriv() + F0 @ W - W @ F0.T
    if not r3.is_zero():
        return SymmetryResult(False, "(F2 W)'' - (F1 W)' + F0 W = W F0^T", r3)
    boundary = F2W.deriv() - F1W
    for e in _endpoints(w.support):
        if not decay_check(F2W, e):
            return SymmetryResult(False, f"boundary decay of F2 W at {e}", F2W)
        if not decay_check(boundary, e):
            return SymmetryResult(False, f"boundary decay of (F2 W)' - F1 W at {e}", boundary)
    for pm in w.point_masses:
        t0, M = pm.t0, pm.matrix
        if not (F2(t0) @ M).is_zero():
            return SymmetryResult(False, f"F2({t0}) M = 0", F2(t0) @ M)
        if not (F1(t0) @ M).is_zero():
            return SymmetryResult(False, f"F1({t0}) M = 0", F1(t0) @ M)
        if F0(t0) @ M != M @ F0(t0).T:
            return SymmetryResult(False, f"F0({t0}) M = M F0({t0})^T", F0(t0) @ M - M @ F0(t0).T)
    return SymmetryResult(True)


def diffop_from_polys(*coeffs) -> DiffOp:
    """Convenience: ``diffop_from_polys(F0, F1, F2)`` with nested entry lists."""
    return DiffOp([RatMat(c) for c in coeffs])


__all__ = [
    "DiffOp",
    "EigenResult",
    "SymmetryResult",
    "apply",
    "compose",
    "diffop_from_polys",
    "eigencheck",
    "formal_adjoint",
    "symmetry_check",
]
