"""Quasi-Darboux transformations of second-order matrix operators.

Given ``D(y) = y'' F2 + y' F1 + y F0`` and a first-order operator
``A(y) = y A0 + y' A1`` with ``A1`` invertible, there is a unique first-order
``B`` and matrix function ``Psi`` with ``D(y) = B(A(y)) - y Psi``.  Swapping
the factors gives the transformed operator

    ``Dhat(y) = A(B(y)) - y A1^{-1} Psi A1``

which maps ``A(P)`` to ``Gamma A(P)`` whenever ``D(P) = Gamma P``, provided
``A(Psi) = A0 A1^{-1} Psi A1``.  Building ``A`` from an eigenfunction seed
guarantees that identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import Poly, Q, RatMat, count_real_roots
from .diffops import DiffOp, apply, compose, eigencheck, formal_adjoint, symmetry_check
from .kernels import QuasiRatMat
from .weights import ExactMatrix, WeightSpec, exact_inner_product


class DarbouxError(ValueError):
    pass


def _as_quasi(y) -> QuasiRatMat:
    return y if isinstance(y, QuasiRatMat) else QuasiRatMat.rational(y)


def log_derivative_ratio(P) -> RatMat:
    """``P^{-1} P'`` as a rational matrix (the kernel of P cancels)."""
    q = _as_quasi(P)
    return (q.inverse() @ q.deriv()).as_rational()


def build_annihilator(P, U: RatMat) -> DiffOp:
    """``A(y) = -y U + y' (P')^{-1} P U``; by construction ``A(P) = 0``."""
    q = _as_quasi(P)
    dq = q.deriv()
    if not dq.body.det():
        raise DarbouxError("seed derivative is singular")
    if not U.det():
        raise DarbouxError("U is singular")
    A1 = (dq.inverse() @ q).as_rational() @ U
    return DiffOp([-U, A1])


@dataclass(frozen=True)
class Factorization:
    A: DiffOp
    B: DiffOp
    Psi: RatMat

    def recompose(self) -> DiffOp:
        """``B o A - Psi``, which equals the factorized operator."""
        return compose(self.B, self.A) - DiffOp([self.Psi])


def factorize(D: DiffOp, A: DiffOp, seed=None, gamma: RatMat | None = None) -> Factorization:
    """Factor ``D = B o A - Psi`` for a first-order ``A``.

    When the seed used to build ``A`` and its eigenvalue are given, also
    checks ``Psi = -P^{-1} Gamma P``.
    """
    if D.order > 2 or A.order != 1:
        raise DarbouxError("factorize expects order(D) <= 2 and order(A) = 1")
    F0, F1, F2 = D.coeff(0), D.coeff(1), D.coeff(2)
    A0, A1 = A.coeff(0), A.coeff(1)
    if not A1.det():
        raise DarbouxError("A1 is singular")
    A1inv = A1.inverse()
    B1 = A1inv @ F2
    B0 = A1inv @ (F1 - A0 @ B1 - A1.deriv() @ B1)
    Psi = A0 @ B0 + A0.deriv() @ B1 - F0
    fact = Factorization(A, DiffOp([B0, B1]), Psi)
    if fact.recompose() != D:
        raise DarbouxError("factorization identity failed")
    if seed is not None and gamma is not None:
        q = _as_quasi(seed)
        expected = -(q.inverse() @ (gamma @ q)).as_rational()
        if expected != Psi:
            raise DarbouxError("Psi differs from -P^{-1} Gamma P")
    return fact


def transform(D: DiffOp, fact: Factorization) -> DiffOp:
    """``Dhat = A o B - A1^{-1} Psi A1`` (composition order: B first)."""
    A1 = fact.A.coeff(1)
    shift = A1.inverse() @ fact.Psi @ A1
    return compose(fact.A, fact.B) - DiffOp([shift])


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    residual: object = None

    def __bool__(self):
        return self.ok


def eq3f_check(A: DiffOp, Psi: RatMat) -> CheckResult:
    """``A(Psi) = A0 A1^{-1} Psi A1``."""
    A0, A1 = A.coeff(0), A.coeff(1)
    r = apply(A, Psi) - A0 @ A1.inverse() @ Psi @ A1
    return CheckResult(r.is_zero(), None if r.is_zero() else r)


def first_order_factor(P) -> DiffOp:
    """``y -> y' - y P^{-1} P'``, which annihilates P."""
    L = log_derivative_ratio(P)
    return DiffOp([-L, RatMat.identity(L.n)])


def kernel_factorization_check(D: DiffOp, P, w: WeightSpec, require_kernel: bool = True) -> CheckResult:
    """Self-adjoint factorization test for a seed in the kernel of ``D``.

    Checks ``(F1/2 + P^{-1}P' F2) W = W (F1/2 + P^{-1}P' F2)^T`` and, when it
    holds, that ``D = -E^dagger o F2 o E`` with ``E = d/dt - P^{-1}P'``.
    ``require_kernel=False`` skips the kernel precondition and just reports
    the residual of the first identity.
    """
    if require_kernel:
        ev = eigencheck(D, P)
        if not ev.ok or not ev.gamma.is_zero():
            raise DarbouxError("seed is not in the kernel of D")
    F1, F2 = D.coeff(1), D.coeff(2)
    L = log_derivative_ratio(P)
    X = F1 * Q(1, 2) + L @ F2
    W = w.as_quasi()
    r = X @ W - W @ X.T
    if not r.is_zero():
        return CheckResult(False, r)
    E = first_order_factor(P)
    Eadj = formal_adjoint(E, W)
    rebuilt = -compose(Eadj, compose(DiffOp([F2]), E))
    if rebuilt != D:
        return CheckResult(False, rebuilt - D)
    return CheckResult(True)


def exceptional_weight(
    P, U: RatMat, F2: RatMat, w: WeightSpec, closed: bool = True, check_support: bool = True
) -> WeightSpec:
    """``(U^{-1} P^{-1} P') F2 W (U^{-1} P^{-1} P')^T`` with the kernel of W.

    ``A1 = (P')^{-1} P U`` may be rational (second and later steps of a chain,
    where its poles cancel those of ``w``).  The resulting density must have no
    pole on the support (closed at finite ends unless ``closed`` is False).
    ``check_support=False`` skips that test, for intermediate steps whose final
    weight is regular.
    """
    q = _as_quasi(P)
    A1 = (q.deriv().inverse() @ q).as_rational() @ U
    if A1.det().is_zero():
        raise DarbouxError("(P')^{-1} P U is singular")
    T = A1.inverse()
    dens = T @ F2 @ w.density @ T.T
    if check_support:
        lo, hi = w.support
        for i in range(dens.n):
            for j in range(dens.n):
                den = dens[i, j].den
                if den.degree > 0 and count_real_roots(den, lo, hi, closed=closed):
                    raise DarbouxError("exceptional weight has a pole on the support")
    return WeightSpec(w.support, w.kernel, dens, (), w.unit_normalized)


def reduced_inner_product(Pn: RatMat, Pm: RatMat, gamma_m: RatMat, w: WeightSpec) -> ExactMatrix:
    """``<A(Pn), A(Pm)>`` for the exceptional weight, via integration by parts.

    Equals ``-<Pn, Pm>_W Gamma_m^T`` where ``Gamma_m`` is the eigenvalue of the
    factorized operator on ``Pm``.
    """
    return (-exact_inner_product(Pn, Pm, w)).rmul(gamma_m.T)


def reduced_inner_product_chain(Pn: RatMat, Pm: RatMat, gammas, w: WeightSpec) -> ExactMatrix:
    """Iterated reduction through a chain of transformations.

    ``gammas`` lists, step by step, the eigenvalue of the operator whose
    ``F2`` built that step's weight on the image of ``Pm`` at that step.
    """
    v = exact_inner_product(Pn, Pm, w)
    for g in gammas:
        v = (-v).rmul(g.T)
    return v


def delta_extension(Dexc: DiffOp, w: WeightSpec, t0, M: RatMat, zeta) -> WeightSpec:
    """Add ``zeta M delta_{t0}`` after checking the compatibility conditions."""
    t0, zeta = Q(t0), Q(zeta)
    if zeta < 0:
        raise DarbouxError("point mass must be nonnegative")
    if not M.is_const() or not M.is_symmetric():
        raise DarbouxError("point-mass matrix must be constant and symmetric")
    vals = M.const_entries()
    n = len(vals)
    for i in range(n):
        if vals[i][i] < 0:
            raise DarbouxError("point-mass matrix is not positive semidefinite")
    if n == 2 and vals[0][0] * vals[1][1] - vals[0][1] ** 2 < 0:
        raise DarbouxError("point-mass matrix is not positive semidefinite")
    F0, F1, F2 = Dexc.coeff(0), Dexc.coeff(1), Dexc.coeff(2)
    if not (F2(t0) @ M).is_zero():
        raise DarbouxError(f"F2({t0}) M != 0")
    if not (F1(t0) @ M).is_zero():
        raise DarbouxError(f"F1({t0}) M != 0")
    if F0(t0) @ M != M @ F0(t0).T:
        raise DarbouxError(f"F0({t0}) M != M F0({t0})^T")
    if not zeta:
        return w
    out = w.with_point_mass(t0, zeta, M)
    res = symmetry_check(Dexc, out)
    if not res:
        raise DarbouxError(f"pair symmetry lost: {res.failed}")
    return out


def gram_schmidt(raw: dict, ip) -> dict:
    """Block Gram-Schmidt with left coefficients, ascending in n.

    ``ip(P, Q)`` returns an :class:`ExactMatrix` (or a constant RatMat).
    Leading coefficients are preserved.
    """
    out: dict = {}
    norms: dict = {}

    def to_mat(v):
        if isinstance(v, ExactMatrix):
            return v.as_ratmat(), v.unit
        return v, "1"

    for n in sorted(raw):
        P = raw[n]
        acc = P
        for k in sorted(out):
            c, unit = to_mat(ip(P, out[k]))
            if c.is_zero():
                continue
            nk, unit_k = norms[k]
            if unit != unit_k:
                raise DarbouxError("inner products in different units")
            acc = acc - c @ nk.inverse() @ out[k]
        nrm, unit = to_mat(ip(acc, acc))
        if not nrm.det():
            raise DarbouxError(f"singular Gram block at n={n}")
        out[n] = acc
        norms[n] = (nrm, unit)
    return out


def expand_in_basis(P: RatMat, basis: dict) -> dict:
    """Left coefficients ``C_k`` with ``P = sum C_k basis[k]``.

    Eliminates leading coefficients from the top degree down; every basis
    element of a given degree must have nonsingular leading coefficient and
    at most one element per degree is allowed.  Raises when ``P`` is not in
    the left span.
    """
    by_deg = {}
    for k, B in basis.items():
        if B.is_zero():
            continue
        if B.degree in by_deg:
            raise ValueError(f"two basis elements of degree {B.degree}")
        by_deg[B.degree] = k
    out = {}
    r = P
    while not r.is_zero():
        d = r.degree
        k = by_deg.get(d)
        if k is None:
            raise DarbouxError(f"no basis element of degree {d}")
        B = basis[k]
        C = r.coeff(d) @ B.lc.inverse()
        out[k] = C
        r = r - C @ B
    return out


def basis_inner_product(gram: dict, basis: dict, point_masses=()):
    """Exact inner product on the left span of ``basis``.

    ``gram[(k, l)]`` holds ``<basis[k], basis[l]>`` (missing pairs are zero);
    point masses ``(t0, zeta, M)`` are added directly from the polynomials.
    """

    def ip(P: RatMat, Qm: RatMat) -> ExactMatrix:
        cp, cq = expand_in_basis(P, basis), expand_in_basis(Qm, basis)
        acc = None
        for k, C in cp.items():
            for l, Dm in cq.items():
                g = gram.get((k, l))
                if g is None or g.is_zero():
                    continue
                term = g.lmul(C).rmul(Dm.T)
                acc = term if acc is None else acc + term
        if acc is None:
            acc = ExactMatrix.zero(P.n)
        for t0, zeta, M in point_masses:
            acc = acc + ExactMatrix.from_ratmat(P(t0) @ M @ Qm(t0).T * zeta, "1")
        return acc

    return ip


@dataclass
class TransformResult:
    Dhat: DiffOp
    polys: dict
    gaps: frozenset
    eigenvalues: dict = field(default_factory=dict)

    def degrees_ok(self) -> bool:
        for n, P in self.polys.items():
            if n in self.gaps:
                continue
            if not P.is_poly() or P.degree != n or not P.lc.det():
                return False
        return True


def common_right_factor_degree(polys) -> int:
    """Degree of the gcd of all entries of the stacked matrices (0 if none)."""
    from .algebra import poly_gcd

    g = Poly()
    for P in polys:
        for x in P.entries():
            g = poly_gcd(g, x.as_poly())
    return max(g.degree, 0)


__all__ = [
    "CheckResult",
    "DarbouxError",
    "Factorization",
    "TransformResult",
    "build_annihilator",
    "common_right_factor_degree",
    "delta_extension",
    "basis_inner_product",
    "eq3f_check",
    "expand_in_basis",
    "exceptional_weight",
    "factorize",
    "first_order_factor",
    "gram_schmidt",
    "kernel_factorization_check",
    "log_derivative_ratio",
    "reduced_inner_product",
    "reduced_inner_product_chain",
    "transform",
]
