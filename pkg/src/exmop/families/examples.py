"""End-to-end constructions of exceptional matrix polynomial families.

Each ``example*`` function runs one construction (family -> seed -> annihilator
-> factorization -> transformed operator -> weight) and records every exact and
numeric check in a :class:`Report`.  The returned :class:`ExampleResult` keeps
the intermediate objects so callers can inspect or re-verify them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import numpy as np

from ..algebra import Poly, Q, RatMat
from ..darboux import (
    DarbouxError,
    TransformResult,
    basis_inner_product,
    build_annihilator,
    delta_extension,
    eq3f_check,
    exceptional_weight,
    factorize,
    gram_schmidt,
    kernel_factorization_check,
    reduced_inner_product,
    reduced_inner_product_chain,
    transform,
)
from ..diffops import DiffOp, apply, compose, eigencheck, symmetry_check
from ..kernels import Kernel, QuasiRatMat
from ..verify.conjugation import conjugation_check
from ..verify.quadrature import absorb_endpoint_factors, numeric_gram
from ..verify.report import Report, exact, numeric
from ..weights import WeightSpec, unit_value_float
from .classical import gegenbauer_family, hermite_family, laguerre_family

t = Poly.t()
NUMERIC_TOL = 1e-9


@dataclass
class ExampleResult:
    id: int
    params: dict
    transform: TransformResult
    weight: WeightSpec | None
    report: Report
    data: dict = field(default_factory=dict)


def rational_sqrt(q) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    q = Q(q)
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def _offdiag_max(gram: dict) -> float:
    vals = [np.abs(v).max() for (n, m), v in gram.items() if n != m]
    return float(max(vals)) if vals else 0.0


def _eigen_sweep(Dhat: DiffOp, polys: dict, expected) -> tuple:
    """All ``polys`` are eigenfunctions of ``Dhat`` with ``expected(n)`` (if given)."""
    gammas = {}
    for n, P in sorted(polys.items()):
        ev = eigencheck(Dhat, P)
        if not ev.ok:
            return False, f"n={n}: not an eigenfunction", gammas
        gammas[n] = ev.gamma
        if expected is not None:
            want = expected(n)
            if ev.gamma != want:
                return False, f"n={n}: eigenvalue {ev.gamma} != {want}", gammas
    return True, None, gammas


def _exact_orthogonality(norms: dict) -> tuple:
    bad = [k for k, v in norms.items() if k[0] != k[1] and not v.is_zero()]
    return not bad, (f"nonzero pairs {bad[:5]}" if bad else None)


# ---------------------------------------------------------------------------
# Example 1: Hermite type, polynomial seed P_1 at xi = 1 - a^2


def ex1_closed_form_weight(a) -> RatMat:
    a = Q(a)
    a2 = a * a
    p = (4 - 2 * a2) * t * t - a2
    off = a * (p / (a2 - 2) - 2) * t
    return (
        RatMat(
            [
                [a2 / (4 * (a2 - 2)) * p * p + p / (a2 - 2) - a2, off],
                [off, 2 * (a2 * (a2 - 2) - p) / (a2 - 2) ** 2],
            ]
        )
        / (p * p)
    )


def ex1_closed_form_operator(a) -> DiffOp:
    """Closed-form exceptional operator for u1 = 1 (all other u's zero)."""
    a = Q(a)
    a2 = a * a
    p = 2 * (2 - a2) * t * t - a2
    F1 = RatMat([[-2 * t * (p + 4), -4 * a * (a2 - 2) * (t * t - Q(1, 2))], [8 * a / (a2 - 2), -2 * t * (p - 4 * a2 + 4)]]) / p
    return DiffOp([RatMat.diag(-2, 0), F1, RatMat.identity(2)])


def ex1_norm_factor(n: int, a) -> RatMat:
    a = Q(a)
    return RatMat.diag(1, -2 / (a * a - 2)) * Q(n - 1, 2) / (a * a - 2)


def ex1_nonpolynomial_seed(a):
    """Seed, U and annihilator of the alternative route from W_{a,1}."""
    a = Q(a)
    a2 = a * a
    W1 = hermite_family(a, 1).weight
    seed = RatMat([[t, a / (a2 - 2)], [-a / 2, t]]) @ W1.as_quasi().inverse()
    U = RatMat(
        [
            [4 * (2 * a2 * t * t - a2 - 4 * t * t - 2) * (a2 - 1) / (a2 - 2), -32 * a * t * (a2 - 1) * (a2 - 2)],
            [8 * a * t, 8 * (a2 - 2) * (2 * a2 * t * t + a2 - 4 * t * t - 2)],
        ]
    )
    return seed, U


def ex1_one_step_operator(a) -> tuple:
    """The operator killing the W_{a,1} seed, built and in closed form."""
    a = Q(a)
    a2 = a * a
    built = hermite_family(a, 1).operator({"D1": 2 * (a2 - 1), "D2": 4, "I": -4 * (a2 - 1)})
    closed = DiffOp(
        [
            RatMat.diag(-8 * (a2 - 1), -4 * (a2 - 2)),
            RatMat([[-4 * (a2 - 1) * t, 4 * a**3 - 2 * a], [-2 * a, -(2 * a2 - 4) * t]]),
            RatMat([[a2 - 2, a**3 * t], [0, 2 * a2 - 2]]),
        ]
    )
    return built, closed


def ex2_one_step_operator(b) -> tuple:
    b = Q(b)
    b2 = b * b
    c = (3 * b2 - 2) / (b2 - 1)
    built = hermite_family(b, 1).operator({"D1": c, "D2": 4 / (b2 - 1), "I": -4 * c})
    closed = DiffOp(
        [
            RatMat.diag(-6 * c, -12),
            RatMat([[-2 * c * t, 2 * b * (3 * b2 - 1) / (b2 - 1)], [-2 * b / (b2 - 1), -4 * t]]),
            RatMat([[2, b**3 * t / (b2 - 1)], [0, c]]),
        ]
    )
    return built, closed


def _one_step_checks(rep: Report, built: DiffOp, closed: DiffOp, seed, w: WeightSpec) -> None:
    rep.add(exact("one-step-operator-closed-form", built == closed))
    ev = eigencheck(built, seed)
    rep.add(exact("one-step-seed-kernel", ev.ok and ev.gamma.is_zero(), ev.gamma))
    rep.add(exact("one-step-lus", kernel_factorization_check(built, seed, w).ok))


def example1(a=2, max_n: int = 10, numeric_checks: bool = True, npoints: int = 200, dps: int | None = 30) -> ExampleResult:
    a = Q(a)
    a2 = a * a
    if a2 <= 2:
        raise ValueError("example 1 needs a^2 > 2")
    xi = 1 - a2
    rep = Report(1, {"a": a, "max_n": max_n})
    fam = hermite_family(a, xi)
    P1 = fam.poly(1)
    U = RatMat.identity(2)
    A = build_annihilator(P1, U)
    rep.add(exact("annihilation", apply(A, P1).is_zero()))
    rep.add(exact("seed-determinant", P1.det() == 2 * (2 - a2) * t * t - a2, P1.det()))

    indices = [0] + list(range(2, max_n + 1))
    polys = {n: apply(A, fam.poly(n)) for n in indices}
    rep.add(exact("gap-at-1", apply(A, fam.poly(1)).is_zero()))
    lc_ok = all(polys[n].degree == n and polys[n].lc == RatMat.diag(2, (n - 2) * a2 + 2) * ((n - 1) * Q(2) ** (n - 1)) for n in polys)
    rep.add(exact("leading-coefficients", lc_ok))

    transformed = {}
    with rep.timed("operators"):
        for name, op in fam.operators.items():
            g1 = eigencheck(op, P1).gamma
            fact = factorize(op, A, seed=P1, gamma=g1)
            rep.add(exact(f"eq3f[{name}]", eq3f_check(A, fact.Psi).ok))
            Dh = transform(op, fact)
            transformed[name] = Dh
            ok, why, _ = _eigen_sweep(Dh, polys, lambda n, name=name: fam.eigenvalue(n, {name: 1}))
            rep.add(exact(f"eigen[{name}]", ok, why))

    D0 = fam.operator({"D1": 1, "D2": 4 / (a2 - 2), "I": 4})
    rep.add(exact("D0-kills-seed", eigencheck(D0, P1).gamma.is_zero()))
    F2 = D0.coeff(2)
    rep.add(exact("D0-F2-closed-form", F2 == RatMat([[-2 / (a2 - 2), a2 * a * t / (a2 - 2)], [0, 1]])))
    F2W = F2 @ fam.weight.density
    rep.add(exact("F2W-closed-form", F2W == RatMat([[(a2 * (a2 - 2) * t * t + 2 * (a2 - 1)) / (a2 - 2), a * t], [a * t, 1]])))
    sym = symmetry_check(D0, fam.weight)
    rep.add(exact("D0-symmetric", sym.symmetric, sym.failed))
    rep.add(exact("lus", kernel_factorization_check(D0, P1, fam.weight).ok))

    scale = 4 * (a2 - 2)
    Wraw = exceptional_weight(P1, U, F2, fam.weight)
    W = Wraw.scaled(1 / scale)
    rep.add(exact("weight-closed-form", W.density == ex1_closed_form_weight(a)))

    gam = {n: eigencheck(D0, fam.poly(n)).gamma for n in indices}
    norms = {}
    for n in indices:
        for m in indices:
            norms[(n, m)] = reduced_inner_product(fam.poly(n), fam.poly(m), gam[m], fam.weight).scale(1 / scale)
    ok, why = _exact_orthogonality(norms)
    rep.add(exact("orthogonality-exact", ok, why))
    bad = [n for n in indices if norms[(n, n)] != fam.norm(n).lmul(ex1_norm_factor(n, a))]
    rep.add(exact("norms-exact", not bad, bad))

    # alternative route: non-polynomial seed built from W_{a,1}
    seed, U_alt = ex1_nonpolynomial_seed(a)
    A_alt = build_annihilator(seed, U_alt)
    fam1 = hermite_family(a, 1)
    _one_step_checks(rep, *ex1_one_step_operator(a), seed, fam1.weight)
    alt = {n + 2: apply(A_alt, fam1.poly(n)) for n in range(0, max_n - 1)}
    conj = conjugation_check(polys, alt, indices=[n for n in indices if n >= 2])
    rep.add(exact("conjugation-nonpolynomial-seed", conj.ok, conj.failure))

    rep.add(exact("Dhat-closed-form", transformed["D1"] == ex1_closed_form_operator(a)))
    gaps = frozenset({1})
    eigs = {n: eigencheck(transformed["D1"], P).gamma for n, P in polys.items()}
    res = TransformResult(transformed["D1"], polys, gaps, eigs)
    rep.add(exact("degrees", res.degrees_ok()))
    sym = symmetry_check(transformed["D1"], W)
    rep.add(exact("Dhat-symmetric", sym.symmetric, sym.failed))

    if numeric_checks:
        with rep.timed("numeric-orthogonality"):
            g = numeric_gram(polys, W, npoints, dps)
        rep.add(numeric("orthogonality-numeric", _offdiag_max(g), NUMERIC_TOL))
        rel = 0.0
        for n in indices:
            want = np.array([[float(x) for x in row] for row in norms[(n, n)].entries]) * unit_value_float(norms[(n, n)].unit)
            rel = max(rel, float(np.abs(g[(n, n)] - want).max() / np.abs(want).max()))
        rep.add(numeric("norms-numeric", rel, NUMERIC_TOL))

    data = {
        "family": fam,
        "A": A,
        "D0": D0,
        "operators": transformed,
        "norms": norms,
        "weight_raw": Wraw,
        "scale": scale,
        "conjugation": conj,
        "alt_polys": alt,
    }
    return ExampleResult(1, {"a": a}, res, W, rep, data)


# ---------------------------------------------------------------------------
# Example 2: Hermite type at xi = 1, two polynomial seeds


def ex2_closed_form_weight(a) -> RatMat:
    a = Q(a)
    a2 = a * a
    p = 4 * (a2 + 2) * t**4 + 8 * t * t + 3 * a2 + 2
    s = 3 * a2 + 2
    e11 = (a2 + 2) * ((a2 * t * t + (3 * a2 + 1)) * p + a2 * s * (2 * t * t - 3)) / (s * s)
    e12 = a * t * (p + 8 * ((a2 + 2) * t * t + 1)) / s
    e22 = (p + 2 * a2 * (6 * (a2 + 2) * t * t / s - 1)) / (a2 + 2)
    return RatMat([[e11, e12], [e12, e22]]) / (p * p)


def ex2_norm_factor(n: int, a) -> RatMat:
    a = Q(a)
    s = 3 * a * a + 2
    return RatMat.diag(Q(1, 4) / (s * s), Q(1, 4) / (s * (a * a + 2))) * ((n - 1) * (n - 2))


def ex2_nonpolynomial_seed(b):
    """Seed and U of the one-step route at parameter ``b``."""
    b = Q(b)
    b2 = b * b
    W = hermite_family(b, 1).weight
    seed = RatMat([[(2 * b2 * t * t - 2 * t * t - 1) / (2 * (b2 - 1)), b * t / (b2 - 1)], [-b * t, t * t + Q(1, 2)]])
    seed = seed @ W.as_quasi().inverse()
    U = RatMat(
        [
            [t * (2 * b2 * t * t - 2 * t * t - 3) / (2 * (b2 - 1)), -3 * b * (3 * b2 - 2) * (2 * t * t + 1) / (8 * (b2 - 1))],
            [3 * b * (2 * t * t + 1) / (2 * (3 * b2 - 2)), t * (2 * t * t + 3) / 2],
        ]
    )
    return seed, U


def example2(a=4, max_n: int = 8, numeric_checks: bool = True, npoints: int = 40, dps: int | None = 30) -> ExampleResult:
    a = Q(a)
    a2 = a * a
    if not a:
        raise ValueError("example 2 needs a != 0")
    rep = Report(2, {"a": a, "max_n": max_n})
    fam = hermite_family(a, 1)
    P1 = fam.poly(1)
    A1 = build_annihilator(P1, P1.deriv())
    rep.add(exact("A1-coefficients", A1.coeff(0) == -P1.deriv() and A1.coeff(1) == P1.deriv().inverse() @ P1 @ P1.deriv()))
    first = {n: apply(A1, fam.poly(n)) for n in range(0, max_n + 1)}
    lc1 = all(
        first[n].degree == n and first[n].lc == RatMat.diag(4, (a2 + 2) * (n * a2 + 2)) * ((n - 1) * Q(2) ** (n - 1))
        for n in first
        if n != 1
    )
    rep.add(exact("leading-coefficients-step1", lc1 and first[1].is_zero()))
    P12 = first[2]
    rep.add(exact("det-P12-closed-form", P12.det() == 8 * (a2 + 1) * (4 * (a2 + 2) * t**4 + 8 * t * t + 3 * a2 + 2), P12.det()))
    A20 = -RatMat.diag(Q(1, 2), 1 / (a2 + 2))
    A2 = build_annihilator(P12, -A20)
    dP = P1.det()
    A21_closed_form = (
        RatMat(
            [
                [t * (2 * t * t + 1) * (a2 + 2) / 4, -a * (t * t - Q(1, 2)) * (a2 + 2) / 4],
                [-a * (2 * a2 * t * t - 3 * a2 + 4 * t * t - 2) / (2 * (a2 + 2) ** 2), t * (2 * a2 * t * t - a2 + 4 * t * t + 2) / (2 * a2 + 4)],
            ]
        )
        / dP
    )
    rep.add(exact("A2-coefficients", A2.coeff(0) == A20 and A2.coeff(1) == A21_closed_form))

    indices = [0] + list(range(3, max_n + 1))
    polys = {n: apply(A2, first[n]) for n in indices}
    rep.add(exact("gaps-at-1-2", apply(A2, first[1]).is_zero() and apply(A2, first[2]).is_zero()))
    lc2 = all(
        polys[n].degree == n and polys[n].lc == fam.poly(n).lc * ((n - 1) * (Q(n, 2) - 1))
        for n in indices
    )
    rep.add(exact("leading-coefficients", lc2))

    transformed = {}
    with rep.timed("operators"):
        for name, op in fam.operators.items():
            f1 = factorize(op, A1, seed=P1, gamma=eigencheck(op, P1).gamma)
            D1 = transform(op, f1)
            f2 = factorize(D1, A2, seed=P12, gamma=eigencheck(D1, P12).gamma)
            ok3f = eq3f_check(A1, f1.Psi).ok and eq3f_check(A2, f2.Psi).ok
            rep.add(exact(f"eq3f[{name}]", ok3f))
            D2 = transform(D1, f2)
            transformed[name] = D2
            ok, why, _ = _eigen_sweep(D2, polys, lambda n, name=name: fam.eigenvalue(n, {name: 1}))
            rep.add(exact(f"eigen[{name}]", ok, why))

    # weight through the two kernel-killing operators
    Dt = fam.operator({"D1": 1, "D2": -4 / (2 + a2), "I": 4})
    Dh = fam.operator({"D1": 1, "D2": -2 / (1 + a2), "I": 6})
    Dh1 = transform(Dh, factorize(Dh, A1))
    rep.add(exact("step1-kills-seed", eigencheck(Dt, P1).gamma.is_zero()))
    rep.add(exact("step2-kills-seed", eigencheck(Dh1, P12).gamma.is_zero()))
    rep.add(exact("F2-closed-form", Dt.coeff(2) == RatMat([[1 + a2 / (a2 + 2), -a2 * a * t / (a2 + 2)], [0, 1]])))
    W1 = exceptional_weight(P1, P1.deriv(), Dt.coeff(2), fam.weight, check_support=False)
    W2 = exceptional_weight(P12, -A20, Dh1.coeff(2), W1)
    scale = 16 * (3 * a2 + 2) ** 2
    W = W2.scaled(1 / scale)
    rep.add(exact("weight-closed-form", W.density == ex2_closed_form_weight(a)))

    g1 = {n: eigencheck(Dt, fam.poly(n)).gamma for n in indices}
    g2 = {n: eigencheck(Dh1, first[n]).gamma for n in indices}
    norms = {}
    for n in indices:
        for m in indices:
            norms[(n, m)] = reduced_inner_product_chain(fam.poly(n), fam.poly(m), [g1[m], g2[m]], fam.weight).scale(1 / scale)
    ok, why = _exact_orthogonality(norms)
    rep.add(exact("orthogonality-exact", ok, why))
    bad = [n for n in indices if n >= 3 and norms[(n, n)] != fam.norm(n).lmul(ex2_norm_factor(n, a))]
    rep.add(exact("norms-exact", not bad, bad))

    # one-step route at the rescaled parameter
    b = None
    r = rational_sqrt(2 * a2 / (3 * a2 + 2))
    if r is not None:
        b = a / abs(a) * r
    conj = None
    if b is None:
        rep.add(exact("conjugation-one-step", False, "rescaled parameter is irrational"))
    else:
        seed, U = ex2_nonpolynomial_seed(b)
        A_alt = build_annihilator(seed, U)
        famb = hermite_family(b, 1)
        _one_step_checks(rep, *ex2_one_step_operator(b), seed, famb.weight)
        alt = {n + 3: apply(A_alt, famb.poly(n)) for n in range(0, max_n - 2)}
        conj = conjugation_check(polys, alt, indices=list(range(3, max_n + 1)))
        rep.add(exact("conjugation-one-step", conj.ok, conj.failure))
        m11 = rational_sqrt(6 * a2 + 4)
        if m11 is None:
            rep.add(exact("conjugation-closed-form", False, "M is irrational"))
        else:
            M = RatMat.diag(m11 / 2, 2 / (a2 + 2))
            bad = []
            for n in range(3, max_n + 1):
                lhs = RatMat.diag(1, (3 * a2 + 2) / (n * a2 + 2)) @ M @ alt[n]
                rhs = RatMat.diag(1, 1 / (n * a2 / 2 + 1)) @ polys[n] @ M * Q(-1, 4 * (n - 1) * (n - 2))
                if lhs != rhs:
                    bad.append(n)
            rep.add(exact("conjugation-closed-form", not bad, bad))
            # independent route to the same weight through the one-step data
            T = M @ A_alt.coeff(1).inverse()
            Fb = ex2_one_step_operator(b)[0].coeff(2)
            W3 = T @ Fb @ famb.weight.density @ T.T * ((a2 + 2) / (64 * (3 * a2 + 2) ** 2))
            rep.add(exact("weight-one-step-route", W3 == W.density and famb.weight.kernel == W.kernel))

    eigs = {n: eigencheck(transformed["D1"], P).gamma for n, P in polys.items()}
    res = TransformResult(transformed["D1"], polys, frozenset({1, 2}), eigs)
    rep.add(exact("degrees", res.degrees_ok()))
    sym = symmetry_check(transformed["D1"], W)
    rep.add(exact("Dhat-symmetric", sym.symmetric, sym.failed))

    if numeric_checks:
        with rep.timed("numeric-orthogonality"):
            g = numeric_gram(polys, W, npoints, dps)
        rep.add(numeric("orthogonality-numeric", _offdiag_max(g), NUMERIC_TOL))

    data = {
        "family": fam,
        "A1": A1,
        "A2": A2,
        "first_step": first,
        "operators": transformed,
        "norms": norms,
        "scale": scale,
        "rescaled_a": b,
        "conjugation": conj,
        "alt_polys": alt if b is not None else None,
    }
    return ExampleResult(2, {"a": a}, res, W, rep, data)


# ---------------------------------------------------------------------------
# Example 3: Laguerre type, non-polynomial seed e^t (...)


def ex3_closed_form(a, alpha) -> dict:
    a, al = Q(a), Q(alpha)
    A1 = RatMat([[t + al + 2, a * (al + 2)], [0, al + 1 + t]])
    A0 = -RatMat([[t + al + 3, -a * (t - 2)], [0, t + al + 2]])
    d1, d2 = t + al + 2, t + al + 1
    B1 = RatMat([[t / d1, -a * t * (al + 2) / (d1 * d2)], [0, t / d2]])
    B0 = RatMat([[(al + 2) / d1, -a * (al * al + 3 * al - t + 2) / (d1 * d2)], [0, (al + 1) / d2]])
    F2 = RatMat.identity(2) * t
    F1 = RatMat(
        [
            [(t + al + 3) * (al + 2 - t) / d1, a * (t * (al + t) ** 2 + al * al + 5 * al * t + 2 * t * t + 3 * al + 7 * t + 2) / (d1 * d2)],
            [0, d1 * (al + 1 - t) / d2],
        ]
    )
    F0 = RatMat(
        [
            [-(al + 2) * (t + al + 4) / d1, a * (al * (t + al) ** 2 + 4 * al * al + 3 * al * t + t * t + 5 * al - 3 * t + 2) / (d1 * d2)],
            [0, -(al + 1) * (t + al + 3) / d2],
        ]
    )
    Wd = RatMat(
        [
            [t * (a * a * d1 * d1 * (t - 1) ** 2 + t * d2 * d2) / (d1 * d1 * d2 * d2), a * (t - 1) * t / (d2 * d2)],
            [a * (t - 1) * t / (d2 * d2), t / (d2 * d2)],
        ]
    )
    return {"A": DiffOp([A0, A1]), "B": DiffOp([B0, B1]), "Dhat": DiffOp([F0, F1, F2]), "weight_density": Wd}


def ex3_d5_eigenvalue(k: int, a, alpha) -> RatMat:
    """Closed-form fifth-order eigenvalue formula at index ``k``."""
    a, al = Q(a), Q(alpha)
    a2 = a * a
    return RatMat([[0, (al + k + 3) * (al + k + 1) * ((k + 1) * a2 + 1) / a2], [(k * a2 + 1) * (al + k + 2) / a2, 0]])


def example3(a=1, alpha=0, max_n: int = 6, numeric_checks: bool = True, npoints: int = 200, dps: int | None = 30) -> ExampleResult:
    a, al = Q(a), Q(alpha)
    rep = Report(3, {"a": a, "alpha": al, "max_n": max_n})
    fam = laguerre_family(a, al)
    seed, U = fam.extras["seed"], fam.extras["U"]
    D1 = fam.operators["D1"]
    ev = eigencheck(D1, seed)
    rep.add(exact("seed-kernel-D1", ev.ok and ev.gamma.is_zero(), ev.gamma))
    want = {
        "D2": RatMat([[(al + 2) + 1 / (a * a), -(al + 2) / a], [1 / a, 0]]),
        "I": RatMat.identity(2),
    }
    for name, G in want.items():
        e = eigencheck(fam.operators[name], seed)
        rep.add(exact(f"seed-eigen[{name}]", e.ok and e.gamma == G, e.gamma))
    rep.add(exact("lus", kernel_factorization_check(D1, seed, fam.weight).ok))

    A = build_annihilator(seed, U)
    closed = ex3_closed_form(a, al)
    rep.add(exact("A-closed-form", A == closed["A"]))
    fact = factorize(D1, A)
    rep.add(exact("Psi-zero", fact.Psi.is_zero(), fact.Psi))
    rep.add(exact("B-closed-form", fact.B == closed["B"]))
    Dhat = transform(D1, fact)
    rep.add(exact("Dhat-closed-form", Dhat == closed["Dhat"]))

    polys = {n: apply(A, fam.poly(n - 1)) for n in range(1, max_n + 1)}
    for name, op in fam.operators.items():
        if op.order > 2:
            continue
        f = factorize(op, A, seed=seed, gamma=eigencheck(op, seed).gamma)
        ok3f = eq3f_check(A, f.Psi).ok
        Dh = transform(op, f)
        ok, why, _ = _eigen_sweep(Dh, polys, lambda n, op=op: eigencheck(op, fam.poly(n - 1)).gamma)
        rep.add(exact(f"eigen[{name}]", ok and ok3f, why))

    D3 = fam.operators["D3"]
    D5 = compose(A, compose(D3, fact.B))
    rep.add(exact("D5-order", D5.order == 5, D5.order))
    ok, why, d5 = _eigen_sweep(D5, polys, lambda n: ex3_d5_eigenvalue(n - 1, a, al))
    rep.add(exact("D5-eigenvalue", ok, why, detail="P_n = A(P_{n-1}) carries the closed-form value at index n-1"))

    W = exceptional_weight(seed, U, D1.coeff(2), fam.weight)
    rep.add(exact("weight-closed-form", W.density == closed["weight_density"] and W.kernel == fam.weight.kernel))
    gam = {n: eigencheck(D1, fam.poly(n - 1)).gamma for n in polys}
    norms = {}
    for n in polys:
        for m in polys:
            norms[(n, m)] = reduced_inner_product(fam.poly(n - 1), fam.poly(m - 1), gam[m], fam.weight)
    ok, why = _exact_orthogonality(norms)
    rep.add(exact("orthogonality-exact", ok, why))

    res = TransformResult(Dhat, polys, frozenset({0}), {n: eigencheck(Dhat, P).gamma for n, P in polys.items()})
    rep.add(exact("degrees", res.degrees_ok()))
    sym = symmetry_check(Dhat, W)
    rep.add(exact("Dhat-symmetric", sym.symmetric, sym.failed))
    if numeric_checks:
        with rep.timed("numeric-orthogonality"):
            g = numeric_gram(polys, W, npoints, dps)
        rep.add(numeric("orthogonality-numeric", _offdiag_max(g), NUMERIC_TOL))
    data = {"family": fam, "A": A, "factorization": fact, "D5": D5, "D5_eigenvalues": d5, "norms": norms}
    return ExampleResult(3, {"a": a, "alpha": al}, res, W, rep, data)


# ---------------------------------------------------------------------------
# Example 4: Gegenbauer type, non-polynomial seed


def ex4_closed_form(a, r) -> dict:
    a, r = Q(a), Q(r)
    A1 = RatMat(
        [
            [
                t**3 + (-(a**3) + 2 * a * a * r - a * r * r - 2 * a * r + 2 * r * r + a - 3 * r + 2) * t / ((a - 1) * (2 + a - r) * (a - r + 1)),
                (t * t * (a - 1) * (3 * a - 2 * r + 2) - (a - 2) * (a - r + 1)) / ((a - 1) * (a - 2) * (a - r + 1)),
            ],
            [
                -(t * t * (3 * a - r - 2) * (a - r + 1) - (a - 1) * (a + 2 - r)) / ((a - 1) * (a + 2 - r) * (a - r + 1)),
                t**3 + (-(a**3) + a * a * r - 2 * a * r + a + 2 * r - 2) * t / ((a - 1) * (a - 2) * (a - r + 1)),
            ],
        ]
    )
    U = RatMat(
        [
            [(1 - r) * t * t + (r + 1 - a) / (a + 1 - r), 2 * t * (1 - r) * (a + 2 - r) / ((a - 2) * (a + 1 - r))],
            [2 * t * (r - 1) * (a - 2) / ((a - 1) * (a + 2 - r)), -(t * t * (a * r - a - r + 1) + a + 1) / (a - 1)],
        ]
    )
    p = t * t * (a * a - a * r + r - 1) + 1
    B1 = RatMat(
        [
            [-((a - 1) ** 2) * (a + 2 - r) * (a + 1 - r) * t, (a - 1) * (a + 2 - r) * (a + 1 - r)],
            [-(a - 1) * (a - 2) * (a - r + 1), -(a - 1) * (a - 2) * (a - r + 1) ** 2 * t],
        ]
    ) / p
    q12 = t * ((r - 4) * p + 2 * (a * a - a * r + r)) / ((a - 2) * (a + 2 - r))
    Qm = RatMat(
        [
            [
                ((a - 2) * p * p - (a - r) * (a * (a - r) + 4) * p + 2 * (a - r) * (a * a - a * r + r)) / ((a - 2) ** 2 * (a + 1 - r) * (r - a)),
                q12,
            ],
            [q12, ((a + 2 - r) * p * p - a * (a * a - a * r + 4) * p + 2 * a * (a * (a - r) + r)) / (a * (a - 1) * (a + 2 - r) ** 2)],
        ]
    )
    c = a * (a - 1) * (a - 2) * (a + 1 - r) * (a + 2 - r) * (r - a)
    weight = QuasiRatMat(Kernel.jacobi_symmetric(r / 2 - 2), Qm * c / (p * p))
    return {"A": DiffOp([-U, A1]), "B1": B1, "p": p, "Q": Qm, "constant": c, "weight": weight}


def example4(a=Q(1, 2), r=3, max_n: int = 6, numeric_checks: bool = True, npoints: int = 200, dps: int | None = 30) -> ExampleResult:
    a, r = Q(a), Q(r)
    rep = Report(4, {"a": a, "r": r, "max_n": max_n})
    fam = gegenbauer_family(a, r)
    branch = fam.extras["admissible"]
    rep.add(exact("admissible", branch is not None, f"(a, r) = ({a}, {r})", detail=branch))
    Dt = fam.operators["Dtilde"]
    sym = symmetry_check(Dt, fam.weight)
    rep.add(exact("Dtilde-symmetric", sym.symmetric, sym.failed))
    seed, U = fam.extras["seed"], fam.extras["U"]
    ev = eigencheck(Dt, seed)
    rep.add(exact("seed-kernel", ev.ok and ev.gamma.is_zero(), ev.gamma))
    rep.add(exact("lus", kernel_factorization_check(Dt, seed, fam.weight).ok))
    ok, why, _ = _eigen_sweep(Dt, fam.polys(max_n), None)
    rep.add(exact("classical-eigen", ok, why))

    A = build_annihilator(seed, U)
    closed = ex4_closed_form(a, r)
    rep.add(exact("A-closed-form", A == closed["A"]))
    fact = factorize(Dt, A)
    rep.add(exact("Psi-zero", fact.Psi.is_zero(), fact.Psi))
    rep.add(exact("B-closed-form", fact.B.coeff(1) == closed["B1"]))
    Dhat = transform(Dt, fact)

    polys = {0: RatMat.identity(2)}
    polys.update({n: apply(A, fam.poly(n - 2)) for n in range(2, max_n + 1)})
    ok, why, gam_hat = _eigen_sweep(Dhat, polys, None)
    rep.add(exact("eigen[Dtilde]", ok, why))

    W = exceptional_weight(seed, U, Dt.coeff(2), fam.weight, closed=False)
    c = W.as_quasi().proportional_on(closed["weight"], fam.weight.support)
    rep.add(exact("weight-closed-form", c == 1, c, detail="Q/p^2 structure with the closed-form constant"))
    gam = {n: eigencheck(Dt, fam.poly(n - 2)).gamma for n in polys if n >= 2}
    norms = {}
    for n in gam:
        for m in gam:
            norms[(n, m)] = reduced_inner_product(fam.poly(n - 2), fam.poly(m - 2), gam[m], fam.weight)
    ok, why = _exact_orthogonality(norms)
    rep.add(exact("orthogonality-exact", ok, why, detail="pairs with n, m >= 2"))

    res = TransformResult(Dhat, polys, frozenset({1}), gam_hat)
    rep.add(exact("degrees", res.degrees_ok()))
    sym = symmetry_check(Dhat, W)
    rep.add(exact("Dhat-symmetric", sym.symmetric, sym.failed))
    if numeric_checks:
        with rep.timed("numeric-orthogonality"):
            g = numeric_gram(polys, absorb_endpoint_factors(W), npoints, dps)
        rep.add(numeric("orthogonality-numeric", _offdiag_max(g), NUMERIC_TOL))
    data = {"family": fam, "A": A, "factorization": fact, "branch": branch, "norms": norms}
    return ExampleResult(4, {"a": a, "r": r}, res, W, rep, data)


# ---------------------------------------------------------------------------
# Example 5: example 1 plus a point mass at 0


def ex5_closed_form(a, zeta) -> dict:
    a, z = Q(a), Q(zeta)
    a2 = a * a
    p = 2 * (2 - a2) * t * t - a2
    F2 = RatMat([[-a2 * (2 * t * t + 1), -(a2 - 2) * a * t * (2 * t * t + 1)], [4 * a * t / (a2 - 2), 4 * t * t]]) / p
    F1 = RatMat(
        [
            [-2 * t * (p * p + 4 * p - 4 * a2), 4 * (a2 - 2) * t * t / a * (-p + 2 * a2)],
            [4 * (p + 2 * a2) * (p - a2) / (a * (a2 - 2)), -8 * a2 * t],
        ]
    ) / (p * p)
    F0 = RatMat.diag(2 - 4 / a2, 0)
    P2 = RatMat([[t * t - (a2 + 2) / (2 * a2 - 4), -a * t], [2 * a * t / (a2 - 2), t * t + 1 / (2 * (z * (a2 - 2) ** 2 + 1))]])
    P3 = RatMat([[t**3 - 3 * a2 * t / (2 * a2 - 4), -3 * a * t * t / 2], [6 * a * t * t / (a2 * a2 - 4), t**3 + 3 * a2 * t / (2 * a2 + 4)]])
    return {"Dhat": DiffOp([F0, F1, F2]), "P2": P2, "P3": P3}


def tau_polys_symbolic(a, zeta):
    """The candidate polynomials ``P_j^zeta`` (j <= 3) with free ``tau2``, ``tau3`` (sympy)."""
    import sympy as sp

    ts, t2, t3 = sp.symbols("t tau2 tau3")
    a = sp.Rational(Q(a).numerator, Q(a).denominator)
    z = sp.Rational(Q(zeta).numerator, Q(zeta).denominator)
    k = z * (a**2 - 2) ** 2 + 1
    P = {
        0: -sp.eye(2),
        1: sp.Matrix([[ts, -a / 2], [a / (a**2 - 2), ts]]),
        2: sp.Matrix([[ts**2 - sp.Rational(1, 2), -a * ts], [-a * ts + t2, ts**2 + t2 * (a**2 - 2) * ts / a + (a**2 * k - 1) / (2 * k)]]),
        3: sp.Matrix([[ts**3 - 3 * ts / 2, -3 * a * (2 * ts**2 - 1) / 4], [-3 * a * ts**2 / (a**2 + 2) + t3, ts**3 + t3 * ts * (a**2 - 2) / a]]) / 2,
    }
    return P, ts, (t2, t3)


def three_term_ideal(P: dict, ts, n: int):
    """Groebner basis of ``t P_n = A P_{n+1} + B P_n + C P_{n-1}`` in all unknowns.

    ``[1]`` certifies that no constant matrices (for any parameter values)
    satisfy the relation.
    """
    import sympy as sp

    N = P[n].shape[0]
    A, B, C = (sp.Matrix(N, N, sp.symbols(f"{s}0:{N * N}")) for s in "ABC")
    R = (ts * P[n] - A * P[n + 1] - B * P[n] - C * P[n - 1]).applyfunc(sp.expand)
    eqs = []
    for e in R:
        eqs.extend(sp.Poly(e, ts).coeffs())
    gens = sorted(set().union(*(e.free_symbols for e in eqs)) - {ts}, key=str)
    return list(sp.groebner(eqs, *gens, order="grevlex"))


def example5(a=2, zeta=1, max_n: int = 8) -> ExampleResult:
    a, zeta = Q(a), Q(zeta)
    a2 = a * a
    if a2 <= 2 or zeta < 0:
        raise ValueError("example 5 needs a^2 > 2 and zeta >= 0")
    rep = Report(5, {"a": a, "zeta": zeta, "max_n": max_n})
    base = example1(a, max_n=max_n, numeric_checks=False)
    fam, A = base.data["family"], base.data["A"]
    D = fam.operator({"D1": 1, "D2": 4 / a2, "I": 4 - 4 / a2})
    Dx = transform(D, factorize(D, A))
    closed = ex5_closed_form(a, zeta)
    rep.add(exact("Dhat-closed-form", Dx == closed["Dhat"]))
    M = RatMat.diag(0, 1)
    F0, F1, F2 = Dx.coeff(0), Dx.coeff(1), Dx.coeff(2)
    rep.add(exact("delta-F2", (F2(0) @ M).is_zero()))
    rep.add(exact("delta-F1", (F1(0) @ M).is_zero()))
    rep.add(exact("delta-F0", F0(0) @ M == M @ F0(0).T))
    W = base.weight.normalized_unit()
    try:
        Wz = delta_extension(Dx, W, 0, M, zeta)
        rep.add(exact("delta-extension", True))
    except DarbouxError as exc:
        Wz = W.with_point_mass(0, zeta, M)
        rep.add(exact("delta-extension", False, exc))

    basis = base.transform.polys
    gram = {k: v.with_unit("1") for k, v in base.data["norms"].items()}

    def orthogonalize(z):
        ip = basis_inner_product(gram, basis, [(Q(0), Q(z), M)] if z else [])
        return gram_schmidt(basis, ip)

    gs = orthogonalize(zeta)
    monic = {n: P.lc.inverse() @ P for n, P in gs.items()}
    rep.add(exact("P2-closed-form", monic[2] == closed["P2"], monic[2]))
    rep.add(exact("P3-closed-form", monic[3] == closed["P3"], monic[3]))
    gs0 = orthogonalize(0)
    rep.add(exact("zeta0-reproduces", all(gs0[n] == basis[n] for n in basis)))
    ok, why, _ = _eigen_sweep(Dx, gs, None)
    rep.add(exact("eigen[Dhat]", ok, why))
    ip = basis_inner_product(gram, basis, [(Q(0), zeta, M)] if zeta else [])
    bad = [(n, m) for n in gs for m in gs if n < m and not ip(gs[n], gs[m]).is_zero()]
    rep.add(exact("orthogonality-exact", not bad, bad[:5]))

    if zeta:
        P, ts, _ = tau_polys_symbolic(a, zeta)
        G = three_term_ideal(P, ts, 2)
        rep.add(exact("three-term-infeasible", G == [1], G[:3], detail="Groebner basis of the n=2 relation"))

    res = TransformResult(Dx, gs, frozenset({1}), {n: eigencheck(Dx, P).gamma for n, P in gs.items()})
    rep.add(exact("degrees", res.degrees_ok()))
    data = {"family": fam, "A": A, "base": base, "gram": gram, "monic": monic, "M": M}
    return ExampleResult(5, {"a": a, "zeta": zeta}, res, Wz, rep, data)


# ---------------------------------------------------------------------------
# xi != 1 - a^2: same annihilator, partial orthogonality only


def partial_orthogonality(a=2, xi=1, max_n: int = 7, npoints: int = 200, dps: int | None = 30) -> ExampleResult:
    """Integrals of ``A(P_{n,xi})`` against the example-1 weight.

    Indices with singular leading coefficient (``n = 1``) are left out.
    Expected: zero for ``|n - m| >= 2``, nonzero for ``|n - m| = 1``.
    """
    a, xi = Q(a), Q(xi)
    rep = Report(None, {"a": a, "xi": xi, "max_n": max_n})
    base = example1(a, max_n=2, numeric_checks=False)
    A, W = base.data["A"], base.weight
    fam = hermite_family(a, xi)
    polys = {n: apply(A, fam.poly(n)) for n in range(0, max_n + 1)}
    polys = {n: P for n, P in polys.items() if not P.is_zero() and P.degree == n and P.lc.det()}
    ops = {name: fam.operator({"D1": u1, "D4": u4, "I": u5}) for name, (u1, u4, u5) in {"u1": (1, 0, 0), "u4": (0, 1, 0)}.items()}
    for name, op in ops.items():
        Dh = transform(op, factorize(op, A))
        ok, why, _ = _eigen_sweep(Dh, polys, None)
        rep.add(exact(f"eigen[{name}]", ok, why))
    g = numeric_gram(polys, W, npoints, dps)
    far = max((np.abs(v).max() for (n, m), v in g.items() if abs(n - m) >= 2), default=0.0)
    near = [float(np.abs(v).max()) for (n, m), v in g.items() if abs(n - m) == 1 and min(n, m) <= max_n - 1]
    rep.add(numeric("vanish-far", far, NUMERIC_TOL))
    rep.add(exact("nonzero-adjacent", bool(near) and min(near) > 1e-3, min(near) if near else None))
    res = TransformResult(DiffOp([RatMat.zero(2)]), polys, frozenset({1}), {})
    return ExampleResult(0, {"a": a, "xi": xi}, res, W, rep, {"gram": g})


PIPELINES = {1: example1, 2: example2, 3: example3, 4: example4, 5: example5}
DEFAULTS = {1: {"a": 2}, 2: {"a": 4}, 3: {"a": 1, "alpha": 0}, 4: {"a": Q(1, 2), "r": 3}, 5: {"a": 2, "zeta": 1}}


def example_pipeline(id: int, **params) -> ExampleResult:
    if id not in PIPELINES:
        raise ValueError(f"unknown example id {id}; expected one of {sorted(PIPELINES)}")
    return PIPELINES[id](**params)


__all__ = [
    "DEFAULTS",
    "ExampleResult",
    "PIPELINES",
    "example1",
    "example2",
    "example3",
    "example4",
    "example5",
    "example_pipeline",
    "partial_orthogonality",
    "rational_sqrt",
    "tau_polys_symbolic",
    "three_term_ideal",
]
