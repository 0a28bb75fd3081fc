from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from exmop.algebra import Poly, Q, RatMat
from exmop.diffops import eigencheck
from exmop.families.classical import (
    gegenbauer_admissible,
    gegenbauer_family,
    hermite_family,
    laguerre_family,
)
from exmop.families.examples import example5, tau_polys_symbolic, three_term_ideal
from exmop.families.scalar import scalar_classical
from exmop.weights import ExactMatrix, exact_inner_product

t = Poly.t()
x = sp.Symbol("x")


def to_sp(p: Poly):
    return sum(sp.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(p.c))


def test_scalar_low_degrees():
    assert scalar_classical("hermite-physicists", 2) == 4 * t * t - 2
    assert scalar_classical("laguerre-monic", 0) == Poly.const(1)
    assert scalar_classical("laguerre-monic", 1, alpha=1) == t - 2
    with pytest.raises(ValueError):
        scalar_classical("chebyshev", 2)
    with pytest.raises(ValueError):
        scalar_classical("hermite-physicists", -1)


@pytest.mark.parametrize("alpha,beta", [(0, 0), (1, 2), (Fraction(1, 2), Fraction(1, 2))])
def test_jacobi_orthogonality(alpha, beta):
    # x = 2u - 1 turns the integral into Beta-function moments in u
    al, be = sp.nsimplify(alpha), sp.nsimplify(beta)
    u = sp.Symbol("u")

    def integral(f):
        poly = sp.Poly(sp.expand(f.subs(x, 2 * u - 1)), u)
        return sum(c * sp.beta(be + k + 1, al + 1) for (k,), c in poly.terms()) * 2 ** (al + be + 1)

    ps = [to_sp(scalar_classical("jacobi-monic", n, alpha=alpha, beta=beta)) for n in range(4)]
    for n in range(4):
        assert sp.Poly(ps[n], x).LC() == 1
        for m in range(n):
            assert sp.simplify(sp.expand_func(integral(ps[n] * ps[m]))) == 0


@pytest.mark.parametrize("alpha", [0, 1, Fraction(3, 2)])
def test_laguerre_orthogonality(alpha):
    a = sp.nsimplify(alpha)
    ps = [to_sp(scalar_classical("laguerre-monic", n, alpha=alpha)) for n in range(4)]
    for n in range(4):
        for m in range(n):
            assert sp.simplify(sp.integrate(ps[n] * ps[m] * x**a * sp.exp(-x), (x, 0, sp.oo))) == 0


def test_hermite_family_norms():
    fam = hermite_family(2, 1)
    assert fam.poly(0) == RatMat.diag(1, 1)
    assert hermite_family(2, 3).poly(0) == RatMat.diag(1, 3)
    assert fam.norm(2) == ExactMatrix(((56, 0), (0, 40)), "sqrt(pi)")
    for n in range(4):
        for m in range(4):
            ip = exact_inner_product(fam.poly(n), fam.poly(m), fam.weight)
            assert (ip == fam.norm(n)) if n == m else ip.is_zero()


def test_hermite_eigenvalues():
    fam = hermite_family(3, Q(-2, 5))
    for name, u in {"D1": (1, 0, 0, 0, 0), "D2": (0, 1, 0, 0, 0), "D3": (0, 0, 1, 0, 0), "D4": (0, 0, 0, 1, 0)}.items():
        for n in range(5):
            ev = eigencheck(fam.operators[name], fam.poly(n))
            assert ev.ok and ev.gamma == fam.eigenvalue(n, u)


def test_laguerre_eigen():
    fam = laguerre_family(2, 1)
    for D in fam.operators.values():
        for n in range(4):
            assert eigencheck(D, fam.poly(n)).ok


def test_gegenbauer_admissibility():
    assert gegenbauer_admissible(Q(1, 2), 3) is not None
    assert gegenbauer_admissible(Q(3, 2), 2) is None
    with pytest.raises(ValueError):
        gegenbauer_family(1, 3)


def test_gegenbauer_eigen_and_orthogonality():
    fam = gegenbauer_family(Q(1, 2), 3)
    D = fam.operators["Dtilde"]
    for n in range(1, 5):
        assert eigencheck(D, fam.poly(n)).ok
    for n in range(1, 4):
        for m in range(1, n):
            assert exact_inner_product(fam.poly(n), fam.poly(m), fam.weight).is_zero()


def test_leading_coefficients():
    a, xi = Q(2), Q(3)
    fam = hermite_family(a, xi)
    for n in range(1, 6):
        assert fam.poly(n).lc == RatMat([[2**n, 0], [0, 2**n * (xi + a * a * n / 2)]])


def test_three_term_relation_infeasible():
    P, ts, _ = tau_polys_symbolic(2, 1)
    assert three_term_ideal(P, ts, 2) == [1]


def test_point_mass_family_reports():
    res = example5(2, Q(3, 2), max_n=5)
    assert res.report.ok, res.report.failures()


@given(st.integers(min_value=1, max_value=6), st.fractions(min_value=1, max_value=5, max_denominator=4))
def test_hermite_recurrence_property(n, a):
    # t P_n = A_n P_{n+1} + B_n P_n + C_n P_{n-1} with constant matrix coefficients
    fam = hermite_family(a, 1)
    lhs = fam.poly(n) * t
    A = lhs.lc @ fam.poly(n + 1).lc.inverse()
    rest = lhs - A @ fam.poly(n + 1)
    B = rest.coeff(n) @ fam.poly(n).lc.inverse()
    rest = rest - B @ fam.poly(n)
    C = rest.coeff(n - 1) @ fam.poly(n - 1).lc.inverse()
    assert (rest - C @ fam.poly(n - 1)).is_zero()
