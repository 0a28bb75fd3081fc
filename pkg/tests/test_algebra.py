from fractions import Fraction

import pytest
import sympy as sp
from conftest import fractions, nonzero_polys, polymats, polys, ratfuncs
from hypothesis import given
from hypothesis import strategies as st

from exmop.algebra import (
    Poly,
    Q,
    RatFunc,
    RatMat,
    SingularMatrixError,
    count_real_roots,
    mat_det,
    mat_inverse,
    poly_gcd,
    ratfunc_arith,
)

t = Poly.t()
ts = sp.Symbol("t")


def to_sympy(x):
    if isinstance(x, RatFunc):
        return to_sympy(x.num) / to_sympy(x.den)
    return sp.Integer(0) + sum(sp.Rational(c.numerator, c.denominator) * ts**k for k, c in enumerate(x.c))


def test_poly_basics():
    p = Poly([1, 0, 3])
    assert p.degree == 2 and p.lc == 3
    assert Poly([0, 0]).is_zero()
    assert Poly().degree < 0
    assert (t + 1) * (t - 1) == t * t - 1
    assert divmod(t**3 + 1, t + 1) == (t * t - t + 1, Poly())


def test_gcd_monic():
    assert poly_gcd((t - 1) * (t + 2) * 3, (t - 1) * (t + 5)) == t - 1


def test_derive_reciprocal():
    f = RatFunc(1, t * t + 1)
    assert ratfunc_arith(f, op="derive") == RatFunc(-2 * t, (t * t + 1) ** 2)


def test_eval_seed_determinant():
    a = 2
    p = 2 * (2 - a * a) * t * t - a * a
    assert ratfunc_arith(RatFunc(p), 0, op="eval") == -4


def test_mul_by_inverse():
    f = RatFunc(3 * t + 5, t - 7)
    assert ratfunc_arith(f, 1 / f, op="mul") == RatFunc(1)


def test_canonical_form():
    f = RatFunc(2 * t * t - 2, 4 * t - 4)
    assert f.den == Poly([1]) and f.num == (t + 1) / 2
    assert RatFunc(t, 2 * t + 2).den.lc == 1


def test_errors():
    with pytest.raises(ZeroDivisionError):
        RatFunc(t) / RatFunc(0)
    with pytest.raises(ZeroDivisionError):
        RatFunc(1, t - 1)(1)


def test_det_hermite_seed():
    a, xi = Q(2), Q(-3)
    M = RatMat([[2 * t, -a], [-a, t * (a * a + 2 * xi)]])
    assert mat_det(M) == RatFunc(-4 * t * t - 4)
    assert mat_det(RatMat.identity(3)) == RatFunc(1)


def test_det_matches_cofactor_oracle():
    M = RatMat([[t + 1, t * t, 2], [3, t - 2, t**3], [t, 1, t * t + 1]])
    oracle = sp.Matrix(3, 3, [to_sympy(x) for x in M.entries()]).det(method="berkowitz")
    assert sp.expand(to_sympy(mat_det(M)) - oracle) == 0


def test_inverse():
    assert mat_inverse(RatMat.identity(2)) == RatMat.identity(2)
    P = RatMat([[2 * t, -2], [-2, -2 * t]])
    inv = mat_inverse(P)
    assert inv == P.adjugate() / RatFunc(-4 * t * t - 4)
    assert inv @ P == RatMat.identity(2) and P @ inv == RatMat.identity(2)
    with pytest.raises(SingularMatrixError):
        mat_inverse(RatMat([[t, t], [t, t]]))


def test_sturm_counts():
    p = (t * t - 2) * (t - 5)
    assert count_real_roots(p) == 3
    assert count_real_roots(p, -1, 1) == 0
    assert count_real_roots(t * t - 1, -1, 1, closed=False) == 0
    assert count_real_roots(t * t - 1, -1, 1, closed=True) == 2
    assert count_real_roots(t * t + 1) == 0


@given(ratfuncs(), ratfuncs())
def test_leibniz(f, g):
    assert (f * g).deriv() == f.deriv() * g + f * g.deriv()


@given(ratfuncs(), ratfuncs())
def test_canonical_equality_across_paths(f, g):
    assert (f + g) * (f - g) == f * f - g * g


@given(polymats(3, 2), polymats(3, 2))
def test_det_multiplicative(A, B):
    assert (A @ B).det() == A.det() * B.det()


@given(st.sampled_from([2, 3]).flatmap(lambda n: polymats(n, 4)))
def test_inverse_roundtrip(M):
    if not M.det():
        with pytest.raises(SingularMatrixError):
            M.inverse()
        return
    Minv = M.inverse()
    assert Minv @ M == RatMat.identity(M.n)
    assert M @ Minv == RatMat.identity(M.n)


@given(polys(4), nonzero_polys(3))
def test_division_identity(p, d):
    q, r = divmod(p, d)
    assert q * d + r == p
    assert r.is_zero() or r.degree < d.degree


@given(polys(4), fractions)
def test_eval_matches_sympy(p, x):
    assert p(x) == Fraction(str(to_sympy(p).subs(ts, sp.Rational(x.numerator, x.denominator))))
