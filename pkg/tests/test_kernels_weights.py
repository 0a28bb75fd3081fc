from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from conftest import polymats
from hypothesis import given
from hypothesis import strategies as st

from exmop import serialize as S
from exmop.algebra import Poly, Q, RatFunc, RatMat
from exmop.families.classical import hermite_family, hermite_weight
from exmop.families.examples import ex1_nonpolynomial_seed, ex1_closed_form_weight
from exmop.kernels import Kernel, QuasiRatMat, log_derivative, qr_differentiate
from exmop.weights import (
    ExactMatrix,
    ExactValue,
    UnsupportedWeight,
    WeightSpec,
    decay_check,
    exact_inner_product,
    moments,
    positivity_check,
    reducibility_probe,
    scalar_moments,
    unit_value_float,
)

t = Poly.t()
REAL = (None, None)


def scalar_weight(kernel, support, density=1, point_masses=()):
    return WeightSpec(support, kernel, RatMat([[density]]), point_masses)


def test_log_derivatives():
    assert log_derivative(Kernel.gaussian()) == RatFunc(-2 * t)
    k = Kernel.laguerre(Q(1, 2))
    assert log_derivative(k) == RatFunc(-1) + RatFunc(Q(1, 2), t)
    assert log_derivative(Kernel.jacobi_symmetric(Q(1, 2))) == RatFunc(t, t * t - 1)


def test_log_derivative_numeric():
    # central differences of log k at an interior point
    k = Kernel(Poly([0, 1, -1]), ((Q(-1), Q(3, 2)), (Q(2), Q(-1, 3))))
    x, h = 0.3, 1e-6
    fd = (np.log(k.eval_float(x + h)) - np.log(k.eval_float(x - h))) / (2 * h)
    assert abs(log_derivative(k).eval_float(x) - fd) < 1e-8


def test_kernel_algebra():
    g = Kernel.gaussian()
    assert (g * g.inverse()).is_trivial()
    assert (g**2).exp_arg == Poly([0, 0, -2])


def test_qr_differentiate_polynomial_seed():
    a, xi = Q(2), Q(-3)
    P1 = hermite_family(a, xi).poly(1)
    d = qr_differentiate(QuasiRatMat.rational(P1))
    assert d.kernel.is_trivial()
    assert d.body == RatMat.diag(2, a * a + 2 * xi)


def test_qr_differentiate_gaussian_constant():
    C = RatMat([[1, 2], [3, 4]])
    d = qr_differentiate(QuasiRatMat(Kernel.gaussian(), C))
    assert d.kernel == Kernel.gaussian() and d.body == C * (-2 * t)


def test_nonpolynomial_seed_second_derivative():
    seed, _ = ex1_nonpolynomial_seed(2)
    d2 = seed.deriv().deriv()
    assert d2.kernel == seed.kernel
    x, h = 1 / 3, 1e-4
    f = seed.eval_float
    fd = (np.array(f(x + h)) - 2 * np.array(f(x)) + np.array(f(x - h))) / h**2
    exact = np.array(d2.eval_float(x))
    assert np.abs(fd - exact).max() / np.abs(exact).max() < 1e-7


def test_gaussian_moments():
    w = scalar_weight(Kernel.gaussian(), REAL)
    vals = [moments(w, k)[0, 0] for k in range(6)]
    sp = "sqrt(pi)"
    assert vals[0] == ExactValue(1, sp)
    assert vals[2] == ExactValue(Q(1, 2), sp)
    assert vals[4] == ExactValue(Q(3, 4), sp)
    assert vals[1] == vals[3] == vals[5] == ExactValue(0)


def test_laguerre_moments():
    w = scalar_weight(Kernel.laguerre(0), (0, None))
    assert [moments(w, k)[0, 0] for k in range(5)] == [ExactValue(f, "Gamma(1)") for f in (1, 1, 2, 6, 24)]


@pytest.mark.parametrize("gamma", [Q(1, 2), Q(-1, 2), Q(3)])
def test_jacobi_moments_match_quadrature(gamma):
    # independent oracle: adaptive quadrature of the bare kernel
    w = scalar_weight(Kernel.jacobi_symmetric(gamma), (-1, 1))
    mp.mp.dps = 30
    g = mp.mpf(gamma.numerator) / gamma.denominator
    for k in range(0, 9, 2):
        m = moments(w, k)[0, 0]
        val = mp.quad(lambda x: x**k * (1 - x * x) ** g, [-1, 0, 1])
        got = m.coeff * mp.beta(mp.mpf(1) / 2, g + 1)
        assert m.unit == f"B(1/2,{gamma + 1})"
        assert abs(got - val) < mp.mpf(10) ** -12
    mp.mp.dps = 15


def test_gaussian_recurrence_table():
    m = scalar_moments("hermite", None, 42)
    assert all(m[k + 2] == Fraction(k + 1, 2) * m[k] for k in range(41))


def test_moments_reject_rational_density():
    w = WeightSpec(REAL, Kernel.gaussian(), RatMat([[RatFunc(1, t * t + 1)]]))
    with pytest.raises(UnsupportedWeight):
        moments(w, 0)
    with pytest.raises(UnsupportedWeight):
        moments(scalar_weight(Kernel(Poly([0, 0, -1]), ((Q(0), Q(1)),)), REAL), 0)


def test_point_mass_moments():
    M = RatMat.diag(0, 1)
    w = WeightSpec(REAL, Kernel.gaussian(), RatMat.zero(2), ((Q(0), Q(1), M),)).normalized_unit()
    assert exact_inner_product(RatMat.identity(2), RatMat.identity(2), w) == ExactMatrix.from_ratmat(M)


def test_hermite_inner_products():
    fam = hermite_family(2, -3)
    P0, P1 = fam.poly(0), fam.poly(1)
    w = fam.weight
    assert exact_inner_product(P0, P0, w) == ExactMatrix.from_ratmat(RatMat.diag(-1, 9), "sqrt(pi)")
    assert exact_inner_product(P1, P0, w).is_zero()


def test_hermite_norm_formula_matches_moments():
    for a, xi in [(2, 1), (2, -3), (Q(1, 2), Q(5, 3)), (4, 1)]:
        fam = hermite_family(a, xi)
        for n in range(9):
            for m in range(9):
                ip = exact_inner_product(fam.poly(n), fam.poly(m), fam.weight)
                assert ip == (fam.norm(n) if n == m else ExactMatrix.zero(2, "sqrt(pi)"))


@given(polymats(2, 3), polymats(2, 3), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_inner_product_left_priority_and_symmetry(P, Qm, c):
    w = hermite_weight(2, 1)
    A = RatMat([c[:2], c[2:]])
    ip = exact_inner_product(P, Qm, w)
    assert exact_inner_product(A @ P, Qm, w) == ip.lmul(A)
    assert exact_inner_product(Qm, P, w) == ip.T


def test_decay():
    body = RatMat([[t**3, 1], [t, t * t]])
    assert decay_check(QuasiRatMat(Kernel.gaussian(), body), "+inf")
    assert decay_check(QuasiRatMat(Kernel.gaussian(), body), "-inf")
    assert not decay_check(QuasiRatMat(Kernel(Poly([0, 0, 1])), body), "+inf")
    # F2 W at the finite end of the Laguerre weight with alpha = 1/2
    F2W = QuasiRatMat(Kernel.laguerre(Q(1, 2)), RatMat.identity(2) * t)
    assert decay_check(F2W, 0)
    assert not decay_check(QuasiRatMat(Kernel.laguerre(-Q(1, 2)), RatMat.identity(2)), 0)


@given(st.integers(0, 8))
def test_decay_monotone(n):
    f = QuasiRatMat(Kernel.one(), RatMat([[RatFunc(1, t**6 + 1)]]))
    if decay_check(f, "+inf", n):
        assert all(decay_check(f, "+inf", k) for k in range(n + 1))


def test_positivity():
    W = WeightSpec(REAL, Kernel.gaussian(), ex1_closed_form_weight(2))
    assert positivity_check(W, [-2, -1, 0, 1, 2]).positive
    assert W.density(0) == RatMat.diag(Q(1, 8), Q(3, 8))
    res = positivity_check(hermite_weight(2, -3), [0])
    assert not res.positive and res.witness == 0
    fam = hermite_family(2, -3)
    F2 = fam.operator({"D1": 1, "D2": Q(4, 2), "I": 4}).coeff(2)
    F2W = WeightSpec(REAL, Kernel.gaussian(), F2 @ fam.weight.density)
    assert positivity_check(F2W, [-2, -1, 0, 1, 2]).positive


def test_reducibility():
    res = reducibility_probe(hermite_weight(2, 1), 0, [(0, 1), (1, 2)])
    assert not res.commutes and res.witness is not None
    diag = WeightSpec(REAL, Kernel.gaussian(), RatMat.diag(1, t * t))
    assert reducibility_probe(diag, 1, [(0, 1), (2, 3), (-1, 5)]).commutes
    W = WeightSpec(REAL, Kernel.gaussian(), ex1_closed_form_weight(2))
    pairs = [(Q(i), Q(j)) for i in range(-2, 3) for j in range(-2, 3) if i < j]
    assert not reducibility_probe(W, 0, pairs).commutes
    with pytest.raises(ValueError):
        reducibility_probe(WeightSpec(REAL, Kernel.gaussian(), RatMat.diag(t, 1)), 0, [(1, 2)])


def test_exact_value_units():
    a = ExactValue(2, "sqrt(pi)")
    assert a + ExactValue(0) == a
    with pytest.raises(ValueError):
        a + ExactValue(1, "1")
    assert unit_value_float("B(1/2,3/2)") == pytest.approx(np.pi / 2)


@given(polymats(2, 3))
def test_weight_serialization_roundtrip(M):
    W = WeightSpec((Q(-1), Q(1)), Kernel.jacobi_symmetric(Q(1, 2)), M + M.T, ((Q(0), Q(1, 3), RatMat.diag(0, 1)),))
    text = S.dumps(S.enc_weight(W))
    back = S.dec_weight(S.loads(text))
    assert back == W
    assert S.dumps(S.enc_weight(back)) == text
