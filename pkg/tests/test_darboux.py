from fractions import Fraction

import pytest
from conftest import polymats
from hypothesis import given

from exmop.algebra import Poly, Q, RatMat
from exmop.darboux import (
    DarbouxError,
    basis_inner_product,
    build_annihilator,
    common_right_factor_degree,
    delta_extension,
    eq3f_check,
    exceptional_weight,
    factorize,
    gram_schmidt,
    kernel_factorization_check,
    reduced_inner_product,
    transform,
)
from exmop.diffops import DiffOp, apply, compose, eigencheck
from exmop.families.classical import hermite_family
from exmop.families.examples import ex2_nonpolynomial_seed, ex3_closed_form, ex4_closed_form, ex5_closed_form
from exmop.weights import ExactMatrix

t = Poly.t()


def monomial_probes(kmax=5):
    for k in range(kmax + 1):
        for i in range(2):
            for j in range(2):
                yield RatMat.unit(i, j, 2, t**k)


def test_polynomial_seed_annihilated(ex1):
    fam, A = ex1.data["family"], ex1.data["A"]
    assert apply(A, fam.poly(1)).is_zero()
    assert A.coeff(0) == -RatMat.identity(2)


def test_nonpolynomial_seed_annihilated():
    from exmop.families.classical import laguerre_family

    fam = laguerre_family(1, 0)
    A = build_annihilator(fam.extras["seed"], fam.extras["U"])
    assert apply(A, fam.extras["seed"]).is_zero()


def test_one_step_annihilator_closed_form():
    # closed-form coefficients at the rescaled parameter 4/5
    b = Q(4, 5)
    b2 = b * b
    seed, U = ex2_nonpolynomial_seed(b)
    A = build_annihilator(seed, U)
    A1 = RatMat(
        [
            [((3 * b2 * b2 - 4 * b2 + 2) * t * t - b2 + 1) / (2 * (3 * b2 - 2) * (b2 - 1)), b * t * (2 * b2 * t * t - 3 * b2 + 4) / (8 * (b2 - 1))],
            [b * t / (2 * (b2 - 1)), (2 * t * t + 1) * (3 * b2 - 2) / (8 * (b2 - 1))],
        ]
    )
    assert A.coeff(1) == A1 and A.coeff(0) == -U
    assert apply(A, seed).is_zero()


def test_annihilator_errors():
    with pytest.raises(DarbouxError):
        build_annihilator(RatMat([[1, 2], [3, 4]]), RatMat.identity(2))
    with pytest.raises(DarbouxError):
        build_annihilator(RatMat.identity(2) * t, RatMat([[1, 1], [1, 1]]))


def test_factorize_kernel_operator(ex1):
    fact = factorize(ex1.data["D0"], ex1.data["A"])
    assert fact.Psi.is_zero()
    assert fact.B.coeff(1) == ex1.data["A"].coeff(1).inverse() @ ex1.data["D0"].coeff(2)


def test_factorize_eigen_seed():
    fam = hermite_family(2, 1)
    P1 = fam.poly(1)
    D1 = fam.operators["D1"]
    A = build_annihilator(P1, RatMat.identity(2))
    gamma = RatMat.diag(-4, -2)
    fact = factorize(D1, A, seed=P1, gamma=gamma)
    assert fact.Psi == -(P1.inverse() @ gamma @ P1)
    for y in monomial_probes():
        assert apply(fact.B, apply(A, y)) - y @ fact.Psi == apply(D1, y)
    with pytest.raises(DarbouxError):
        factorize(D1, A, seed=P1, gamma=RatMat.diag(-4, -4))


def test_factorize_trivial_annihilator():
    fam = hermite_family(2, 1)
    D = fam.operators["D1"]
    fact = factorize(D, DiffOp([RatMat.zero(2), RatMat.identity(2)]))
    assert fact.B == DiffOp([D.coeff(1), D.coeff(2)])
    assert fact.Psi == -D.coeff(0)
    with pytest.raises(DarbouxError):
        factorize(D, DiffOp([RatMat.identity(2), RatMat([[t, t], [1, 1]])]))


def test_transform_with_zero_psi_is_swap(ex1):
    fact = factorize(ex1.data["D0"], ex1.data["A"])
    assert transform(ex1.data["D0"], fact) == compose(fact.A, fact.B)


def test_transform_point_mass_operator():
    a = Q(2)
    fam = hermite_family(a, 1 - a * a)
    A = build_annihilator(fam.poly(1), RatMat.identity(2))
    D = fam.operator({"D1": 1, "D2": 4 / (a * a), "I": 4 - 4 / (a * a)})
    assert transform(D, factorize(D, A)) == ex5_closed_form(a, 1)["Dhat"]


def test_eq3f():
    A = DiffOp([-RatMat.identity(2), RatMat.identity(2)])
    assert eq3f_check(A, RatMat.zero(2)).ok
    res = eq3f_check(A, RatMat.identity(2) * t)
    assert not res.ok and res.residual == RatMat.identity(2)
    fam = hermite_family(2, -3)
    P1 = fam.poly(1)
    A = build_annihilator(P1, RatMat.identity(2))
    D1 = fam.operators["D1"]
    fact = factorize(D1, A, seed=P1, gamma=eigencheck(D1, P1).gamma)
    assert eq3f_check(A, fact.Psi).ok


def test_self_adjoint_factorization(ex1):
    fam = ex1.data["family"]
    P1 = fam.poly(1)
    assert kernel_factorization_check(ex1.data["D0"], P1, fam.weight).ok
    bad = P1 + RatMat.diag(0, t)
    res = kernel_factorization_check(ex1.data["D0"], bad, fam.weight, require_kernel=False)
    assert not res.ok and not res.residual.is_zero()
    with pytest.raises(DarbouxError):
        kernel_factorization_check(ex1.data["D0"], bad, fam.weight)


def test_self_adjoint_factorization_laguerre():
    from exmop.families.classical import laguerre_family

    fam = laguerre_family(1, 0)
    assert kernel_factorization_check(fam.operators["D1"], fam.extras["seed"], fam.weight).ok


def test_exceptional_weights_closed_form(ex1, ex3, ex4):
    from exmop.families.examples import ex1_closed_form_weight

    assert ex1.weight.density == ex1_closed_form_weight(2)
    assert ex3.weight.density == ex3_closed_form(1, 0)["weight_density"]
    closed = ex4_closed_form(Fraction(1, 2), 3)["weight"]
    assert ex4.weight.as_quasi().proportional_on(closed, ex4.weight.support) == 1


def test_exceptional_weight_rejects_zero_on_support():
    # P1 at xi = 1 has det 36 t^2 - 16 at a = 4: real zeros, so the weight has poles
    fam = hermite_family(4, 1)
    P1 = fam.poly(1)
    D = fam.operator({"D1": 1, "D2": Q(-4, 18), "I": 4})
    with pytest.raises(DarbouxError):
        exceptional_weight(P1, P1.deriv(), D.coeff(2), fam.weight)


def test_delta_extension():
    a = Q(2)
    Dx = ex5_closed_form(a, 1)["Dhat"]
    from exmop.families.examples import example1

    w = example1(a, max_n=2, numeric_checks=False).weight.normalized_unit()
    M = RatMat.diag(0, 1)
    out = delta_extension(Dx, w, 0, M, 1)
    assert len(out.point_masses) == 1 and out.point_masses[0].matrix == M
    assert delta_extension(Dx, w, 0, M, 0) is w
    with pytest.raises(DarbouxError):
        delta_extension(Dx, w, 0, RatMat.identity(2), 1)


def test_gram_schmidt_keeps_orthogonal_input(ex1):
    basis = ex1.transform.polys
    gram = ex1.data["norms"]
    out = gram_schmidt(basis, basis_inner_product(gram, basis))
    assert out == basis


def test_gram_schmidt_point_mass(ex5):
    for z, res in ex5.items():
        P2 = res.data["monic"][2]
        a = Q(2)
        assert P2[1, 1].as_poly().coeff(0) == 1 / (2 * (z * (a * a - 2) ** 2 + 1))
        assert res.data["monic"][3] == ex5[0].data["monic"][3]


def test_gram_schmidt_singular_block():
    basis = {0: RatMat.identity(2)}
    ip = lambda P, Qm: ExactMatrix.from_ratmat(RatMat.diag(1, 0))  # noqa: E731
    with pytest.raises(DarbouxError):
        gram_schmidt(basis, ip)


def test_reduction_identity(ex1):
    fam, D0 = ex1.data["family"], ex1.data["D0"]
    for n in (0, 2, 3):
        for m in (0, 2, 3):
            g = eigencheck(D0, fam.poly(m)).gamma
            red = reduced_inner_product(fam.poly(n), fam.poly(m), g, fam.weight)
            from exmop.weights import exact_inner_product

            assert red == (-exact_inner_product(fam.poly(n), fam.poly(m), fam.weight)).rmul(g.T)


@pytest.mark.parametrize("name", ["ex1", "ex2", "ex3", "ex4"])
def test_intertwining(name, request):
    res = request.getfixturevalue(name)
    for n, P in res.transform.polys.items():
        ev = eigencheck(res.transform.Dhat, P)
        assert ev.ok and ev.gamma == res.transform.eigenvalues[n]


@pytest.mark.parametrize("name", ["ex1", "ex2", "ex3", "ex4"])
def test_no_common_right_factor(name, request):
    res = request.getfixturevalue(name)
    polys = [P for n, P in res.transform.polys.items() if n <= 6 and n not in res.transform.gaps]
    assert common_right_factor_degree(polys) == 0


@given(polymats(2, 2))
def test_factorization_identity_on_random_first_order(U):
    fam = hermite_family(2, 1)
    if not U.det():
        return
    P1 = fam.poly(1)
    A = build_annihilator(P1, U)
    if not A.coeff(1).det():
        return
    for name in ("D1", "D2"):
        D = fam.operators[name]
        fact = factorize(D, A)
        for y in monomial_probes(3):
            assert apply(fact.B, apply(A, y)) - y @ fact.Psi == apply(D, y)
        assert apply(A, P1).is_zero()
