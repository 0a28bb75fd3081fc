"""2x2 classical matrix families: Hermite, Laguerre and Gegenbauer type.

Each constructor returns a :class:`ClassicalFamily` bundling the weight, the
orthogonal polynomials, a basis of second-order operators having them as
eigenfunctions and (where known in closed form) eigenvalues and norms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ..algebra import Poly, Q, RatMat
from ..diffops import DiffOp
from ..kernels import Kernel, QuasiRatMat
from ..weights import ExactMatrix, WeightSpec
from .scalar import hermite, jacobi_monic, laguerre_monic

t = Poly.t()


@dataclass
class ClassicalFamily:
    name: str
    params: dict
    weight: WeightSpec
    poly_fn: Callable[[int], RatMat]
    operators: dict
    eigenvalue_fn: Callable | None = None
    norm_fn: Callable[[int], ExactMatrix] | None = None
    signed: bool = False
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        self._cache = {}

    def poly(self, n: int) -> RatMat:
        if n not in self._cache:
            self._cache[n] = self.poly_fn(n)
        return self._cache[n]

    def polys(self, max_n: int) -> dict:
        return {n: self.poly(n) for n in range(max_n + 1)}

    def eigenvalue(self, n: int, coeffs) -> RatMat:
        if self.eigenvalue_fn is None:
            raise NotImplementedError(f"no closed-form eigenvalues for {self.name}")
        return self.eigenvalue_fn(n, coeffs)

    def norm(self, n: int) -> ExactMatrix:
        if self.norm_fn is None:
            raise NotImplementedError(f"no closed-form norms for {self.name}")
        return self.norm_fn(n)

    def operator(self, coeffs) -> DiffOp:
        """Linear combination ``sum c_name * D_name`` of the basis operators."""
        acc = None
        for name, c in coeffs.items():
            c = Q(c)
            if not c:
                continue
            term = self.operators[name] * c
            acc = term if acc is None else acc + term
        return acc if acc is not None else DiffOp([RatMat.zero(self.weight.n)])


# ---------------------------------------------------------------------------
# Hermite type: exp(-t^2) [[xi + a^2 t^2, a t], [a t, 1]] on the real line


def hermite_weight(a, xi) -> WeightSpec:
    a, xi = Q(a), Q(xi)
    dens = RatMat([[xi + a * a * t * t, a * t], [a * t, 1]])
    return WeightSpec((None, None), Kernel.gaussian(), dens)


def hermite_poly(n: int, a, xi) -> RatMat:
    a, xi = Q(a), Q(xi)
    hn = hermite(n)
    out = RatMat([[hn, 0], [0, hn * xi]])
    if n:
        h = hermite(n - 1) * n
        out = out + RatMat([[0, -a * h], [-a * h, a * a * t * h]])
    return out


def hermite_operators(a, xi) -> dict:
    a, xi = Q(a), Q(xi)
    a2 = a * a
    Z = RatMat.zero(2)
    D1 = DiffOp([RatMat([[-2, 0], [0, 0]]), RatMat([[-2 * t, 2 * a], [0, -2 * t]]), RatMat.identity(2)])
    D2 = DiffOp(
        [
            RatMat([[0, 0], [0, xi]]),
            RatMat([[0, a * xi / 2], [-a / 2, a2 * t / 2]]),
            RatMat([[-a2 / 4, a2 * a * t / 4], [0, 0]]),
        ]
    )
    D3 = DiffOp(
        [
            RatMat([[0, xi * (a2 + 2 * xi) / a], [0, 0]]),
            RatMat([[-a2 - xi, a * (a2 + 2 * xi) * t], [0, xi]]),
            RatMat([[-a2 * t / 2, a2 * a * t * t / 2], [-a / 2, a2 * t / 2]]),
        ]
    )
    D4 = DiffOp([RatMat([[0, 0], [1, 0]]), RatMat([[a / 2, 0], [0, -a / 2]]), RatMat([[0, -a2 / 4], [0, 0]])])
    I = DiffOp([RatMat.identity(2), Z, Z])
    return {"D1": D1, "D2": D2, "D3": D3, "D4": D4, "I": I}


def _u_tuple(coeffs) -> tuple:
    if isinstance(coeffs, dict):
        names = ("D1", "D2", "D3", "D4", "I")
        return tuple(Q(coeffs.get(k, 0)) for k in names)
    return tuple(Q(c) for c in coeffs)


def hermite_eigenvalue(n: int, coeffs, a, xi) -> RatMat:
    """Eigenvalue of ``u5 I + sum u_i D_i`` on ``P_n``; coeffs = (u1..u5) or a name dict."""
    a, xi = Q(a), Q(xi)
    u1, u2, u3, u4, u5 = _u_tuple(coeffs)
    a2 = a * a
    return RatMat(
        [
            [-2 * (n + 1) * u1 + u5, ((n + 1) * a2 + 2 * xi) * u3 / a],
            [(n * a2 / 2 + xi) * u4, -2 * n * u1 + (n * a2 / 2 + xi) * u2 + u5],
        ]
    )


def hermite_norm(n: int, a, xi) -> ExactMatrix:
    a, xi = Q(a), Q(xi)
    from math import factorial

    s = Fraction(2**n * factorial(n))
    return ExactMatrix(((s * (xi + a * a * (n + 1) / 2), 0), (0, s * xi * (xi + a * a * n / 2))), "sqrt(pi)")


def hermite_family(a, xi) -> ClassicalFamily:
    a, xi = Q(a), Q(xi)
    if not a:
        raise ValueError("hermite family needs a != 0")
    if not xi:
        raise ValueError("hermite family needs xi != 0")
    ops = hermite_operators(a, xi)
    return ClassicalFamily(
        name="hermite",
        params={"a": a, "xi": xi},
        weight=hermite_weight(a, xi),
        poly_fn=lambda n: hermite_poly(n, a, xi),
        operators=ops,
        eigenvalue_fn=lambda n, u: hermite_eigenvalue(n, u, a, xi),
        norm_fn=lambda n: hermite_norm(n, a, xi),
        signed=xi < 0,
    )


# ---------------------------------------------------------------------------
# Laguerre type: exp(-t) t^alpha [[t + a^2 t^2, a t], [a t, 1]] on [0, inf)


def laguerre_weight(a, alpha) -> WeightSpec:
    a, alpha = Q(a), Q(alpha)
    dens = RatMat([[t + a * a * t * t, a * t], [a * t, 1]])
    return WeightSpec((0, None), Kernel.laguerre(alpha), dens)


def laguerre_poly(n: int, a, alpha) -> RatMat:
    a, alpha = Q(a), Q(alpha)
    l = lambda k, al: laguerre_monic(k, al) if k >= 0 else Poly()  # noqa: E731
    ln1 = l(n, alpha + 1)
    prev = l(n - 1, alpha + 1) * n
    return RatMat(
        [
            [ln1, a * (l(n + 1, alpha) - ln1 * t)],
            [-a * prev, a * a * prev * t + l(n, alpha)],
        ]
    )


def laguerre_operators(a, alpha) -> dict:
    a, al = Q(a), Q(alpha)
    Z = RatMat.zero(2)
    D1 = DiffOp(
        [
            RatMat([[-al - 3, a * (al + 1)], [0, -al - 2]]),
            RatMat([[al + 2 - t, a * t], [0, al + 1 - t]]),
            RatMat([[t, 0], [0, t]]),
        ]
    )
    D2 = DiffOp(
        [
            RatMat([[1 / (a * a), -(al + 1) / a], [0, 0]]),
            RatMat([[al + 2, -(1 + a * a * (al + 2)) * t / a], [1 / a, -t]]),
            RatMat([[t, -a * t * t], [0, 0]]),
        ]
    )
    D3 = DiffOp(
        [
            RatMat([[-(al + 1) / a, (al + 1) * (a * a * al - 1) / (a * a)], [-1 / (a * a), (al + 1) / a]]),
            RatMat(
                [
                    [(2 * (a * a + 1) * (2 + al) - t) / a, -t / (a * a) - 2 * (a * a * (al + 2) + 1) * t - (al + 2) * (al + 1)],
                    [1 / (a * a), (t - 2 * (al + 1)) / a],
                ]
            ),
            RatMat(
                [
                    [a * t * (al + 5) + 2 * t / a, -a * a * t * t * (al + 5) - t * (2 * al + t + 4)],
                    [2 + al, -a * t * (al + 2) - 2 * t / a],
                ]
            ),
            RatMat([[a * t * t, -t * t * (a * a * t + 1)], [t, -a * t * t]]),
        ]
    )
    I = DiffOp([RatMat.identity(2), Z, Z])
    return {"D1": D1, "D2": D2, "D3": D3, "I": I}


def laguerre_family(a, alpha) -> ClassicalFamily:
    a, alpha = Q(a), Q(alpha)
    if not a:
        raise ValueError("laguerre family needs a != 0")
    if alpha <= -1:
        raise ValueError("laguerre family needs alpha > -1")
    ops = laguerre_operators(a, alpha)
    # seed in the kernel of D1 and its companion matrix U
    seed_body = RatMat([[-(t + alpha + 2), (t + alpha + 2) * a * t], [0, -(alpha + 1 + t)]])
    seed = QuasiRatMat(Kernel(Poly([0, 1])), seed_body)
    U = RatMat([[t + alpha + 3, -a * (t - 2)], [0, t + alpha + 2]])
    return ClassicalFamily(
        name="laguerre",
        params={"a": a, "alpha": alpha},
        weight=laguerre_weight(a, alpha),
        poly_fn=lambda n: laguerre_poly(n, a, alpha),
        operators=ops,
        extras={"seed": seed, "U": U},
    )


# ---------------------------------------------------------------------------
# Gegenbauer type: (1-t^2)^(r/2-1) [[a(t^2-1)+r, -rt], [-rt, (r-a)(t^2-1)+r]]


def gegenbauer_admissible(a, r) -> str | None:
    """Name of the parameter branch that makes the exceptional weight positive."""
    a, r = Q(a), Q(r)
    if 0 < a < 1:
        if a < r < a + 1:
            return "0<a<1, a<r<a+1"
        if r > a + 2:
            return "0<a<1, r>a+2"
    if 1 < a < 2 and 1 + a < r < a + 2:
        return "1<a<2, a+1<r<a+2"
    if a > 2 and a < r < a + 1:
        return "a>2, a<r<a+1"
    return None


def gegenbauer_weight(a, r) -> WeightSpec:
    a, r = Q(a), Q(r)
    dens = RatMat([[a * (t * t - 1) + r, -r * t], [-r * t, (r - a) * (t * t - 1) + r]])
    return WeightSpec((-1, 1), Kernel.jacobi_symmetric(r / 2 - 1), dens)


def gegenbauer_poly(n: int, a, r, jacobi_param) -> RatMat:
    a, r = Q(a), Q(r)
    p = jacobi_monic(n, jacobi_param, jacobi_param)
    dp = p.deriv()
    return RatMat([[dp, (r - a) * p + dp * t], [a * p + dp * t, dp]])


def gegenbauer_operator(a, r) -> DiffOp:
    a, r = Q(a), Q(r)
    F2 = RatMat(
        [
            [(1 - a) * (2 + a - r) * t * t + (a - 2) * (a - r + 1), t * (r - 2 * a)],
            [t * (2 * a - r), (2 - a) * (a + 1 - r) * t * t + (a - 1) * (a - r + 2)],
        ]
    )
    F1 = RatMat(
        [
            [t * (1 - a) * (2 + a - r) * (r + 2), r * r - a * r - 2 * a - 2 * r + 4],
            [a * r + 2 * a - 4 * r + 4, t * (2 - a) * (a - r + 1) * (r + 2)],
        ]
    )
    F0 = RatMat.diag(2 * (r - 1) * (1 - a) * (2 - r + a), 2 * (r - 1) * (2 - a) * (a - r + 1))
    return DiffOp([F0, F1, F2])


def gegenbauer_family(a, r, jacobi_param=None) -> ClassicalFamily:
    """``jacobi_param`` defaults to ``r/2``, the value making ``P_n`` eigenfunctions."""
    a, r = Q(a), Q(r)
    if r <= 0 or not (0 < a < r) or a in (1, 2, r - 1, r - 2):
        raise ValueError(f"excluded Gegenbauer parameters a={a}, r={r}")
    jp = r / 2 if jacobi_param is None else Q(jacobi_param)
    W = gegenbauer_weight(a, r)
    Dt = gegenbauer_operator(a, r)
    Winv = W.as_quasi().inverse()
    seed = RatMat([[t, -1 / (a - r + 1)], [1 / (a - 1), t]]) @ Winv
    U = RatMat(
        [
            [(1 - r) * t * t + (r + 1 - a) / (a + 1 - r), 2 * t * (1 - r) * (a + 2 - r) / ((a - 2) * (a + 1 - r))],
            [2 * t * (r - 1) * (a - 2) / ((a - 1) * (a + 2 - r)), -(t * t * (a * r - a - r + 1) + a + 1) / (a - 1)],
        ]
    )
    return ClassicalFamily(
        name="gegenbauer",
        params={"a": a, "r": r},
        weight=W,
        poly_fn=lambda n: gegenbauer_poly(n, a, r, jp),
        operators={"Dtilde": Dt},
        extras={"seed": seed, "U": U, "admissible": gegenbauer_admissible(a, r), "jacobi_param": jp},
    )


__all__ = [
    "ClassicalFamily",
    "gegenbauer_admissible",
    "gegenbauer_family",
    "gegenbauer_operator",
    "gegenbauer_weight",
    "hermite_eigenvalue",
    "hermite_family",
    "hermite_norm",
    "hermite_operators",
    "hermite_poly",
    "hermite_weight",
    "laguerre_family",
    "laguerre_operators",
    "laguerre_poly",
    "laguerre_weight",
]
