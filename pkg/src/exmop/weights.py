"""Weight specifications, exact moments and structural probes.

Integrals against the three classical kernels are returned as rational
multiples of an opaque transcendental unit:

=====================  =============  =====================
kernel                 support        unit of ``m_0``
=====================  =============  =====================
``exp(-t^2)``          whole line     ``sqrt(pi)``
``exp(-t) t^alpha``    ``[0, inf)``   ``Gamma(alpha+1)``
``(1-t^2)^gamma``      ``[-1, 1]``    ``B(1/2,gamma+1)``
=====================  =============  =====================
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import Poly, Q, RatMat
from .kernels import Kernel, QuasiRatMat, side_sign


class UnsupportedWeight(ValueError):
    pass


# ---------------------------------------------------------------------------
# unit-tagged exact values


@dataclass(frozen=True)
class ExactValue:
    coeff: Fraction
    unit: str = "1"

    def __post_init__(self):
        object.__setattr__(self, "coeff", Q(self.coeff))

    def __eq__(self, other):
        if not isinstance(other, ExactValue):
            return NotImplemented
        if not self.coeff and not other.coeff:
            return True
        return self.coeff == other.coeff and self.unit == other.unit

    def __hash__(self):
        return hash((self.coeff, self.unit if self.coeff else ""))

    def __add__(self, other: ExactValue) -> ExactValue:
        if not other.coeff:
            return self
        if not self.coeff:
            return other
        if self.unit != other.unit:
            raise ValueError(f"cannot add values in units {self.unit} and {other.unit}")
        return ExactValue(self.coeff + other.coeff, self.unit)

    def __mul__(self, r) -> ExactValue:
        return ExactValue(self.coeff * Q(r), self.unit)

    __rmul__ = __mul__

    def __str__(self):
        return str(self.coeff) if self.unit == "1" else f"{self.coeff}*{self.unit}"


@dataclass(frozen=True)
class ExactMatrix:
    """A constant rational matrix times a single transcendental unit."""

    entries: tuple
    unit: str = "1"

    def __post_init__(self):
        rows = tuple(tuple(Q(x) for x in r) for r in self.entries)
        object.__setattr__(self, "entries", rows)

    @classmethod
    def zero(cls, n: int = 2, unit: str = "1") -> ExactMatrix:
        return cls(tuple((0,) * n for _ in range(n)), unit)

    @classmethod
    def from_ratmat(cls, m: RatMat, unit: str = "1") -> ExactMatrix:
        return cls(m.const_entries(), unit)

    @property
    def n(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return all(not x for r in self.entries for x in r)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.entries == other.entries and self.unit == other.unit

    def __hash__(self):
        return hash((self.entries, "" if self.is_zero() else self.unit))

    def __getitem__(self, ij):
        i, j = ij
        return ExactValue(self.entries[i][j], self.unit)

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.unit != other.unit:
            raise ValueError(f"cannot add matrices in units {self.unit} and {other.unit}")
        return ExactMatrix(
            tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.entries, other.entries)),
            self.unit,
        )

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, r) -> ExactMatrix:
        r = Q(r)
        return ExactMatrix(tuple(tuple(x * r for x in row) for row in self.entries), self.unit)

    def as_ratmat(self) -> RatMat:
        return RatMat(self.entries)

    def lmul(self, m: RatMat) -> ExactMatrix:
        """Constant rational matrix times self."""
        return ExactMatrix((m @ self.as_ratmat()).const_entries(), self.unit)

    def rmul(self, m: RatMat) -> ExactMatrix:
        return ExactMatrix((self.as_ratmat() @ m).const_entries(), self.unit)

    @property
    def T(self) -> ExactMatrix:
        return ExactMatrix(tuple(zip(*self.entries)), self.unit)

    def with_unit(self, unit: str) -> ExactMatrix:
        return ExactMatrix(self.entries, unit)

    def __str__(self):
        body = "[" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.entries) + "]"
        return body if self.unit == "1" else f"{self.unit}*{body}"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# weight specifications


@dataclass(frozen=True)
class PointMass:
    t0: Fraction
    zeta: Fraction
    matrix: RatMat

    def __post_init__(self):
        object.__setattr__(self, "t0", Q(self.t0))
        object.__setattr__(self, "zeta", Q(self.zeta))
        if not self.matrix.is_const():
            raise ValueError("point-mass matrix must be constant")


@dataclass(frozen=True)
class WeightSpec:
    """``kernel(t) * density(t) dt`` on ``support`` plus point masses.

    With ``unit_normalized`` set, the continuous part is understood divided
    by the kernel's transcendental unit, so exact integrals come out rational
    and can be combined with point masses.
    """

    support: tuple
    kernel: Kernel
    density: RatMat
    point_masses: tuple = ()
    unit_normalized: bool = False

    def __post_init__(self):
        lo, hi = self.support
        lo = None if lo is None else Q(lo)
        hi = None if hi is None else Q(hi)
        if lo is not None and hi is not None and lo >= hi:
            raise ValueError("empty support")
        object.__setattr__(self, "support", (lo, hi))
        pms = tuple(pm if isinstance(pm, PointMass) else PointMass(*pm) for pm in self.point_masses)
        object.__setattr__(self, "point_masses", pms)

    @property
    def n(self) -> int:
        return self.density.n

    def as_quasi(self) -> QuasiRatMat:
        return QuasiRatMat(self.kernel, self.density)

    def is_symmetric(self) -> bool:
        return self.density.is_symmetric()

    def with_point_mass(self, t0, zeta, M: RatMat) -> WeightSpec:
        if not Q(zeta):
            return self
        return WeightSpec(
            self.support,
            self.kernel,
            self.density,
            self.point_masses + (PointMass(t0, zeta, M),),
            self.unit_normalized,
        )

    def scaled(self, c) -> WeightSpec:
        return WeightSpec(self.support, self.kernel, self.density * Q(c), self.point_masses, self.unit_normalized)

    def normalized_unit(self) -> WeightSpec:
        return WeightSpec(self.support, self.kernel, self.density, self.point_masses, True)

    def eval_float(self, x: float):
        """Density times kernel at a float point (point masses excluded)."""
        k = self.kernel.eval_float(x)
        if self.unit_normalized:
            k /= unit_value_float(kernel_family(self)[1])
        return [[k * v for v in row] for row in self.density.eval_float(x)]


# ---------------------------------------------------------------------------
# classical kernel recognition and moment tables


def kernel_family(w: WeightSpec):
    """Classify ``(support, kernel)`` as one of the closed-form families.

    Returns ``(kind, unit, param)`` with kind in {hermite, laguerre, jacobi}.
    """
    k = w.kernel
    lo, hi = w.support
    if lo is None and hi is None and k.exp_arg == Poly([0, 0, -1]) and not k.powers:
        return "hermite", "sqrt(pi)", None
    if lo == 0 and hi is None and k.exp_arg == Poly([0, -1]):
        if not k.powers:
            alpha = Fraction(0)
        elif len(k.powers) == 1 and k.powers[0][0] == 0:
            alpha = k.powers[0][1]
        else:
            alpha = None
        if alpha is not None and alpha > -1:
            return "laguerre", f"Gamma({alpha + 1})", alpha
    if lo == -1 and hi == 1 and not k.exp_arg:
        pw = dict(k.powers)
        if not pw:
            gamma = Fraction(0)
        elif set(pw) == {-1, 1} and pw[-1] == pw[1]:
            gamma = pw[1]
        else:
            gamma = None
        if gamma is not None and gamma > -1:
            return "jacobi", f"B(1/2,{gamma + 1})", gamma
    raise UnsupportedWeight(f"no closed-form moments for kernel {k.describe()} on {w.support}")


@lru_cache(maxsize=None)
def _moment_table(kind: str, param, kmax: int) -> tuple:
    m = [Fraction(0)] * (kmax + 1)
    if kind == "hermite":
        m[0] = Fraction(1)
        for k in range(kmax - 1):
            m[k + 2] = m[k] * Fraction(k + 1, 2)
    elif kind == "laguerre":
        m[0] = Fraction(1)
        for k in range(1, kmax + 1):
            m[k] = m[k - 1] * (param + k)
    elif kind == "jacobi":
        m[0] = Fraction(1)
        for k in range(0, kmax - 1, 2):
            j = k // 2
            m[k + 2] = m[k] * Fraction(2 * j + 1) / (2 * j + 2 * param + 3)
    else:
        raise UnsupportedWeight(kind)
    return tuple(m)


def scalar_moments(kind: str, param, kmax: int) -> tuple:
    """Rational multipliers ``m_k / m_0`` for ``k = 0..kmax``."""
    return _moment_table(kind, None if param is None else Q(param), kmax)


def unit_value_float(unit: str) -> float:
    """Numeric value of a unit symbol (used only by numeric cross-checks)."""
    import math

    if unit == "1":
        return 1.0
    if unit == "sqrt(pi)":
        return math.sqrt(math.pi)
    if unit.startswith("Gamma("):
        return math.gamma(float(Fraction(unit[6:-1])))
    if unit.startswith("B(1/2,"):
        b = float(Fraction(unit[6:-1]))
        return math.gamma(0.5) * math.gamma(b) / math.gamma(b + 0.5)
    raise ValueError(unit)


def unit_value_mp(unit: str):
    import mpmath as mp

    def mpq(s):
        f = Fraction(s)
        return mp.mpf(f.numerator) / f.denominator

    if unit == "1":
        return mp.mpf(1)
    if unit == "sqrt(pi)":
        return mp.sqrt(mp.pi)
    if unit.startswith("Gamma("):
        return mp.gamma(mpq(unit[6:-1]))
    if unit.startswith("B(1/2,"):
        return mp.beta(mp.mpf(1) / 2, mpq(unit[6:-1]))
    raise ValueError(unit)


def _require_poly_density(w: WeightSpec):
    if not w.density.is_poly():
        raise UnsupportedWeight("rational density: use numeric_inner_product instead")


def _integrate_polymat(H: RatMat, w: WeightSpec) -> ExactMatrix:
    """Exact integral of ``H(t) * kernel`` for a polynomial matrix ``H``."""
    kind, unit, param = kernel_family(w)
    n = H.n
    if H.is_zero():
        return ExactMatrix.zero(n)
    deg = H.degree
    m = scalar_moments(kind, param, max(deg, 0))
    rows = []
    for r in H.rows:
        rows.append(tuple(sum((c * m[k] for k, c in enumerate(x.num.c)), Fraction(0)) for x in r))
    return ExactMatrix(tuple(rows), "1" if w.unit_normalized else unit)


def _point_mass_terms(P: RatMat, Q_: RatMat, w: WeightSpec) -> ExactMatrix:
    acc = ExactMatrix.zero(P.n)
    for pm in w.point_masses:
        term = P(pm.t0) @ pm.matrix @ Q_(pm.t0).T * pm.zeta
        acc = acc + ExactMatrix.from_ratmat(term, "1")
    return acc


def moments(w: WeightSpec, k: int) -> ExactMatrix:
    """Exact ``k``-th moment matrix ``int t^k dW``, point masses included."""
    _require_poly_density(w)
    t = Poly.t()
    cont = _integrate_polymat(w.density * t**k, w)
    n = w.n
    pts = ExactMatrix.zero(n)
    for pm in w.point_masses:
        pts = pts + ExactMatrix.from_ratmat(pm.matrix * (pm.zeta * pm.t0**k), "1")
    return cont + pts


def exact_inner_product(P: RatMat, Qm: RatMat, w: WeightSpec) -> ExactMatrix:
    """``int P dW Q^T`` for polynomial ``P``, ``Q`` and polynomial density."""
    _require_poly_density(w)
    if not (P.is_poly() and Qm.is_poly()):
        raise ValueError("exact_inner_product expects polynomial matrices")
    H = P @ w.density @ Qm.T
    return _integrate_polymat(H, w) + _point_mass_terms(P, Qm, w)


# ---------------------------------------------------------------------------
# structural probes


def decay_check(f: QuasiRatMat, endpoint, max_n: int | None = None) -> bool:
    """Whether ``t^n f(t) -> 0`` at ``endpoint`` for every ``0 <= n <= max_n``.

    ``endpoint`` is ``"+inf"``, ``"-inf"`` or a rational.  ``max_n=None`` asks
    for every n.  Decided structurally from exponents, never numerically.
    """
    if f.body.is_zero():
        return True
    k = f.kernel
    if endpoint in ("+inf", "-inf"):
        sgn = 1 if endpoint == "+inf" else -1
        e = k.exp_arg
        if e.degree >= 1:
            lead = e.lc * (sgn ** e.degree)
            return lead < 0
        growth = max(x.degree for x in f.body.entries() if x) + sum(g for _, g in k.powers)
        if max_n is None:
            return False
        return growth + max_n < 0
    c = Q(endpoint)
    order = sum((g for cc, g in k.powers if cc == c), Fraction(0))
    order += min(x.valuation_at(c) for x in f.body.entries() if x)
    return order > 0


@dataclass(frozen=True)
class PositivityResult:
    positive: bool
    witness: Fraction | None = None

    def __bool__(self):
        return self.positive


def _leading_minors_positive(m: RatMat) -> bool:
    vals = m.const_entries()
    n = len(vals)
    for k in range(1, n + 1):
        sub = RatMat([row[:k] for row in vals[:k]])
        if sub.det().const_value() <= 0:
            return False
    return True


def positivity_check(w: WeightSpec, samples) -> PositivityResult:
    """Positive definiteness of the density at exact sample points.

    The kernel is positive on the open support, so only the density matters.
    """
    lo, hi = w.support
    for s in samples:
        s = Q(s)
        if (lo is not None and s <= lo) or (hi is not None and s >= hi):
            raise ValueError(f"sample {s} outside the open support")
        val = w.density(s)
        if not _leading_minors_positive(val):
            return PositivityResult(False, s)
    return PositivityResult(True)


@dataclass(frozen=True)
class ReducibilityResult:
    commutes: bool
    witness: tuple | None = None


def reducibility_probe(w: WeightSpec, base, pairs) -> ReducibilityResult:
    """Look for a sample pair showing the weight does not reduce to scalars.

    With ``X(t) = W(base)^{-1} W(t)``, a reducible weight has all ``X(t)``
    commuting.  ``X`` is similar to the congruence-normalized weight, so the
    test is equivalent and stays over the rationals.
    """
    base = Q(base)
    try:
        W0inv = w.density(base).inverse()
    except (ZeroDivisionError, ArithmeticError) as exc:
        raise ValueError(f"density singular at base point {base}") from exc
    for t, s in pairs:
        Xt = W0inv @ w.density(Q(t))
        Xs = W0inv @ w.density(Q(s))
        if Xt @ Xs != Xs @ Xt:
            return ReducibilityResult(False, (Q(t), Q(s)))
    return ReducibilityResult(True)


def kernel_sign_ok(k: Kernel, support) -> bool:
    """True when no power-factor center lies strictly inside ``support``."""
    return all(side_sign(c, support) != 0 for c, _ in k.powers)


__all__ = [
    "ExactMatrix",
    "ExactValue",
    "PointMass",
    "PositivityResult",
    "ReducibilityResult",
    "UnsupportedWeight",
    "WeightSpec",
    "decay_check",
    "exact_inner_product",
    "kernel_family",
    "moments",
    "positivity_check",
    "reducibility_probe",
    "scalar_moments",
    "unit_value_float",
    "unit_value_mp",
]
