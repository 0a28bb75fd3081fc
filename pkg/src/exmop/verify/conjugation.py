"""Diagonal equivalences ``B_n = L_n P_n R`` between two matrix polynomial families."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra import RatFunc, RatMat


@dataclass
class ConjugationResult:
    ok: bool
    L: dict = field(default_factory=dict)
    R: RatMat | None = None
    multipliers: dict = field(default_factory=dict)
    failure: str | None = None

    def __bool__(self):
        return self.ok


def _entry_ratio(b: RatFunc, p: RatFunc):
    """Constant ``c`` with ``b = c p``; ``False`` when none exists."""
    if p.is_zero():
        return None if b.is_zero() else False
    q = b / p
    return q.const_value() if q.is_const() else False


def conjugation_check(family_a: dict, family_b: dict, indices=None, shape: str = "diagonal-left-right") -> ConjugationResult:
    """Solve ``family_b[n] = L_n family_a[n] R`` with diagonal ``L_n`` and ``R``.

    ``R`` is shared by all ``n`` and normalized by ``R[0,0] = 1``.  Entries
    that vanish in both families leave their multiplier free.
    """
    if shape != "diagonal-left-right":
        raise ValueError(f"unsupported shape {shape!r}")
    if indices is None:
        indices = sorted(set(family_a) & set(family_b))
    res = ConjugationResult(False)
    r = None
    for n in indices:
        A, B = family_a[n], family_b[n]
        if A.degree != B.degree:
            res.failure = f"degree mismatch at n={n}"
            return res
        N = A.n
        c = [[_entry_ratio(B[i, j], A[i, j]) for j in range(N)] for i in range(N)]
        for i in range(N):
            for j in range(N):
                if c[i][j] is False:
                    res.failure = f"entry ({i},{j}) at n={n} is not a constant multiple"
                    return res
        res.multipliers[n] = c
        # solve c_ij = l_i r_j with r_0 = 1
        rn = [None] * N
        ln = [None] * N
        rn[0] = Fraction(1)
        changed = True
        while changed:
            changed = False
            for i in range(N):
                for j in range(N):
                    v = c[i][j]
                    if v is None:
                        continue
                    if ln[i] is None and rn[j] is not None and rn[j]:
                        ln[i] = v / rn[j]
                        changed = True
                    elif rn[j] is None and ln[i] is not None and ln[i]:
                        rn[j] = v / ln[i]
                        changed = True
        if any(x is None for x in ln) or any(x is None for x in rn):
            res.failure = f"scaling underdetermined at n={n}"
            return res
        for i in range(N):
            for j in range(N):
                v = c[i][j]
                if v is not None and v != ln[i] * rn[j]:
                    res.failure = f"inconsistent multipliers at n={n}, entry ({i},{j})"
                    return res
        if r is None:
            r = rn
        elif r != rn:
            res.failure = f"right factor changes at n={n}"
            return res
        L = RatMat.diag(*ln)
        if not L.det():
            res.failure = f"singular left factor at n={n}"
            return res
        res.L[n] = L
    if r is not None:
        res.R = RatMat.diag(*r)
        if not res.R.det():
            res.failure = "singular right factor"
            return res
    res.ok = True
    return res


__all__ = ["ConjugationResult", "conjugation_check"]
