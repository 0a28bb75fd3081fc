from .matrix import RatMat, SingularMatrixError, const_mat, mat_det, mat_inverse
from .poly import Poly, Q, RatFunc, poly_gcd, ratfunc_arith
from .roots import count_real_roots, has_root_in, isolate_real_roots, sturm_sequence

__all__ = [
    "Q",
    "Poly",
    "RatFunc",
    "RatMat",
    "SingularMatrixError",
    "const_mat",
    "count_real_roots",
    "has_root_in",
    "isolate_real_roots",
    "mat_det",
    "mat_inverse",
    "poly_gcd",
    "ratfunc_arith",
    "sturm_sequence",
]
