"""Exact construction and verification of exceptional matrix orthogonal polynomials."""

from .algebra import Poly, Q, RatFunc, RatMat
from .darboux import TransformResult, build_annihilator, exceptional_weight, factorize, transform
from .diffops import DiffOp, apply, compose, eigencheck, symmetry_check
from .kernels import Kernel, QuasiRatMat
from .weights import ExactMatrix, ExactValue, WeightSpec, exact_inner_product

__version__ = "0.1.0"

__all__ = [
    "DiffOp",
    "ExactMatrix",
    "ExactValue",
    "Kernel",
    "Poly",
    "Q",
    "QuasiRatMat",
    "RatFunc",
    "RatMat",
    "TransformResult",
    "WeightSpec",
    "apply",
    "build_annihilator",
    "compose",
    "eigencheck",
    "exact_inner_product",
    "exceptional_weight",
    "factorize",
    "symmetry_check",
    "transform",
]
