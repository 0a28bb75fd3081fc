from .conjugation import ConjugationResult, conjugation_check
from .quadrature import QuadratureRule, gauss_quadrature, numeric_gram, numeric_inner_product
from .recurrence import RecurrenceFit, fit_recurrence
from .report import Check, Report

__all__ = [
    "Check",
    "ConjugationResult",
    "QuadratureRule",
    "RecurrenceFit",
    "Report",
    "conjugation_check",
    "fit_recurrence",
    "gauss_quadrature",
    "numeric_gram",
    "numeric_inner_product",
]
