from .classical import ClassicalFamily, gegenbauer_family, hermite_family, laguerre_family
from .examples import ExampleResult, example_pipeline, partial_orthogonality
from .scalar import scalar_classical

__all__ = [
    "ClassicalFamily",
    "ExampleResult",
    "example_pipeline",
    "gegenbauer_family",
    "hermite_family",
    "laguerre_family",
    "partial_orthogonality",
    "scalar_classical",
]
