"""Finite bigraded models of invariant form algebras."""

from .core import (
    BidegreeMismatch,
    CoeffComplex,
    FormExpr,
    FreeModel,
    Generator,
    Model,
    ModelError,
    Monomial,
    PoissonBivector,
    PolyvectorExpr,
    TensorModel,
    UnknownGenerator,
    enumerate_basis,
)
from .parser import ModelSyntaxError, load_model, parse_bivector, parse_expression, parse_form, parse_model, print_model
from .builtins import UnknownBuiltin, builtin, builtin_names

__all__ = [
    "BidegreeMismatch", "CoeffComplex", "FormExpr", "FreeModel", "Generator", "Model", "ModelError",
    "ModelSyntaxError", "Monomial", "PoissonBivector", "PolyvectorExpr", "TensorModel", "UnknownBuiltin",
    "UnknownGenerator", "builtin", "builtin_names", "enumerate_basis", "load_model", "parse_bivector", "parse_form",
    "parse_expression", "parse_model", "print_model",
]


def validate(model):
    """Run every axiom check on ``model`` and return a ``ValidationReport``."""
    from .validation import validate as _validate

    return _validate(model)


__all__.append("validate")
