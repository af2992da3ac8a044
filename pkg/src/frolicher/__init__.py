"""Exact Frölicher, Bott-Chern and Aeppli computations on invariant-form models,
with ω-lifts and a formal Kuranishi iterator."""

__version__ = "0.1.0"

from .complex import DoubleComplex, LieAlgebraSpec, ModelError, load_model, validate  # noqa: E402
from .field import FormatError, GaussianRational  # noqa: E402

__all__ = ["DoubleComplex", "LieAlgebraSpec", "ModelError", "FormatError", "GaussianRational",
           "load_model", "validate", "__version__"]
