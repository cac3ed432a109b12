"""Exact symbolic checks for quantum affinizations: Cartan data, braid actions, loop modules,
Drinfeld coproducts, q-characters and spectral R-matrices."""

from .cartan import AffineCartanDatum, build
from .exact import Matrix, Scalar, parse_scalar
from .rep import Rep, evaluation_module

__all__ = ["AffineCartanDatum", "Matrix", "Rep", "Scalar", "build", "evaluation_module", "parse_scalar"]
__version__ = "0.1.0"
