"""Coupled dynamics on oriented simplicial complexes."""
from .complex import OrientedComplex, boundary_matrix, build_complex, complex_from_dict
from .couplings import CouplingFunction, ScalarFunction
from .dynamics import (VectorFieldSpec, assemble, canonical_representative, classify,
                       equivalent_down, equivalent_up, is_exact, realize)
from .errors import (ComplexError, DimensionError, GuardExceeded, PreconditionError,
                     SimplicialError, VerificationError)
from .hodge import pseudoinverse, reduced_laplacian, triple_decomposition

__version__ = "0.1.0"

__all__ = [
    "OrientedComplex", "boundary_matrix", "build_complex", "complex_from_dict",
    "CouplingFunction", "ScalarFunction", "VectorFieldSpec", "assemble",
    "canonical_representative", "classify", "equivalent_down", "equivalent_up",
    "is_exact", "realize", "ComplexError", "DimensionError", "GuardExceeded",
    "PreconditionError", "SimplicialError", "VerificationError", "pseudoinverse",
    "reduced_laplacian", "triple_decomposition",
]
