"""Exact-rational A-infinity structures obtained by homotopy transfer from a DGA."""
from .dga import (BUILTIN_NAMES, DGA, DGAError, MultiplicationTable, ValidationReport, build_simplicial_cochain_dga,
                  builtin_complex, builtin_dga, direct_sum, random_dga, tensor_product, validate_dga)
from .graded import (GradedMap, GradedVectorSpace, GradingError, HomogeneousVector, assoc_sign_exponent, compose,
                     lambda_sign_exponent, supercommutator)
from .hodge import (HodgeError, HodgePackage, build_hodge, cohomology_dims, hodge_decompose, homotopy,
                    make_datum_closed, make_datum_harmonic, make_datum_ker_dstar)
from .linalg import LinAlgError, Matrix
from .simplicial import ComplexError, SimplicialComplex
from .transfer import (AInftyStructure, AssumptionError, MembershipError, Subcomplex, SubcomplexError,
                       TransferDatum, TransferError, VerificationReport, ainfty_residual, check_assumption,
                       lambda_op, mu, mu_closed_form, mu_w, phi, psi_ambient, theta, verify_ainfty)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_NAMES",
    "DGA",
    "DGAError",
    "MultiplicationTable",
    "ValidationReport",
    "build_simplicial_cochain_dga",
    "builtin_complex",
    "builtin_dga",
    "direct_sum",
    "random_dga",
    "tensor_product",
    "validate_dga",
    "GradedMap",
    "GradedVectorSpace",
    "GradingError",
    "HomogeneousVector",
    "assoc_sign_exponent",
    "compose",
    "lambda_sign_exponent",
    "supercommutator",
    "HodgeError",
    "HodgePackage",
    "build_hodge",
    "cohomology_dims",
    "hodge_decompose",
    "homotopy",
    "make_datum_closed",
    "make_datum_harmonic",
    "make_datum_ker_dstar",
    "LinAlgError",
    "Matrix",
    "ComplexError",
    "SimplicialComplex",
    "AInftyStructure",
    "AssumptionError",
    "MembershipError",
    "Subcomplex",
    "SubcomplexError",
    "TransferDatum",
    "TransferError",
    "VerificationReport",
    "ainfty_residual",
    "check_assumption",
    "lambda_op",
    "mu",
    "mu_closed_form",
    "mu_w",
    "phi",
    "psi_ambient",
    "theta",
    "verify_ainfty",
]
