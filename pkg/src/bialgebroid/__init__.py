"""Exact symbolic verification of Lie algebroids, Jacobi structures and generalized Lie bialgebroids."""
from .algebroid import Algebroid, AlgebroidError, CocycleError, ConsistencyError, lie_algebra, tangent_algebroid
from .exterior import MultiForm, Multivector, ProductElement, evaluate, pair, sharp
from .glb import (GLBError, GLBPair, YBData, YBError, canonical_pair, check_duality, check_glb,
                  check_glb_point, induced_jacobi, triangular, yb_center_reduce, yb_check, yb_construct)
from .jacobi import JacobiError, JacobiStructure, build_tm_r, build_tstar_m_r, poissonize, verify_jacobi
from .report import CheckResult, Report
from .scalar import ParseError, Ring, Scalar, ScalarError, parse_scalar
from .time_ext import bar_extension, bialgebroidize, hat_extension, psi

__version__ = "0.1.0"

__all__ = [
    "Algebroid", "AlgebroidError", "CocycleError", "ConsistencyError", "lie_algebra", "tangent_algebroid",
    "MultiForm", "Multivector", "ProductElement", "evaluate", "pair", "sharp",
    "GLBError", "GLBPair", "YBData", "YBError", "canonical_pair", "check_duality", "check_glb",
    "check_glb_point", "induced_jacobi", "triangular", "yb_center_reduce", "yb_check", "yb_construct",
    "JacobiError", "JacobiStructure", "build_tm_r", "build_tstar_m_r", "poissonize", "verify_jacobi",
    "CheckResult", "Report",
    "ParseError", "Ring", "Scalar", "ScalarError", "parse_scalar",
    "bar_extension", "bialgebroidize", "hat_extension", "psi",
]
