"""Polylogarithms and a zeta function at finite places of F_q(x)."""
from .carlitz import (
    CarlitzFunction,
    FunctionHandle,
    a_coeff,
    a_table,
    delta_n_point,
    delta_on_carlitz,
    delta_point,
    delta_pow_point,
    eval_cf,
    eval_f,
)
from .errors import (
    CarlitzError,
    DepthExceeded,
    IndeterminateValuation,
    NoUnramifiedSolution,
    NotAQthPower,
    OutsideDisk,
    ReduciblePolynomial,
)
from .field_tower import FFElement, FieldCtx, FieldLevel, FqConfig, extend
from .hyperdiff import frac_delta, hat, hyperdiff
from .local_series import LocalSeries
from .place import PlaceCtx, embed_poly, make_place
from .polylog import PolylogSet, build_alternative_branch, build_polylogs, eval_ln_series
from .zeta import FormalDirichlet, ZetaEvaluator, euler_product, otimes

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
