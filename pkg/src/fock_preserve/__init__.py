"""Stability preservers, operator symbols and Lee-Yang checks on weighted Fock spaces."""

from __future__ import annotations

__version__ = "0.1.0"

from .fock import (
    GaussianForm,
    GaussQuad,
    Weight,
    apply_integral_rep,
    ej_membership,
    fock_inner,
    fock_norm_sq,
    gaussian_fock_membership,
    gaussian_pair,
    m_alpha,
    reproducing_eval,
    verify_g_bound,
)
from .leeyang import (
    Gaussian,
    HypothesisError,
    Interval,
    SpinModel,
    TwoAtom,
    ej_convolve,
    fugacity_zeros,
    gls_compose,
    has_ly_property,
    ising_partition,
    transform,
)
from .operators import (
    Compose,
    Degenerate,
    Diagonal,
    Diff,
    Mult,
    NotPreserver,
    Symbol,
    SymbolStable,
    Table,
    TensorExtend,
    apply_op,
    classify_preserver,
    compose_symbol,
    dual_symbol,
    formal_adjoint_symbol,
    lambda_beta,
    op_rank,
    symbol,
    t_beta,
)
from .poly import MPoly, exp_linear, poly_eval
from .stability import (
    Region,
    Verdict,
    check,
    is_stable_multi,
    is_stable_uni,
    lp_approximant,
    ly_check,
    univariate_roots,
    validated_radius,
)

__all__ = [
    "__version__",
    "apply_integral_rep",
    "apply_op",
    "check",
    "classify_preserver",
    "Compose",
    "compose_symbol",
    "Degenerate",
    "Diagonal",
    "Diff",
    "dual_symbol",
    "ej_convolve",
    "ej_membership",
    "exp_linear",
    "fock_inner",
    "fock_norm_sq",
    "formal_adjoint_symbol",
    "fugacity_zeros",
    "Gaussian",
    "gaussian_fock_membership",
    "gaussian_pair",
    "GaussianForm",
    "GaussQuad",
    "gls_compose",
    "has_ly_property",
    "HypothesisError",
    "Interval",
    "is_stable_multi",
    "is_stable_uni",
    "ising_partition",
    "lambda_beta",
    "lp_approximant",
    "ly_check",
    "m_alpha",
    "MPoly",
    "Mult",
    "NotPreserver",
    "op_rank",
    "poly_eval",
    "Region",
    "reproducing_eval",
    "SpinModel",
    "symbol",
    "Symbol",
    "SymbolStable",
    "t_beta",
    "Table",
    "TensorExtend",
    "transform",
    "TwoAtom",
    "univariate_roots",
    "validated_radius",
    "Verdict",
    "verify_g_bound",
    "Weight",
]
