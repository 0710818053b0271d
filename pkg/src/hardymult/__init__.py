"""Multipliers between Hardy spaces of Dirichlet series, made computable for
finite Dirichlet polynomials."""

from .arith import Character, DirichletPoly, MultiIndex, dirichlet_product, evaluate, factorize, restrict, twist, unfactorize
from .bohr import TorusPoly, bohr_lift, bohr_transform, eval_lift, poly_product
from .norms import hp_norm, norm_h2, norm_hinf, norm_hp_even, norm_hp_qmc, norm_vertical_line
from .torus import Config, Estimate, SamplePlan, extremum_on_torus, integrate_torus
from .multipliers import NoMultiplierError, classify, ess_norm_bracket, multiplier_norm, operator_norm_lower_bound
from .operators import (
    approximate_spectrum_cloud,
    closed_range_certificate,
    commutant_test,
    cross_norm_range_refusal,
    matrix_of,
    spectrum_cloud,
    truncated_norm,
)
from .colegamelin import ExtremalSpec, cg_bound, extremal_function
from .fejer import FejerSpec, fejer_apply
from .parsing import SeriesSyntaxError, format_series, parse_series
from .verify import run_verify

__version__ = "0.1.0"

__all__ = [
    "Character",
    "Config",
    "DirichletPoly",
    "Estimate",
    "ExtremalSpec",
    "FejerSpec",
    "MultiIndex",
    "NoMultiplierError",
    "SamplePlan",
    "SeriesSyntaxError",
    "TorusPoly",
    "approximate_spectrum_cloud",
    "bohr_lift",
    "bohr_transform",
    "cg_bound",
    "classify",
    "closed_range_certificate",
    "commutant_test",
    "cross_norm_range_refusal",
    "dirichlet_product",
    "ess_norm_bracket",
    "eval_lift",
    "evaluate",
    "extremal_function",
    "extremum_on_torus",
    "factorize",
    "fejer_apply",
    "format_series",
    "hp_norm",
    "integrate_torus",
    "matrix_of",
    "multiplier_norm",
    "norm_h2",
    "norm_hinf",
    "norm_hp_even",
    "norm_hp_qmc",
    "norm_vertical_line",
    "operator_norm_lower_bound",
    "parse_series",
    "poly_product",
    "restrict",
    "run_verify",
    "spectrum_cloud",
    "truncated_norm",
    "twist",
    "unfactorize",
]
