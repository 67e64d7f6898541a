"""Generalized double/triple operator integrals for arbitrary complex matrices.

The heavy lifting lives in the compiled extension ``_gdoi``; this package
re-exports the main operations. Matrices are numpy complex arrays.
"""

from ._gdoi import (
    AnalyticFn1,
    AnalyticFn2,
    AnalyticFn3,
    EnsembleSpec,
    GdoiError,
    SpectralComponent,
    SpectralDecomposition,
    compose,
    continuity_probe,
    decompose,
    divergence_triple,
    divided_diff_1,
    divided_diff_2,
    doi_hermitian,
    doi_variant_post,
    doi_variant_pre,
    eval_matrix_fn1,
    eval_matrix_fn2,
    gdoi,
    gdoi_lower_bound,
    gdoi_split,
    gdoi_upper_bound,
    gtoi,
    holder_upper_bound,
    lipschitz_bounds,
    make_function,
    make_function2,
    monte_carlo_tail,
    mu_extra_term,
    perturbation_commutator,
    perturbation_difference,
    reverse_triangle_lower,
    run_suite,
    sample_pair,
    split_pn,
    synthesize,
    telescope_residual,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticFn1",
    "AnalyticFn2",
    "AnalyticFn3",
    "EnsembleSpec",
    "GdoiError",
    "SpectralComponent",
    "SpectralDecomposition",
    "compose",
    "continuity_probe",
    "decompose",
    "divergence_triple",
    "divided_diff_1",
    "divided_diff_2",
    "doi_hermitian",
    "doi_variant_post",
    "doi_variant_pre",
    "eval_matrix_fn1",
    "eval_matrix_fn2",
    "gdoi",
    "gdoi_lower_bound",
    "gdoi_split",
    "gdoi_upper_bound",
    "gtoi",
    "holder_upper_bound",
    "lipschitz_bounds",
    "make_function",
    "make_function2",
    "monte_carlo_tail",
    "mu_extra_term",
    "perturbation_commutator",
    "perturbation_difference",
    "reverse_triangle_lower",
    "run_suite",
    "sample_pair",
    "split_pn",
    "synthesize",
    "telescope_residual",
    "validate",
]
