"""Signed measures of multiparameter persistence modules."""

from ._core import (
    FilteredComplex,
    Grid,
    InputError,
    NumericError,
    SignedMeasure,
    default_config,
    distance_to_measure,
    euler_signed_measure,
    featurize,
    function_rips,
    gaussian_convolution,
    heat_kernel_signature,
    hilbert_function,
    hilbert_signed_measure,
    interior_part,
    kde_codensity,
    kr_distance,
    lower_star,
    make_grid,
    neighbour_codensity,
    rips,
    sliced_wasserstein,
    sw_gram,
)

__all__ = [
    "FilteredComplex",
    "Grid",
    "InputError",
    "NumericError",
    "SignedMeasure",
    "default_config",
    "distance_to_measure",
    "euler_signed_measure",
    "featurize",
    "function_rips",
    "gaussian_convolution",
    "heat_kernel_signature",
    "hilbert_function",
    "hilbert_signed_measure",
    "interior_part",
    "kde_codensity",
    "kr_distance",
    "lower_star",
    "make_grid",
    "neighbour_codensity",
    "rips",
    "sliced_wasserstein",
    "sw_gram",
]
