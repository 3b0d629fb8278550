"""Periodic twists of GL(3) Hecke coefficients: numerical toolkit."""

from ._core import (
    AmplifierFamily,
    HeckeSystem,
    PeriodicFunction,
    SmoothWindow,
    __version__,
    bilinear_form,
    bound_ratio,
    build_trace,
    c_sum,
    corollary_sums,
    decompose_fo,
    dft,
    gauss_sums,
    gl3_coefficient,
    hyper_kloosterman,
    kl3_twist,
    kloosterman,
    measure_average,
    mellin_transform,
    mod_inverse,
    poisson_check,
    prime_pair_measure,
    s_v,
    verify_identities,
)
from ._core import Error, InputError, VerificationError

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
