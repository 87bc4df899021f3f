"""Exact and asymptotic distribution of the area under a random-walk excursion.

The heavy lifting lives in the compiled ``_core`` module; this package simply
re-exports its surface.
"""

from ._core import (  # noqa: F401
    CapsError,
    ExcursionTable,
    NoRootError,
    Profile,
    ValidationError,
    __version__,
    change_of_measure_max_gap,
    is_local,
    is_tail,
    kappa_fit,
    mgf,
    naive_excursion,
    survival_q,
    tau_law,
    tilt,
    tilt_schedule,
    validate,
    zero_mean_check,
)

__all__ = [
    "CapsError",
    "ExcursionTable",
    "NoRootError",
    "Profile",
    "ValidationError",
    "change_of_measure_max_gap",
    "is_local",
    "is_tail",
    "kappa_fit",
    "mgf",
    "naive_excursion",
    "survival_q",
    "tau_law",
    "tilt",
    "tilt_schedule",
    "validate",
    "zero_mean_check",
]
