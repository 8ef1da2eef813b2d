"""Separability criteria, CHSH maxima and collective postselection on Werner pairs."""

from ._entangle import (
    InputError,
    NumericalError,
    alpha2_check,
    controlled_hadamard_rows,
    gisin_state,
    optimal_settings,
    optimize,
    partial_transpose,
    postselect,
    ppt_check,
    scan,
    singlet_plus_polarized,
    t_matrix,
    v_from_u,
    werner_state,
    xor_rows,
)

__all__ = [
    "InputError",
    "NumericalError",
    "alpha2_check",
    "controlled_hadamard_rows",
    "gisin_state",
    "optimal_settings",
    "optimize",
    "partial_transpose",
    "postselect",
    "ppt_check",
    "scan",
    "singlet_plus_polarized",
    "t_matrix",
    "v_from_u",
    "werner_state",
    "xor_rows",
]
