"""Exact matrix-state combinatorics for heat-kernel generating functions."""

from .matrix_ops import WeightSeq, apply_A, apply_B, apply_S, expand_word, omega_n, upsilon, upsilon_sum
from .series import TruncatedSeries, catalog, derivatives_at_zero, f_from_phi, phi_from_f

__version__ = "0.1.0"

__all__ = [
    "TruncatedSeries",
    "WeightSeq",
    "apply_A",
    "apply_B",
    "apply_S",
    "catalog",
    "derivatives_at_zero",
    "expand_word",
    "f_from_phi",
    "omega_n",
    "phi_from_f",
    "upsilon",
    "upsilon_sum",
]
