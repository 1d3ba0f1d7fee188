"""Exact q-series toolkit for sequences in overpartitions and related double sums."""

from qpl.qcore import (
    Series,
    coeff,
    eval_x_one,
    inverse,
    monomial,
    poch_finite,
    poch_infinite,
    qbinom,
    subst_x,
)

__version__ = "0.1.0"

__all__ = [
    "Series",
    "coeff",
    "eval_x_one",
    "inverse",
    "monomial",
    "poch_finite",
    "poch_infinite",
    "qbinom",
    "subst_x",
]
