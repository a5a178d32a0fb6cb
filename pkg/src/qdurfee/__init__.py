"""Exact q-series engine for generalized odd Durfee symbols, their rank
moments, Appell-Lerch sums and class number generating functions."""

from .coeffring import I, ParamPoly, Scalar
from .durfee import SYMBOLIC, ZERO, ParamChoice, no_bilateral, no_series
from .qlaurent import Monomial, QSeries, qexp
from .verify import run_identity, run_suite

__all__ = [
    "I",
    "Monomial",
    "ParamChoice",
    "ParamPoly",
    "QSeries",
    "SYMBOLIC",
    "Scalar",
    "ZERO",
    "no_bilateral",
    "no_series",
    "qexp",
    "run_identity",
    "run_suite",
]
