"""
qord: invariants of quasi-ordinary hypersurface branches.

Exact truncated power series, value semigroups, generalized Zariski
exponents, admissible coordinate changes and the quasi-simple
classification of plane monomial classes.
"""

from .branch import Parameterization, RForm, h_star, is_normalized, psi, validate
from .classify import TopClass, census, instantiate, is_quasi_simple, normal_form
from .errors import QordError
from .reduce import (CoordinateChange, apply_change, eliminate_term,
                     normalize_coefficients, quasi_short_reduce)
from .semigroup import SemigroupData, build_semigroup, gamma_member, standard_representation
from .series import FracSeries, TruncationOrder
from .zariski import ZariskiResult, can_admit_three, zariski_exponents

__version__ = "0.1.0"

__all__ = [
    "Parameterization", "RForm", "h_star", "is_normalized", "psi", "validate",
    "TopClass", "census", "instantiate", "is_quasi_simple", "normal_form",
    "QordError", "CoordinateChange", "apply_change", "eliminate_term",
    "normalize_coefficients", "quasi_short_reduce", "SemigroupData",
    "build_semigroup", "gamma_member", "standard_representation",
    "FracSeries", "TruncationOrder", "ZariskiResult", "can_admit_three",
    "zariski_exponents",
]
