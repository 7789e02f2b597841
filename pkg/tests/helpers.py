"""Shared fixtures for the qord test suite."""

import os
from fractions import Fraction

from qord.branch import validate
from qord.series import FracSeries

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
EXAMPLES = os.path.join(ROOT, "data", "examples")
GOLDEN = os.path.join(ROOT, "tests", "golden")

# QORD_FULL_ACCEPTANCE=1 runs the slow variants at the derived truncation
FULL = os.environ.get("QORD_FULL_ACCEPTANCE") == "1"


def example(name: str) -> str:
    return os.path.join(EXAMPLES, name)


def series(terms, r=2, trunc=None) -> FracSeries:
    return FracSeries({tuple(e): Fraction(c) for e, c in terms.items()}, r, trunc)


def hc_parameterization(trunc=24, c=Fraction(7, 3)):
    """n = 5, S = t^(5,1) + t^(5,8) + c t^(5,9) + t^(10,4)."""
    S = series({(5, 1): 1, (5, 8): 1, (5, 9): c, (10, 4): 1})
    return validate(2, 5, S, trunc)
