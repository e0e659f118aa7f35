"""Exact PI-degree computations and irreducible representations for quantum
nilpotent algebras at roots of unity."""

from .cyclotomic import CycNum, LaurentPoly, QLaurentRatio
from .cycmatrix import CycMatrix, commutant_dimension
from .pideg import PiDegreeReport, pideg_oracle, pideg_quotient, pideg_snf
from .skew import SkewNormalForm, skew_normal_form, smith_normal_form

__version__ = "0.1.0"
