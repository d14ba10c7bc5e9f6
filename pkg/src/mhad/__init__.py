"""Exact finite-dimensional measured multiplier Hopf algebroids and their duals."""

from .algebra import FiniteAlgebra, Multiplier
from .algebroid import AlgebroidData, algebroid_battery, check_H1_H2
from .duality import Duality, DualResult, biduality_report, dualize
from .integration import MeasuredAlgebroid, full_battery
from .report import Check, Report

__version__ = "0.1.0"

__all__ = [
    "AlgebroidData", "Check", "DualResult", "Duality", "FiniteAlgebra", "MeasuredAlgebroid",
    "Multiplier", "Report", "algebroid_battery", "biduality_report", "check_H1_H2", "dualize",
    "full_battery",
]
