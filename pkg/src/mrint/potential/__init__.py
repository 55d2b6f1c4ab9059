"""Integrability analysis of concrete potentials at Darboux points."""

from .analysis import NotDarbouxPoint, NotHomogeneous, parse_potential
from .pipeline import analyze, analyze_point
from .report import AnalysisReport

__all__ = ["AnalysisReport", "NotDarbouxPoint", "NotHomogeneous", "analyze", "analyze_point", "parse_potential"]
