"""Numerical checks for finite Weyl systems, sine brackets and AF approximations."""
from .bratteli import BratteliDiagram, LeveledElement, penrose_diagram, poset_algebra_diagram, pv_diagram
from .clockshift import ClockShiftBasis, build_basis, structure_constant
from .contfrac import ContinuedFraction, expand, golden, sqrt2m1
from .modes import DeformationParam, Mode, ModeElement, poisson_bracket, sine_bracket
from .poset import FinitePoset, OpenCover, quotient_from_cover, two_point_ideal_poset
from .pvtower import PVLevel, build_level, distance_report, naive_w, optimize_w, rho

__all__ = [
    "BratteliDiagram", "LeveledElement", "penrose_diagram", "poset_algebra_diagram", "pv_diagram",
    "ClockShiftBasis", "build_basis", "structure_constant",
    "ContinuedFraction", "expand", "golden", "sqrt2m1",
    "DeformationParam", "Mode", "ModeElement", "poisson_bracket", "sine_bracket",
    "FinitePoset", "OpenCover", "quotient_from_cover", "two_point_ideal_poset",
    "PVLevel", "build_level", "distance_report", "naive_w", "optimize_w", "rho",
]
