"""Exact symbolic checks for GKLO images of shifted twisted Yangians of
type AI and for the τ-minor Poisson algebra."""
from .gklo import GKLO, Shape, ShapeError, build_shape
from .kernels import BACKEND
from .poisson import mode_bracket, poisson_ideal_closure, tau_minor_mode, tau_star
from .relcheck import check_relation, negative_control, run_suite, semiclassical_check
from .report import CheckReport

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "CheckReport", "GKLO", "Shape", "ShapeError", "build_shape",
    "check_relation", "mode_bracket", "negative_control", "poisson_ideal_closure",
    "run_suite", "semiclassical_check", "tau_minor_mode", "tau_star",
]
