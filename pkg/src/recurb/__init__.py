"""Numerical checks for submanifolds with recurrent second fundamental form
in spaces of constant curvature."""

from .ambient import AmbientModel, inner, on_model_residual, radial_normal
from .analysis import Tolerances, classify, extract_recurrence
from .catalog import instantiate, list_entries
from .jets import ImmersionChart, Jet3, eval_jet3
from .tensors import PointGeometry, evaluate_point

__all__ = [
    "AmbientModel", "ImmersionChart", "Jet3", "PointGeometry", "Tolerances",
    "classify", "eval_jet3", "evaluate_point", "extract_recurrence", "inner",
    "instantiate", "list_entries", "on_model_residual", "radial_normal",
]
__version__ = "0.1.0"
