from .detect import (
    ExtremaResult,
    compute_extremum_basis,
    detect_extrema,
    detect_uncertain,
    dominance,
    state_value,
    threshold_extrema,
)
from .envmodel import EnvironmentModel, EnvModelConfig, TruePredictor, train_env_model
from .text import TEMPLATE, render_counterfactual
from .types import (
    AGGREGATE,
    ContrastiveEntry,
    Dine,
    DominanceChart,
    ExtremumBasis,
    ExtremumDine,
    ScopeBasis,
    Thresholds,
    UncertainActionDine,
    dine_from_dict,
)

__all__ = [
    "AGGREGATE",
    "ContrastiveEntry",
    "Dine",
    "DominanceChart",
    "EnvModelConfig",
    "EnvironmentModel",
    "ExtremaResult",
    "ExtremumBasis",
    "ExtremumDine",
    "ScopeBasis",
    "TEMPLATE",
    "Thresholds",
    "TruePredictor",
    "UncertainActionDine",
    "compute_extremum_basis",
    "detect_extrema",
    "detect_uncertain",
    "dine_from_dict",
    "dominance",
    "render_counterfactual",
    "state_value",
    "threshold_extrema",
    "train_env_model",
]
