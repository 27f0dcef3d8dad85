"""Model checking of feature-oriented probabilistic models."""

from ._featmc import (
    ConvergenceError,
    Model,
    ModelError,
    auv_model,
    auv_model_text,
    auv_properties_text,
    scenario_overrides,
    standard_analysis,
)

__all__ = [
    "ConvergenceError",
    "Model",
    "ModelError",
    "auv_model",
    "auv_model_text",
    "auv_properties_text",
    "scenario_overrides",
    "standard_analysis",
]
__version__ = "1.0.0"
