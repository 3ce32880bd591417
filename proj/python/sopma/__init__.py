"""Community energy policy toolkit.

Thin Python surface over the C++ core: survey regression with correlation
screening, hourly dispatch simulation, policy sweeps, and well-being
coupling.
"""

from ._core import (
    ToolkitError,
    circulation_modifier,
    correlation_p_value,
    cost_modifier,
    fit_survey,
    pearson_r,
    renewable_modifier,
    run_pipeline,
    simulate_policy,
    validate_config,
)

__all__ = [
    "ToolkitError",
    "circulation_modifier",
    "correlation_p_value",
    "cost_modifier",
    "fit_survey",
    "pearson_r",
    "renewable_modifier",
    "run_pipeline",
    "simulate_policy",
    "validate_config",
]
