"""Forward climate model package."""

from .backend import available_backends, kernel_backend
from .gases import CARBON_FRACTION, GasSchema, GasSpec, co2e_schema
from .model import (
    co2_forcing,
    iirf_target,
    run,
    solve_alpha,
    step,
    thermal_response,
)
from .params import (
    DEFAULT_CONFIG,
    FORCING_CATEGORIES,
    N_PARAMS,
    PARAM_NAMES,
    ModelConfig,
    ParameterVector,
)
from .state import ClimateState, EmissionPathway, TemperaturePathway, initial_state
from ._kernel_py import iirf_100

__all__ = [
    "CARBON_FRACTION", "ClimateState", "DEFAULT_CONFIG", "EmissionPathway",
    "FORCING_CATEGORIES", "GasSchema", "GasSpec", "ModelConfig", "N_PARAMS",
    "PARAM_NAMES", "ParameterVector", "TemperaturePathway",
    "available_backends", "co2_forcing", "co2e_schema", "iirf_100",
    "iirf_target", "initial_state", "kernel_backend", "run", "solve_alpha",
    "step", "thermal_response",
]
