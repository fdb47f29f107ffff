"""Forward climate model: emissions to concentrations, forcing and temperature.

Annual-step integration of the four-reservoir carbon cycle with a
temperature- and uptake-dependent timescale adjustment, logarithmic CO2
forcing, per-gas non-CO2 forcing and a two-timescale thermal response.
All operations are pure functions of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite

import numpy as np

from ..errors import DomainError, ValidationError
from .backend import get_kernel, kernel_backend
from ._kernel_py import iirf_100, solve_alpha_kernel
from .gases import GasSchema
from .params import DEFAULT_CONFIG, FORCING_CATEGORIES, ModelConfig, ParameterVector
from .state import ClimateState, EmissionPathway, TemperaturePathway, initial_state


@dataclass(frozen=True)
class AlphaResult:
    alpha: float
    clamped: bool


def solve_alpha(cumulative_uptake: float, temperature: float,
                params: ParameterVector,
                config: ModelConfig = DEFAULT_CONFIG,
                warm_start: float = 1.0) -> AlphaResult:
    """Timescale adjustment for the current carbon-cycle state.

    Solves iirf_100(alpha) = r0 + rC * uptake + rT * T on the configured
    bracket. A target outside the representable range clamps to the nearest
    bound and sets the flag instead of raising.
    """
    if not (isfinite(cumulative_uptake) and isfinite(temperature)):
        raise DomainError("non-finite inputs to the alpha solve")
    target = params.r0 + params.rC * cumulative_uptake + params.rT * temperature
    alpha, clamped = solve_alpha_kernel(
        target, params.a, params.tau,
        config.alpha_min, config.alpha_max, config.alpha_tol, warm_start)
    return AlphaResult(alpha=float(alpha), clamped=bool(clamped))


def iirf_target(params: ParameterVector, cumulative_uptake: float,
                temperature: float) -> float:
    return params.r0 + params.rC * cumulative_uptake + params.rT * temperature


def co2_forcing(conc_ppm, params: ParameterVector,
                config: ModelConfig = DEFAULT_CONFIG):
    """Logarithmic CO2 forcing, W/m2; F2x exactly at doubled concentration."""
    conc = np.asarray(conc_ppm, dtype=float)
    if np.any(conc <= 0):
        raise DomainError("concentration must be positive before the log")
    return (params.F2x / np.log(2.0)) * np.log(conc / config.c0_ppm)


def thermal_response(forcing, params: ParameterVector,
                     t1: float = 0.0, t2: float = 0.0) -> np.ndarray:
    """Temperature series from a forcing series via the exact annual two-box step."""
    f = np.asarray(forcing, dtype=float)
    dec1, dec2 = np.exp(-1.0 / params.d1), np.exp(-1.0 / params.d2)
    gain1, gain2 = -np.expm1(-1.0 / params.d1), -np.expm1(-1.0 / params.d2)
    out = np.empty(f.size)
    for i in range(f.size):
        t1 = t1 * dec1 + params.q1 * f[i] * gain1
        t2 = t2 * dec2 + params.q2 * f[i] * gain2
        out[i] = t1 + t2
    return out


def _state_vectors(schema: GasSchema, initial: ClimateState):
    state = np.array([*initial.reservoirs, initial.t1, initial.t2,
                      initial.cumulative_uptake], dtype=float)
    table = schema.compile()
    if initial.gas_concentrations is not None:
        gas_conc = np.asarray(initial.gas_concentrations, dtype=float).copy()
        if gas_conc.shape != (len(schema),):
            raise ValidationError("gas_concentrations length does not match schema")
    else:
        gas_conc = table.conc0.copy()
    return state, gas_conc, table


def run(pathway: EmissionPathway, params: ParameterVector,
        exo=None, initial: ClimateState | None = None,
        config: ModelConfig = DEFAULT_CONFIG,
        backend: str | None = None) -> TemperaturePathway:
    """Integrate the model over every year of the pathway.

    Deterministic: identical inputs give bit-identical outputs for a given
    kernel backend.
    """
    n = pathway.n_years
    if exo is None:
        exo = np.zeros(n)
    else:
        exo = np.ascontiguousarray(exo, dtype=float)
        if exo.shape != (n,):
            raise ValidationError("exogenous forcing must align with the pathway years")
    if initial is None:
        initial = initial_state(pathway)
    elif initial.year != int(pathway.years[0]) - 1:
        raise ValidationError(
            f"initial state year {initial.year} does not precede pathway start "
            f"{int(pathway.years[0])}")

    state, gas_conc, table = _state_vectors(pathway.schema, initial)
    emissions = np.ascontiguousarray(pathway.values, dtype=float)

    temp = np.empty(n)
    conc = np.empty(n)
    forcing = np.empty(n)
    alpha = np.empty(n)
    f_cat = np.empty((n, 6))

    kernel = get_kernel(backend)
    code, err_year, n_clamped = kernel.run_kernel(
        emissions, exo, params.to_array(),
        table.mode, table.category, table.lifetime, table.conv, table.conc0,
        table.efficiency, table.efficiency2, table.category2,
        config.c0_ppm, config.gtc_per_ppm,
        config.alpha_min, config.alpha_max, config.alpha_tol,
        float(initial.alpha_warm),
        state, gas_conc,
        temp, conc, forcing, alpha, f_cat)
    if code != 0:
        raise DomainError(
            f"non-positive CO2 concentration in year {int(pathway.years[err_year])} "
            f"(reservoirs {state[:4]!r})")

    by_category = {name: f_cat[:, i].copy() for i, name in enumerate(FORCING_CATEGORIES)}
    by_category["exogenous"] = exo.copy()
    final = ClimateState(
        reservoirs=state[0:4].copy(),
        cumulative_uptake=float(state[6]),
        t1=float(state[4]), t2=float(state[5]),
        year=int(pathway.years[-1]),
        gas_concentrations=gas_conc,
        alpha_warm=float(alpha[-1]),
    )
    return TemperaturePathway(
        years=pathway.years.copy(), temperature=temp, co2_ppm=conc,
        forcing=forcing, forcing_by_category=by_category,
        alpha=alpha, alpha_clamped=int(n_clamped), final_state=final)


def step(state: ClimateState, emissions_year, exo_forcing: float,
         params: ParameterVector, schema: GasSchema,
         config: ModelConfig = DEFAULT_CONFIG,
         backend: str | None = None):
    """Advance one year; returns (new_state, temperature, co2_ppm, forcing).

    Equivalent to a one-year `run`; composing steps reproduces `run` exactly.
    """
    values = np.asarray(emissions_year, dtype=float).reshape(1, -1)
    pathway = EmissionPathway(
        years=np.array([state.year + 1]), values=values, schema=schema)
    out = run(pathway, params, exo=np.array([float(exo_forcing)]),
              initial=state, config=config, backend=backend)
    return (out.final_state, float(out.temperature[0]),
            float(out.co2_ppm[0]), float(out.forcing[0]))


def backend_name() -> str:
    return kernel_backend()
