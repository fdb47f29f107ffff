"""Core value types threaded through the climate model."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import ValidationError
from .gases import GasSchema

# Sanity floor for any single annual emission value, native units.
EMISSION_FLOOR = -100.0


@dataclass(frozen=True)
class EmissionPathway:
    """Per-gas annual emissions on a contiguous year axis."""

    years: np.ndarray              # int, strictly increasing, step 1
    values: np.ndarray             # [n_years, n_gases], native units
    schema: GasSchema

    def __post_init__(self):
        years = np.asarray(self.years, dtype=int)
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape != (years.size, len(self.schema)):
            raise ValidationError(
                f"emissions shape {values.shape} does not match "
                f"{years.size} years x {len(self.schema)} gases"
            )
        if years.size == 0:
            raise ValidationError("pathway has no years")
        if np.any(np.diff(years) != 1):
            raise ValidationError("years must be strictly increasing with step 1")
        if not np.all(np.isfinite(values)):
            raise ValidationError("emission values must be finite")
        if np.any(values < EMISSION_FLOOR):
            raise ValidationError(f"emission values below the sanity floor {EMISSION_FLOOR}")
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "values", values)

    @property
    def n_years(self) -> int:
        return self.years.size

    def year_index(self, year: int) -> int:
        i = int(year) - int(self.years[0])
        if i < 0 or i >= self.years.size:
            raise ValidationError(f"year {year} outside pathway range "
                                  f"[{self.years[0]}, {self.years[-1]}]")
        return i

    def series(self, gas: str) -> np.ndarray:
        return self.values[:, self.schema.index(gas)]

    def co2_total(self) -> np.ndarray:
        """Summed reservoir-routed (CO2) emissions per year, GtC."""
        idx = list(self.schema.reservoir_indices)
        return self.values[:, idx].sum(axis=1)

    def co2e_total(self) -> np.ndarray:
        """Collapse all gases to a single GtCO2e series via schema weights."""
        return self.values @ self.schema.co2e_weights()

    def slice_years(self, first: int, last: int) -> "EmissionPathway":
        i0, i1 = self.year_index(first), self.year_index(last)
        return EmissionPathway(self.years[i0:i1 + 1], self.values[i0:i1 + 1], self.schema)

    def with_values(self, values: np.ndarray) -> "EmissionPathway":
        return EmissionPathway(self.years, values, self.schema)


@dataclass(frozen=True)
class ClimateState:
    """Carbon reservoirs, sink bookkeeping and thermal boxes at a year boundary."""

    reservoirs: np.ndarray = field(default_factory=lambda: np.zeros(4))  # GtC
    cumulative_uptake: float = 0.0                                       # GtC
    t1: float = 0.0                                                      # K
    t2: float = 0.0
    year: int = 0
    gas_concentrations: np.ndarray | None = None  # per schema gas; conc modes only
    alpha_warm: float = 1.0  # solver hint only; lets step-composition match run exactly

    def __post_init__(self):
        r = np.asarray(self.reservoirs, dtype=float)
        if r.shape != (4,) or not np.all(np.isfinite(r)):
            raise ValidationError("reservoirs must be 4 finite values")
        object.__setattr__(self, "reservoirs", r)
        if self.gas_concentrations is not None:
            object.__setattr__(
                self, "gas_concentrations",
                np.asarray(self.gas_concentrations, dtype=float),
            )

    @property
    def temperature(self) -> float:
        return self.t1 + self.t2

    @property
    def cumulative_emissions(self) -> float:
        return float(self.reservoirs.sum()) + self.cumulative_uptake

    def replace(self, **kw) -> "ClimateState":
        return replace(self, **kw)


def initial_state(pathway: EmissionPathway) -> ClimateState:
    """Preindustrial rest state aligned to the year before the pathway starts."""
    table = pathway.schema.compile()
    return ClimateState(
        reservoirs=np.zeros(4),
        cumulative_uptake=0.0,
        t1=0.0, t2=0.0,
        year=int(pathway.years[0]) - 1,
        gas_concentrations=table.conc0.copy(),
    )


@dataclass(frozen=True)
class TemperaturePathway:
    """Annual model outputs: anomaly, CO2 concentration and forcing breakdown."""

    years: np.ndarray
    temperature: np.ndarray        # K anomaly
    co2_ppm: np.ndarray
    forcing: np.ndarray            # total W/m2
    forcing_by_category: dict[str, np.ndarray]
    alpha: np.ndarray              # timescale adjustment used each year
    alpha_clamped: int             # number of years the solver hit its bounds
    final_state: ClimateState

    def __post_init__(self):
        n = self.years.size
        for name in ("temperature", "co2_ppm", "forcing", "alpha"):
            if getattr(self, name).size != n:
                raise ValidationError(f"{name} length does not match years")

    def at(self, year: int) -> dict[str, float]:
        i = int(year) - int(self.years[0])
        if i < 0 or i >= self.years.size:
            raise ValidationError(f"year {year} outside output range")
        return {
            "year": int(year),
            "temperature": float(self.temperature[i]),
            "co2_ppm": float(self.co2_ppm[i]),
            "forcing": float(self.forcing[i]),
        }
