"""Access to the bundled example dataset.

The default bundle ships inside the package; the TEMPALIGN_DATA environment
variable points the engine at an alternative directory with the same layout:

    gas_schema_39.json          39-species gas schema
    scenario_<ID>.csv/.meta.json  emission scenarios, 1765-2100
    observations.csv            historical temperature / CO2 series
    sector_shares.json          top-level and sub-sector emission shares
    portfolios/*.json           portfolio and benchmark-ensemble files
"""

from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path

from .errors import ConfigurationError
from .fair.gases import GasSchema
from .scenarios import (
    ObservationSeries,
    Scenario,
    ScenarioStore,
    SectorShares,
    load_observations,
    load_scenario,
    load_sector_shares,
)
from .socioecon import BenchmarkEnsemble, Portfolio, load_benchmark, load_portfolio

SCENARIO_IDS = (
    "SSP1-RCP1.9", "SSP1-RCP2.6", "SSP2-RCP4.5", "SSP3-RCP7.0", "SSP5-RCP8.5",
)

# Declared noise of the bundled observation series.
OBS_TEMPERATURE_SD = 0.08
OBS_CO2_SD = 0.5


def data_dir() -> Path:
    env = os.environ.get("TEMPALIGN_DATA")
    if env:
        path = Path(env)
        if not path.is_dir():
            raise ConfigurationError(f"TEMPALIGN_DATA={env} is not a directory")
        return path
    return Path(__file__).parent / "data"


def _scenario_filename(scenario_id: str) -> str:
    return "scenario_" + scenario_id.replace(".", "p") + ".csv"


@lru_cache(maxsize=4)
def load_gas_schema(root: str | None = None) -> GasSchema:
    base = Path(root) if root else data_dir()
    return GasSchema.load(base / "gas_schema_39.json")


def load_bundled_scenario(scenario_id: str) -> Scenario:
    return load_scenario(data_dir() / _scenario_filename(scenario_id), load_gas_schema())


def load_store() -> ScenarioStore:
    store = ScenarioStore()
    for sid in SCENARIO_IDS:
        path = data_dir() / _scenario_filename(sid)
        if path.exists():
            store.add(load_scenario(path, load_gas_schema()))
    shares_path = data_dir() / "sector_shares.json"
    if shares_path.exists():
        store.sector_shares = load_sector_shares(shares_path)
    obs_path = data_dir() / "observations.csv"
    if obs_path.exists():
        store.observations = load_observations(
            obs_path, temperature_sd=OBS_TEMPERATURE_SD, co2_sd=OBS_CO2_SD)
    return store


def load_bundled_observations() -> ObservationSeries:
    return load_observations(data_dir() / "observations.csv",
                             temperature_sd=OBS_TEMPERATURE_SD, co2_sd=OBS_CO2_SD)


def load_bundled_shares() -> SectorShares:
    return load_sector_shares(data_dir() / "sector_shares.json")


def load_bundled_portfolio(name: str) -> Portfolio:
    return load_portfolio(data_dir() / "portfolios" / f"{name}.json")


def load_bundled_benchmark(name: str = "stoxx_iron_steel") -> BenchmarkEnsemble:
    return load_benchmark(data_dir() / "portfolios" / f"{name}.json")
