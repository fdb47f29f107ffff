"""Gas schema: which species the model tracks and how each one forces climate.

A schema is configuration, not code: the bundled 39-species table lives in
the data bundle and any conforming table can be supplied instead. Each gas
declares how it enters the model:

* ``reservoir``  -- routed into the four-reservoir carbon cycle (CO2 mass
  carried internally as GtC).
* ``conc_sqrt``  -- single-lifetime concentration with square-root forcing
  (methane, nitrous oxide).
* ``conc_linear`` -- single-lifetime concentration with linear forcing
  (halocarbons and other minor greenhouse gases).
* ``emission``   -- no concentration state; forcing proportional to the
  annual emission (aerosol and ozone precursors).

A gas may carry one secondary emission-proportional term in another category
(methane's ozone contribution uses it).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ConfigurationError
from .params import FORCING_CATEGORIES

MODES = ("reservoir", "conc_sqrt", "conc_linear", "emission")

# Mass of carbon per mass of CO2; used wherever files carry CO2 as CO2 mass.
CARBON_FRACTION = 12.0 / 44.0


@dataclass(frozen=True)
class GasSpec:
    name: str
    unit: str                 # native unit the model works in (GtC/yr, Mt/yr, ...)
    mode: str
    category: str
    lifetime: float = 0.0     # years; concentration modes only
    conv: float = 0.0         # concentration units per native emission unit
    conc0: float = 0.0        # preindustrial concentration
    efficiency: float = 0.0   # W/m2 per concentration unit, or per emission unit
    efficiency2: float = 0.0  # secondary emission-proportional term
    category2: str = ""
    gwp100: float = 0.0       # GtCO2e per native emission unit

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigurationError(f"{self.name}: unknown mode {self.mode!r}")
        if self.category not in FORCING_CATEGORIES:
            raise ConfigurationError(f"{self.name}: unknown category {self.category!r}")
        if self.mode in ("conc_sqrt", "conc_linear") and self.lifetime <= 0:
            raise ConfigurationError(f"{self.name}: concentration gas needs lifetime > 0")
        if self.category2 and self.category2 not in FORCING_CATEGORIES:
            raise ConfigurationError(f"{self.name}: unknown category2 {self.category2!r}")


MODE_CODES = {m: i for i, m in enumerate(MODES)}
CATEGORY_CODES = {c: i for i, c in enumerate(FORCING_CATEGORIES)}


@dataclass(frozen=True)
class KernelGasTable:
    """Gas schema compiled to flat arrays for the simulation kernels."""

    mode: np.ndarray        # int64
    category: np.ndarray    # int64
    lifetime: np.ndarray
    conv: np.ndarray
    conc0: np.ndarray
    efficiency: np.ndarray
    efficiency2: np.ndarray
    category2: np.ndarray   # int64; -1 when absent


@dataclass(frozen=True)
class GasSchema:
    gases: tuple[GasSpec, ...]

    def __post_init__(self):
        names = [g.name for g in self.gases]
        if len(set(names)) != len(names):
            raise ConfigurationError("duplicate gas names in schema")
        if not any(g.mode == "reservoir" for g in self.gases):
            raise ConfigurationError("schema must contain at least one reservoir (CO2) gas")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.gases)

    def __len__(self) -> int:
        return len(self.gases)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def spec(self, name: str) -> GasSpec:
        return self.gases[self.index(name)]

    @property
    def reservoir_indices(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.gases) if g.mode == "reservoir")

    def compile(self) -> KernelGasTable:
        n = len(self.gases)
        return KernelGasTable(
            mode=np.array([MODE_CODES[g.mode] for g in self.gases], dtype=np.int64),
            category=np.array([CATEGORY_CODES[g.category] for g in self.gases], dtype=np.int64),
            lifetime=np.array([g.lifetime for g in self.gases], dtype=float),
            conv=np.array([g.conv for g in self.gases], dtype=float),
            conc0=np.array([g.conc0 for g in self.gases], dtype=float),
            efficiency=np.array([g.efficiency for g in self.gases], dtype=float),
            efficiency2=np.array([g.efficiency2 for g in self.gases], dtype=float),
            category2=np.array(
                [CATEGORY_CODES[g.category2] if g.category2 else -1 for g in self.gases],
                dtype=np.int64,
            ),
        )

    def co2e_weights(self) -> np.ndarray:
        """Per-gas GtCO2e per native emission unit."""
        return np.array([g.gwp100 for g in self.gases], dtype=float)

    def to_json(self) -> str:
        return json.dumps({"gases": [vars(g) for g in self.gases]}, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "GasSchema":
        doc = json.loads(text)
        return cls(gases=tuple(GasSpec(**g) for g in doc["gases"]))

    @classmethod
    def load(cls, path: str | Path) -> "GasSchema":
        return cls.from_json(Path(path).read_text())


def co2e_schema() -> GasSchema:
    """Single-gas operating mode: one CO2-equivalent series in GtC/yr."""
    return GasSchema(gases=(
        GasSpec(name="co2e", unit="GtC/yr", mode="reservoir", category="co2",
                gwp100=1.0 / CARBON_FRACTION),
    ))
