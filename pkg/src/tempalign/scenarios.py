"""Scenario store: ingestion, validation and serving of emission pathways,
sector shares and historical observations.

File formats
------------
Scenario CSV: header ``year,<gas_1>,...,<gas_n>`` (one row per year); an
optional ``exo_forcing_wm2`` column carries exogenous (solar + volcanic)
forcing and defaults to zero when absent. A sidecar ``<name>.meta.json``
declares the scenario id and per-gas units; units are converted to the gas
schema's native units at load time (CO2 mass to carbon mass uses 12/44).

Sector shares JSON: ``{"sectors": [{"name", "share", "parent"?}]}``.

Observation CSV: ``year,temperature,co2_ppm``.

Loaded objects are immutable after validation and safe to share across
concurrent readers.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, DataError, FormatError, SchemaError, ValidationError
from .fair.gases import CARBON_FRACTION, GasSchema
from .fair.state import EmissionPathway

RESIDUAL_SECTOR = "unrepresented_sectors"
SHARE_TOL = 1e-9

# file unit -> native unit -> multiplicative factor
_UNIT_CONVERSIONS = {
    ("GtC/yr", "GtC/yr"): 1.0,
    ("GtCO2/yr", "GtC/yr"): CARBON_FRACTION,
    ("MtCO2/yr", "GtC/yr"): CARBON_FRACTION * 1e-3,
    ("GtCO2e/yr", "GtC/yr"): CARBON_FRACTION,
    ("Mt/yr", "Mt/yr"): 1.0,
    ("kt/yr", "Mt/yr"): 1e-3,
    ("Mt/yr", "kt/yr"): 1e3,
    ("kt/yr", "kt/yr"): 1.0,
}


def unit_factor(file_unit: str, native_unit: str) -> float:
    try:
        return _UNIT_CONVERSIONS[(file_unit, native_unit)]
    except KeyError:
        raise SchemaError(f"no conversion from {file_unit!r} to {native_unit!r}")


@dataclass(frozen=True)
class Scenario:
    """A validated emission scenario on an annual axis."""

    id: str
    pathway: EmissionPathway
    exogenous_forcing: np.ndarray  # W/m2 per year

    def __post_init__(self):
        exo = np.asarray(self.exogenous_forcing, dtype=float)
        if exo.shape != (self.pathway.n_years,):
            raise ValidationError("exogenous forcing must have one value per year")
        if not np.all(np.isfinite(exo)):
            raise ValidationError("exogenous forcing must be finite")
        object.__setattr__(self, "exogenous_forcing", exo)

    @property
    def years(self) -> np.ndarray:
        return self.pathway.years

    @property
    def emissions(self) -> np.ndarray:
        return self.pathway.values

    @property
    def schema(self) -> GasSchema:
        return self.pathway.schema


def _read_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise FormatError(f"{path}: empty scenario file")
    return rows[0], rows[1:]


def load_scenario(path: str | Path, gas_schema: GasSchema) -> Scenario:
    """Load and validate one scenario CSV against a gas schema.

    Raises SchemaError for a header mismatch, FormatError for structural
    problems (empty file, non-monotone years) and DataError for invalid
    values.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    header, body = _read_rows(path)
    header = [h.strip() for h in header]
    if not body:
        raise FormatError(f"{path}: no data rows")
    if header[0] != "year":
        raise FormatError(f"{path}: first column must be 'year', got {header[0]!r}")

    meta = _load_sidecar(path)
    columns = {name: i for i, name in enumerate(header)}
    missing = [g for g in gas_schema.names if g not in columns]
    if missing:
        raise SchemaError(f"{path}: missing gas columns {missing}")

    n = len(body)
    years = np.empty(n, dtype=int)
    values = np.empty((n, len(gas_schema)))
    exo = np.zeros(n)
    exo_col = columns.get("exo_forcing_wm2")

    for r, row in enumerate(body):
        if len(row) != len(header):
            raise FormatError(f"{path}: row {r + 2} has {len(row)} cells, expected {len(header)}")
        try:
            years[r] = int(row[0])
        except ValueError:
            raise FormatError(f"{path}: row {r + 2}: year {row[0]!r} is not an integer")
        for g, name in enumerate(gas_schema.names):
            cell = row[columns[name]]
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"{path}: row {r + 2}: {name} value {cell!r} is not numeric")
            if math.isnan(v):
                raise DataError(f"{path}: row {r + 2}: NaN in column {name}")
            values[r, g] = v
        if exo_col is not None:
            exo[r] = float(row[exo_col])

    if np.any(np.diff(years) != 1):
        raise FormatError(f"{path}: years must be strictly increasing with step 1")

    units = meta.get("units", {})
    for g, spec in enumerate(gas_schema.gases):
        file_unit = units.get(spec.name, spec.unit)
        factor = unit_factor(file_unit, spec.unit)
        if factor != 1.0:
            values[:, g] *= factor

    try:
        pathway = EmissionPathway(years=years, values=values, schema=gas_schema)
    except ValidationError as exc:
        raise DataError(f"{path}: {exc}")
    return Scenario(id=meta.get("id", path.stem), pathway=pathway, exogenous_forcing=exo)


def _load_sidecar(path: Path) -> dict:
    sidecar = path.with_suffix(".meta.json")
    if sidecar.exists():
        return json.loads(sidecar.read_text())
    return {}


def save_scenario(scenario: Scenario, path: str | Path) -> None:
    """Write scenario + sidecar in native units; numeric payload round-trips exactly."""
    path = Path(path)
    names = scenario.schema.names
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year", *names, "exo_forcing_wm2"])
        for i, year in enumerate(scenario.years):
            writer.writerow([
                int(year),
                *(repr(float(v)) for v in scenario.emissions[i]),
                repr(float(scenario.exogenous_forcing[i])),
            ])
    sidecar = {"id": scenario.id,
               "units": {g.name: g.unit for g in scenario.schema.gases}}
    path.with_suffix(".meta.json").write_text(json.dumps(sidecar, indent=2))


@dataclass(frozen=True)
class SectorShare:
    sector: str
    share: float
    parent: str | None = None

    def __post_init__(self):
        if not (0.0 <= self.share <= 1.0):
            raise ConfigurationError(f"sector {self.sector!r}: share {self.share} outside [0, 1]")


@dataclass(frozen=True)
class SectorShares:
    """Validated sector share table; top-level shares partition the total.

    When the supplied top-level shares sum to less than one, an implicit
    residual sector absorbs the remainder so disaggregation reconstructs the
    global pathway exactly.
    """

    shares: tuple[SectorShare, ...]

    def __post_init__(self):
        by_name = {}
        for s in self.shares:
            if s.sector in by_name:
                raise ConfigurationError(f"duplicate sector {s.sector!r}")
            by_name[s.sector] = s
        for s in self.shares:
            if s.parent is not None:
                if s.parent not in by_name:
                    raise ConfigurationError(f"{s.sector!r}: unknown parent {s.parent!r}")
                if s.share > by_name[s.parent].share + SHARE_TOL:
                    raise ConfigurationError(
                        f"{s.sector!r}: share {s.share} exceeds parent share "
                        f"{by_name[s.parent].share}")
        top = [s for s in self.shares if s.parent is None]
        total = sum(s.share for s in top)
        if total > 1.0 + SHARE_TOL:
            raise ConfigurationError(f"top-level shares sum to {total}, above 1")

    @property
    def top_level(self) -> tuple[SectorShare, ...]:
        out = [s for s in self.shares if s.parent is None]
        residual = 1.0 - sum(s.share for s in out)
        if residual > SHARE_TOL:
            out.append(SectorShare(sector=RESIDUAL_SECTOR, share=residual))
        return tuple(out)

    def names(self) -> tuple[str, ...]:
        return tuple(s.sector for s in self.shares)

    def share_of(self, sector: str) -> float:
        for s in self.shares:
            if s.sector == sector:
                return s.share
        raise KeyError(sector)

    def __contains__(self, sector: str) -> bool:
        return any(s.sector == sector for s in self.shares)


def load_sector_shares(path: str | Path) -> SectorShares:
    doc = json.loads(Path(path).read_text())
    shares = []
    for entry in doc["sectors"]:
        share = entry["share"]
        # stored either as a fraction or as percent; percent tables mark it
        if doc.get("unit") == "percent":
            share = share / 100.0
        shares.append(SectorShare(sector=entry["name"], share=share,
                                  parent=entry.get("parent")))
    return SectorShares(shares=tuple(shares))


def disaggregate_sectors(scenario: Scenario, shares: SectorShares) -> dict[str, EmissionPathway]:
    """Split the global pathway into per-sector pathways by constant shares.

    Every named sector (and the implicit residual) receives the global
    pathway scaled by its share, so summing the top-level sector pathways
    reproduces the input for every year and gas.
    """
    out: dict[str, EmissionPathway] = {}
    for s in list(shares.shares) + [t for t in shares.top_level
                                    if t.sector == RESIDUAL_SECTOR]:
        out[s.sector] = scenario.pathway.with_values(scenario.emissions * s.share)
    return out


@dataclass(frozen=True)
class ObservationSeries:
    """Annual historical observations used by the calibration likelihood."""

    years: np.ndarray
    temperature_anomaly: np.ndarray   # K, relative to the declared reference
    co2_concentration: np.ndarray     # ppm
    temperature_sd: float
    co2_sd: float
    reference: str = "preindustrial model baseline"

    def __post_init__(self):
        years = np.asarray(self.years, dtype=int)
        temp = np.asarray(self.temperature_anomaly, dtype=float)
        conc = np.asarray(self.co2_concentration, dtype=float)
        if not (years.size == temp.size == conc.size):
            raise ValidationError("observation series lengths differ")
        if years.size == 0:
            raise ValidationError("empty observation series")
        if np.any(np.diff(years) <= 0):
            raise ValidationError("observation years must be strictly increasing")
        if np.any(np.isnan(temp)) or np.any(np.isnan(conc)):
            raise ValidationError("observations contain NaN within declared coverage")
        if self.temperature_sd <= 0 or self.co2_sd <= 0:
            raise ValidationError("observation noise SDs must be positive")
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "temperature_anomaly", temp)
        object.__setattr__(self, "co2_concentration", conc)


def load_observations(path: str | Path, temperature_sd: float = 0.1,
                      co2_sd: float = 1.0) -> ObservationSeries:
    """Read `year,temperature,co2_ppm` rows; noise SDs are caller-declared."""
    path = Path(path)
    header, body = _read_rows(path)
    header = [h.strip() for h in header]
    if header[:3] != ["year", "temperature", "co2_ppm"]:
        raise FormatError(f"{path}: expected header year,temperature,co2_ppm")
    years, temp, conc = [], [], []
    for r, row in enumerate(body):
        try:
            years.append(int(row[0]))
            temp.append(float(row[1]))
            conc.append(float(row[2]))
        except ValueError:
            raise DataError(f"{path}: row {r + 2} is not numeric")
    return ObservationSeries(
        years=np.array(years), temperature_anomaly=np.array(temp),
        co2_concentration=np.array(conc),
        temperature_sd=temperature_sd, co2_sd=co2_sd)


@dataclass
class ScenarioStore:
    """In-memory catalog of loaded scenarios; immutable entries."""

    scenarios: dict[str, Scenario] = field(default_factory=dict)
    sector_shares: SectorShares | None = None
    observations: ObservationSeries | None = None

    def add(self, scenario: Scenario) -> None:
        if scenario.id in self.scenarios:
            raise ConfigurationError(f"duplicate scenario id {scenario.id!r}")
        self.scenarios[scenario.id] = scenario

    def get(self, scenario_id: str) -> Scenario:
        try:
            return self.scenarios[scenario_id]
        except KeyError:
            raise KeyError(f"unknown scenario {scenario_id!r}")

    def ids(self) -> list[str]:
        return sorted(self.scenarios)
