"""Socio-economic upscaling: company emission intensities to global pathways.

A portfolio's per-sector economic emission intensity (EEI, tCO2e per million
USD of gross value added) is compared against a benchmark ensemble of the
same sector; the intensity ratio rescales that sector's share of global
emissions, non-represented sectors keep the scenario's data, and the
adjusted base-year total follows the scenario's relative growth curve to
2100. Feeding the resulting pathway through the climate model yields the
portfolio's implied temperature.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, DomainError, TempalignError, ValidationError
from .fair.state import EmissionPathway
from .scenarios import Scenario, SectorShares
from .uncertainty import CredibleBand, EmissionUncertaintySpec, propagate

# Ingest-time currency conversion to USD (2022 mean rates).
DEFAULT_FX = {"USD": 1.0, "SEK": 0.0988, "EUR": 1.0516}

FULL_SCOPE_MASK = frozenset({1, 2, 3})


class SectorNotRepresented(TempalignError):
    """Raised when a portfolio holds no constituent in the requested sector."""


@dataclass(frozen=True)
class Constituent:
    """One company: scope 1-3 emissions (ktCO2e/yr) and GVA (million USD/yr)."""

    name: str
    sector: str
    scope1: float
    scope2: float
    scope3: float
    gva: float
    reporting_year: int | None = None

    def __post_init__(self):
        if self.gva <= 0:
            raise ValidationError(f"{self.name}: GVA must be positive")
        if min(self.scope1, self.scope2, self.scope3) < 0:
            raise ValidationError(f"{self.name}: scope emissions must be non-negative")

    def emissions_kt(self, scope_mask=FULL_SCOPE_MASK) -> float:
        mask = frozenset(scope_mask)
        if not mask or not mask <= FULL_SCOPE_MASK:
            raise ConfigurationError(f"scope mask must be a non-empty subset of {{1,2,3}}")
        total = 0.0
        if 1 in mask:
            total += self.scope1
        if 2 in mask:
            total += self.scope2
        if 3 in mask:
            total += self.scope3
        return total


@dataclass(frozen=True)
class Portfolio:
    constituents: tuple[Constituent, ...]
    base_year: int

    def __post_init__(self):
        if not self.constituents:
            raise ValidationError("portfolio must not be empty")

    def sectors(self) -> tuple[str, ...]:
        seen = []
        for c in self.constituents:
            if c.sector not in seen:
                seen.append(c.sector)
        return tuple(seen)

    def in_sector(self, sector: str) -> tuple[Constituent, ...]:
        return tuple(c for c in self.constituents if c.sector == sector)

    def total_emissions_kt(self, scope_mask=FULL_SCOPE_MASK) -> float:
        return sum(c.emissions_kt(scope_mask) for c in self.constituents)


@dataclass(frozen=True)
class BenchmarkEnsemble:
    """Sector benchmark companies, same shape as portfolio constituents."""

    constituents: tuple[Constituent, ...]
    base_year: int

    def __post_init__(self):
        if not self.constituents:
            raise ValidationError("benchmark ensemble must not be empty")
        by_sector: dict[str, float] = {}
        for c in self.constituents:
            by_sector[c.sector] = by_sector.get(c.sector, 0.0) + c.gva
        if any(v <= 0 for v in by_sector.values()):
            raise ValidationError("each benchmark sector needs positive total GVA")

    def in_sector(self, sector: str) -> tuple[Constituent, ...]:
        return tuple(c for c in self.constituents if c.sector == sector)


def company_eei(c: Constituent, scope_mask=FULL_SCOPE_MASK) -> float:
    """Emission intensity: selected-scope emissions (t) per million USD of GVA."""
    return c.emissions_kt(scope_mask) * 1000.0 / c.gva


def portfolio_sector_eei(p: Portfolio, sector: str, scope_mask=FULL_SCOPE_MASK) -> float:
    """Emission-weighted average EEI of the portfolio's constituents in a sector."""
    members = p.in_sector(sector)
    if not members:
        raise SectorNotRepresented(sector)
    weights = np.array([c.emissions_kt(scope_mask) for c in members])
    eeis = np.array([company_eei(c, scope_mask) for c in members])
    total = weights.sum()
    if total == 0.0:
        # all-zero emitters: every EEI is 0, so the weighted mean is too
        return 0.0
    return float((weights / total) @ eeis)


def benchmark_sector_eei(b: BenchmarkEnsemble, sector: str,
                         scope_mask=FULL_SCOPE_MASK) -> float:
    """GVA-weighted mean EEI, equal to total emissions over total GVA."""
    members = b.in_sector(sector)
    if not members:
        raise ValidationError(f"benchmark has no companies in sector {sector!r}")
    gva = np.array([c.gva for c in members])
    eeis = np.array([company_eei(c, scope_mask) for c in members])
    return float((gva @ eeis) / gva.sum())


def portfolio_sector_emissions(eei_portfolio: float, eei_benchmark: float,
                               sector_emissions_per_gas: dict[str, float]) -> dict[str, float]:
    """Scale every gas of a sector by the portfolio/benchmark intensity ratio."""
    if eei_benchmark <= 0:
        raise DomainError("benchmark EEI must be positive")
    ratio = eei_portfolio / eei_benchmark
    return {gas: ratio * amount for gas, amount in sector_emissions_per_gas.items()}


def intensity_ratios(p: Portfolio, b: BenchmarkEnsemble,
                     scope_mask=FULL_SCOPE_MASK) -> dict[str, float]:
    """Portfolio-to-benchmark EEI ratio per represented sector."""
    out = {}
    for sector in p.sectors():
        eei_p = portfolio_sector_eei(p, sector, scope_mask)
        eei_b = benchmark_sector_eei(b, sector, scope_mask)
        if eei_b <= 0:
            raise DomainError(f"benchmark EEI for {sector!r} must be positive")
        out[sector] = eei_p / eei_b
    return out


def pathway_adjustment_factor(ratios: dict[str, float], shares: SectorShares) -> float:
    """Global base-year multiplier implied by the per-sector intensity ratios.

    Represented sectors contribute share * ratio, all remaining emissions
    stay untouched; because sector disaggregation is proportional across
    gases, the adjustment collapses to one scalar.
    """
    k = 1.0
    for sector, ratio in ratios.items():
        if sector not in shares:
            raise ConfigurationError(f"sector {sector!r} missing from the share table")
        k += shares.share_of(sector) * (ratio - 1.0)
    return k


def portfolio_global_pathway(p: Portfolio, b: BenchmarkEnsemble,
                             scenario: Scenario, shares: SectorShares,
                             scope_mask=FULL_SCOPE_MASK) -> EmissionPathway:
    """Global per-gas pathway consistent with the portfolio's intensities.

    Years before the portfolio base year keep the scenario's data; from the
    base year on, the adjusted base-year amount of every gas follows the
    scenario's relative growth curve. Gases with a zero base-year value keep
    the scenario series unchanged (no growth curve is defined for them).
    """
    pathway = scenario.pathway
    base_idx = pathway.year_index(p.base_year)  # raises if the base year is missing
    k = pathway_adjustment_factor(intensity_ratios(p, b, scope_mask), shares)
    values = pathway.values.copy()
    scaled = values[base_idx:] * k
    zero_base = pathway.values[base_idx] == 0.0
    if np.any(zero_base):
        scaled[:, zero_base] = pathway.values[base_idx:, zero_base]
    values[base_idx:] = scaled
    return pathway.with_values(values)


def implied_temperature(p: Portfolio, b: BenchmarkEnsemble, scenario: Scenario,
                        shares: SectorShares, chain=None,
                        spec: EmissionUncertaintySpec | None = None,
                        n: int = 1000, levels=(0.9,), seed: int = 0,
                        scope_mask=FULL_SCOPE_MASK,
                        summary_years: tuple[int, ...] = (2050,)):
    """Credible band plus scalar summaries of the portfolio-implied warming.

    Returns (band, summary) where summary carries the Monte-Carlo mean and
    median at 2050 and at the end of the pathway.
    """
    pathway = portfolio_global_pathway(p, b, scenario, shares, scope_mask)
    band = propagate(pathway, chain=chain, spec=spec, n=n, levels=levels,
                     seed=seed, base_year=p.base_year,
                     exo=scenario.exogenous_forcing)
    end_year = int(band.years[-1])
    summary = {
        "scenario": scenario.id,
        "end_year": end_year,
        "mean_end": float(band.mean[-1]),
        "median_end": float(band.median[-1]),
    }
    for year in summary_years:
        point = band.at(year, level=sorted(band.bands)[0])
        summary[f"mean_{year}"] = point["mean"]
        summary[f"median_{year}"] = point["median"]
    return band, summary


# ---------------------------------------------------------------------------
# ingestion helpers


def gross_value_added(ebitda: float, employee_compensation: float) -> float:
    """Income-approach GVA: EBITDA plus personnel costs."""
    return ebitda + employee_compensation


def prorate_fiscal_year(value_fy_current: float, value_fy_next: float,
                        fy_end_month: int) -> float:
    """Month-weighted blend of two fiscal years onto the calendar year.

    A fiscal year ending in month m covers m months of the calendar year it
    ends in; the calendar-year estimate blends the two overlapping fiscal
    years accordingly.
    """
    if not (1 <= fy_end_month <= 12):
        raise ConfigurationError("fiscal year end month must be 1..12")
    w = fy_end_month / 12.0
    return w * value_fy_current + (1.0 - w) * value_fy_next


def _constituent_from_json(entry: dict, fx: dict[str, float]) -> Constituent:
    if "gva_musd" in entry:
        gva = float(entry["gva_musd"])
    elif "gva_value" in entry:
        currency = entry.get("gva_currency", "USD")
        if currency not in fx:
            raise ConfigurationError(f"no FX rate configured for {currency!r}")
        gva = float(entry["gva_value"]) * fx[currency]
    else:
        raise ConfigurationError(f"constituent {entry.get('name')!r} lacks GVA")
    return Constituent(
        name=entry["name"], sector=entry["sector"],
        scope1=float(entry["scope1_kt"]), scope2=float(entry["scope2_kt"]),
        scope3=float(entry["scope3_kt"]), gva=gva,
        reporting_year=entry.get("reporting_year"))


def load_portfolio(path: str | Path, fx: dict[str, float] | None = None) -> Portfolio:
    doc = json.loads(Path(path).read_text())
    return portfolio_from_dict(doc, fx)


def portfolio_from_dict(doc: dict, fx: dict[str, float] | None = None) -> Portfolio:
    fx = fx or DEFAULT_FX
    try:
        constituents = tuple(_constituent_from_json(e, fx) for e in doc["constituents"])
        return Portfolio(constituents=constituents, base_year=int(doc["base_year"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed portfolio document: {exc}")


def load_benchmark(path: str | Path, fx: dict[str, float] | None = None) -> BenchmarkEnsemble:
    doc = json.loads(Path(path).read_text())
    fx = fx or DEFAULT_FX
    constituents = tuple(_constituent_from_json(e, fx) for e in doc["constituents"])
    return BenchmarkEnsemble(constituents=constituents, base_year=int(doc["base_year"]))


def portfolio_to_dict(p: Portfolio) -> dict:
    return {
        "base_year": p.base_year,
        "constituents": [
            {"name": c.name, "sector": c.sector, "scope1_kt": c.scope1,
             "scope2_kt": c.scope2, "scope3_kt": c.scope3, "gva_musd": c.gva,
             **({"reporting_year": c.reporting_year} if c.reporting_year else {})}
            for c in p.constituents
        ],
    }
