"""Emission-data uncertainty and Monte-Carlo propagation to credible bands.

Percentage deviations of present-day emissions are drawn from a normal or
lognormal family; each draw becomes a constant offset over the whole pathway
anchored to the base-year value. Parameter draws (from a posterior chain)
and emission draws combine in a single propagation loop; per-draw RNG
streams are split from the root seed so results do not depend on evaluation
order or worker count.

Lognormal parameterization: the reported (mu, sigma) are percent-scale. The
sampled deviation is p = exp(N(log mu, log(1 + sigma/100))), so p is always
positive with median mu and one-sigma multiplicative spread (1 + sigma/100).
To mirror an inventory accuracy statement like "within -15% to +20% (95% of
a lognormal)", fit mu to the interval midpoint ratio and sigma so that
exp(1.96 * log(1 + sigma/100)) matches the interval's upper/median ratio.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, DomainError, ValidationError
from .fair.model import run
from .fair.params import DEFAULT_CONFIG, ModelConfig, ParameterVector
from .fair.state import EMISSION_FLOOR, EmissionPathway
from .scenarios import Scenario

PROVENANCES = ("deterministic", "parameter-only", "emission-only", "combined")


@dataclass(frozen=True)
class EmissionUncertaintySpec:
    """Distribution of the percentage deviation of base-year emissions."""

    family: str = "normal"      # normal | lognormal
    mu: float = 0.0             # percent
    sigma: float = 0.0          # percent
    mode: str = "co2"           # co2 | proportional (all gases)

    def __post_init__(self):
        if self.family not in ("normal", "lognormal"):
            raise ConfigurationError(f"unknown uncertainty family {self.family!r}")
        if self.sigma < 0:
            raise ConfigurationError("sigma must be non-negative")
        if self.family == "lognormal" and self.mu <= 0:
            raise ConfigurationError("lognormal mu (median percent) must be positive")
        if self.mode not in ("co2", "proportional"):
            raise ConfigurationError(f"unknown perturbation mode {self.mode!r}")

    def sample_percent(self, rng: np.random.Generator) -> float:
        if self.family == "normal":
            if self.sigma == 0.0:
                return self.mu
            return float(rng.normal(self.mu, self.sigma))
        log_sigma = math.log1p(self.sigma / 100.0)
        return float(math.exp(rng.normal(math.log(self.mu), log_sigma)))


def sample_offset(spec: EmissionUncertaintySpec, base_year_value: float,
                  rng: np.random.Generator) -> float:
    """Draw one offset: sampled percent deviation times the base-year value."""
    if not math.isfinite(base_year_value):
        raise DomainError("base-year value must be finite")
    return (spec.sample_percent(rng) / 100.0) * base_year_value


def perturb_pathway(pathway: EmissionPathway, offset: float,
                    mode: str = "co2", base_year: int | None = None) -> EmissionPathway:
    """Shift the pathway by a constant annual offset.

    In ``co2`` mode the offset (GtC) spreads across the reservoir-routed
    gas columns in proportion to their base-year values; in ``proportional``
    mode the offset's fraction of the base-year CO2 total is applied to every
    gas relative to its own base-year value. Values falling below the global
    sanity floor clamp and are flagged on the returned pathway's metadata.
    """
    values = pathway.values.copy()
    base_idx = pathway.year_index(base_year) if base_year is not None else 0
    co2_cols = list(pathway.schema.reservoir_indices)
    co2_base = float(values[base_idx, co2_cols].sum())

    if mode == "co2":
        base = values[base_idx, co2_cols]
        weights = base / base.sum() if base.sum() != 0 else np.full(len(co2_cols), 1.0 / len(co2_cols))
        values[:, co2_cols] += offset * weights
    elif mode == "proportional":
        if co2_base == 0:
            raise DomainError("proportional mode needs a nonzero base-year CO2 total")
        fraction = offset / co2_base
        values += fraction * values[base_idx]
    else:
        raise ConfigurationError(f"unknown perturbation mode {mode!r}")

    clamped = bool(np.any(values < EMISSION_FLOOR))
    if clamped:
        values = np.maximum(values, EMISSION_FLOOR)
    out = pathway.with_values(values)
    object.__setattr__(out, "_floor_clamped", clamped)
    return out


@dataclass(frozen=True)
class CredibleBand:
    """Quantile envelope of a temperature ensemble."""

    years: np.ndarray
    median: np.ndarray
    mean: np.ndarray
    bands: dict[float, tuple[np.ndarray, np.ndarray]]  # level -> (lower, upper)
    n_samples: int
    provenance: str
    seed: int | None = None

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValidationError(f"unknown provenance {self.provenance!r}")
        for level, (lo, hi) in self.bands.items():
            if not (0.0 < level < 1.0):
                raise ValidationError(f"band level {level} outside (0, 1)")
            if np.any(lo > self.median + 1e-12) or np.any(hi < self.median - 1e-12):
                raise ValidationError(f"{level:.0%} band does not bracket the median")
        levels = sorted(self.bands)
        for narrow, wide in zip(levels, levels[1:]):
            lo_n, hi_n = self.bands[narrow]
            lo_w, hi_w = self.bands[wide]
            if np.any(lo_w > lo_n + 1e-12) or np.any(hi_w < hi_n - 1e-12):
                raise ValidationError("bands are not nested across levels")

    def at(self, year: int, level: float = 0.9) -> dict[str, float]:
        i = int(year) - int(self.years[0])
        if i < 0 or i >= self.years.size:
            raise ValidationError(f"year {year} outside band range")
        lo, hi = self.bands[level]
        return {"year": int(year), "median": float(self.median[i]),
                "mean": float(self.mean[i]),
                "lower": float(lo[i]), "upper": float(hi[i])}

    def width(self, year: int, level: float = 0.9) -> float:
        d = self.at(year, level)
        return d["upper"] - d["lower"]

    def to_csv(self, path: str | Path) -> None:
        """`year, median, lo90, hi90, lo99, hi99, ...` plus a trailing mean."""
        levels = sorted(self.bands)
        header = ["year", "median"]
        for level in levels:
            pct = f"{level * 100:g}"
            header += [f"lo{pct}", f"hi{pct}"]
        header.append("mean")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for i, year in enumerate(self.years):
                row = [int(year), repr(float(self.median[i]))]
                for level in levels:
                    lo, hi = self.bands[level]
                    row += [repr(float(lo[i])), repr(float(hi[i]))]
                row.append(repr(float(self.mean[i])))
                writer.writerow(row)

    def to_dict(self) -> dict:
        return {
            "years": self.years.tolist(),
            "median": self.median.tolist(),
            "mean": self.mean.tolist(),
            "bands": {f"{level:g}": {"lower": lo.tolist(), "upper": hi.tolist()}
                      for level, (lo, hi) in sorted(self.bands.items())},
            "n_samples": self.n_samples,
            "provenance": self.provenance,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def band_from_ensemble(years: np.ndarray, ensemble: np.ndarray,
                       levels, n_samples: int, provenance: str,
                       seed: int | None = None) -> CredibleBand:
    """Reduce an [n_draws, n_years] ensemble to its quantile envelope."""
    median = np.quantile(ensemble, 0.5, axis=0)
    mean = ensemble.mean(axis=0)
    bands = {}
    for level in levels:
        tail = (1.0 - level) / 2.0
        bands[float(level)] = (np.quantile(ensemble, tail, axis=0),
                               np.quantile(ensemble, 1.0 - tail, axis=0))
    return CredibleBand(years=years.copy(), median=median, mean=mean,
                        bands=bands, n_samples=n_samples,
                        provenance=provenance, seed=seed)


def _theta_matrix(chain) -> np.ndarray | None:
    if chain is None:
        return None
    if hasattr(chain, "posterior_samples"):
        return chain.posterior_samples()
    arr = np.asarray(chain, dtype=float)
    if arr.ndim == 1:
        return None  # a single fixed parameter vector, not a chain
    return arr


def propagate(scenario: Scenario | EmissionPathway, chain=None,
              theta: ParameterVector | None = None,
              spec: EmissionUncertaintySpec | None = None,
              n: int = 1000, levels=(0.9,), seed: int = 0,
              base_year: int | None = None, exo=None,
              model_config: ModelConfig = DEFAULT_CONFIG,
              max_failure_fraction: float = 0.01) -> CredibleBand:
    """Monte-Carlo propagation of parameter and/or emission uncertainty.

    Per draw: a parameter vector is resampled from the chain (when given,
    otherwise the fixed theta is used) and an emission offset is drawn (when
    a spec is given); the forward model runs on the perturbed pathway and the
    temperature ensemble reduces to a CredibleBand. More than
    `max_failure_fraction` forward failures abort.
    """
    if n < 100:
        raise ConfigurationError("propagation needs n >= 100 draws")
    pathway = scenario.pathway if isinstance(scenario, Scenario) else scenario
    if exo is None and isinstance(scenario, Scenario):
        exo = scenario.exogenous_forcing

    thetas = _theta_matrix(chain)
    if thetas is None and chain is not None and theta is None:
        theta = ParameterVector.from_array(np.asarray(chain, dtype=float))
    if theta is None and thetas is None:
        theta = ParameterVector()

    if thetas is not None and spec is not None:
        provenance = "combined"
    elif thetas is not None:
        provenance = "parameter-only"
    elif spec is not None:
        provenance = "emission-only"
    else:
        provenance = "deterministic"

    base_idx = pathway.year_index(base_year) if base_year is not None else 0
    co2_cols = list(pathway.schema.reservoir_indices)
    co2_base = float(pathway.values[base_idx, co2_cols].sum())

    root = np.random.SeedSequence(seed)
    draw_seeds = root.spawn(n + 1)
    chain_rng = np.random.default_rng(draw_seeds[0])
    draw_idx = (chain_rng.integers(0, thetas.shape[0], size=n)
                if thetas is not None else None)

    ensemble = np.empty((n, pathway.n_years))
    failures = 0
    for i in range(n):
        rng = np.random.default_rng(draw_seeds[i + 1])
        pv = (ParameterVector.from_array(thetas[draw_idx[i]])
              if thetas is not None else theta)
        pw = pathway
        if spec is not None:
            offset = sample_offset(spec, co2_base, rng)
            pw = perturb_pathway(pathway, offset, mode=spec.mode, base_year=base_year)
        try:
            out = run(pw, pv, exo=exo, config=model_config)
            ensemble[i] = out.temperature
        except DomainError:
            failures += 1
            ensemble[i] = np.nan
    if failures > max_failure_fraction * n:
        raise DomainError(
            f"{failures}/{n} forward-model failures exceed the "
            f"{max_failure_fraction:.0%} budget")
    if failures:
        ensemble = ensemble[~np.isnan(ensemble).any(axis=1)]

    return band_from_ensemble(pathway.years, ensemble, levels,
                              n_samples=ensemble.shape[0],
                              provenance=provenance, seed=seed)
