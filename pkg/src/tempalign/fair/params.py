"""Calibratable climate-model parameter vector.

The model exposes exactly 20 free parameters: three free reservoir
fractions (the fourth is fixed by the sum-to-one constraint), four reservoir
lifetimes, the three impulse-response target coefficients, the CO2-doubling
forcing, the two-box thermal response (two amplitudes, two timescales), and
five scale factors for the non-CO2 forcing categories.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..errors import ValidationError

N_PARAMS = 20

# Flat-vector layout. a4 is implied by 1 - a1 - a2 - a3.
PARAM_NAMES = (
    "a1", "a2", "a3",
    "tau1", "tau2", "tau3", "tau4",
    "r0", "rC", "rT",
    "F2x",
    "q1", "q2",
    "d1", "d2",
    "scale_ch4", "scale_n2o", "scale_aerosol", "scale_ozone", "scale_other",
)

FORCING_CATEGORIES = ("co2", "ch4", "n2o", "aerosol", "ozone", "other")
SCALED_CATEGORIES = FORCING_CATEGORIES[1:]

A_SUM_TOL = 1e-12


@dataclass(frozen=True)
class ParameterVector:
    """The 20 calibratable parameters of the climate model."""

    a: tuple[float, float, float, float] = (0.2173, 0.2240, 0.2824, 0.2763)
    tau: tuple[float, float, float, float] = (1.0e6, 394.4, 36.54, 4.304)
    r0: float = 35.0          # years
    rC: float = 0.019         # years per GtC of cumulative uptake
    rT: float = 4.165         # years per K
    F2x: float = 3.71         # W/m2 at CO2 doubling
    q1: float = 0.33          # K per W/m2
    q2: float = 0.41
    d1: float = 239.0         # years
    d2: float = 4.1
    scales: tuple[float, float, float, float, float] = (1.0, 1.0, 1.0, 1.0, 1.0)

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if abs(float(a.sum()) - 1.0) > A_SUM_TOL:
            raise ValidationError(f"reservoir fractions must sum to 1, got {a.sum()!r}")
        if np.any(a < 0):
            raise ValidationError("reservoir fractions must be non-negative")
        if np.any(np.asarray(self.tau) <= 0):
            raise ValidationError("reservoir lifetimes must be positive")
        if self.d1 <= 0 or self.d2 <= 0 or self.d1 == self.d2:
            raise ValidationError("thermal timescales must be positive and distinct")
        if self.q1 <= 0 or self.q2 <= 0:
            raise ValidationError("thermal amplitudes must be positive")
        if self.F2x <= 0:
            raise ValidationError("F2x must be positive")
        vals = self.to_array()
        if not np.all(np.isfinite(vals)):
            raise ValidationError("parameter vector contains non-finite entries")
        if vals.size != N_PARAMS:
            raise ValidationError(f"parameter vector must have {N_PARAMS} entries")

    def to_array(self) -> np.ndarray:
        """Flatten to the canonical 20-entry layout (a4 dropped)."""
        return np.array(
            [*self.a[:3], *self.tau, self.r0, self.rC, self.rT,
             self.F2x, self.q1, self.q2, self.d1, self.d2, *self.scales],
            dtype=float,
        )

    @classmethod
    def from_array(cls, values) -> "ParameterVector":
        v = np.asarray(values, dtype=float)
        if v.shape != (N_PARAMS,):
            raise ValidationError(f"expected {N_PARAMS} entries, got shape {v.shape}")
        a123 = v[0:3]
        a4 = 1.0 - float(a123.sum())
        return cls(
            a=(float(a123[0]), float(a123[1]), float(a123[2]), a4),
            tau=tuple(float(x) for x in v[3:7]),
            r0=float(v[7]), rC=float(v[8]), rT=float(v[9]),
            F2x=float(v[10]), q1=float(v[11]), q2=float(v[12]),
            d1=float(v[13]), d2=float(v[14]),
            scales=tuple(float(x) for x in v[15:20]),
        )

    def with_values(self, **kw) -> "ParameterVector":
        return replace(self, **kw)

    def scale_for(self, category: str) -> float:
        if category == "co2":
            return 1.0
        return self.scales[SCALED_CATEGORIES.index(category)]

    def to_json(self) -> str:
        """Flat array plus a named-field map, the interchange format."""
        return json.dumps(
            {"values": self.to_array().tolist(),
             "names": list(PARAM_NAMES)},
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "ParameterVector":
        doc = json.loads(text)
        names = doc.get("names")
        if names is not None and tuple(names) != PARAM_NAMES:
            raise ValidationError("parameter name map does not match the expected layout")
        return cls.from_array(doc["values"])

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def load(cls, path: str | Path) -> "ParameterVector":
        return cls.from_json(Path(path).read_text())


@dataclass(frozen=True)
class ModelConfig:
    """Non-calibrated model configuration with documented defaults.

    The preindustrial concentration and the carbon-mass-to-concentration
    conversion are configuration, not calibration targets.
    """

    c0_ppm: float = 278.0
    gtc_per_ppm: float = 2.124
    alpha_min: float = 1e-3
    alpha_max: float = 1e3
    alpha_tol: float = 1e-8  # years, on the integrated-response residual

    def __post_init__(self):
        if self.c0_ppm <= 0 or self.gtc_per_ppm <= 0:
            raise ValidationError("concentration configuration must be positive")
        if not (0 < self.alpha_min < self.alpha_max):
            raise ValidationError("alpha bounds must satisfy 0 < alpha_min < alpha_max")


DEFAULT_CONFIG = ModelConfig()
