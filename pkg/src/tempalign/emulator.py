"""Feed-forward surrogate of the Monte-Carlo band pipeline.

Training data comes from the real pipeline: a grid of base-year emission
scalings is pushed through the posterior-predictive propagation per scenario
and the resulting band summaries (mean, median, 5% and 95% quantiles per
year) become labels. A small fully-connected network (three hidden layers of
20 units, tanh) learns the map from base-year emissions to those summaries,
replacing minutes of sampling with a sub-millisecond forward pass.

The default input representation is a single CO2-equivalent scalar; the same
interface accepts per-gas base-emission vectors (mode="multigas").
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, DomainError, ValidationError
from .scenarios import Scenario
from .uncertainty import perturb_pathway, propagate

SCHEMA_VERSION = 1
CHANNELS = ("mean", "median", "q05", "q95")


@dataclass(frozen=True)
class TrainingSet:
    """Grid inputs and band-summary labels produced by the sampling pipeline."""

    inputs: np.ndarray           # [n, d_in]
    labels: np.ndarray           # [n, n_scenarios * n_years * 4]
    scenario_ids: tuple[str, ...]
    years: np.ndarray
    mode: str                    # co2e | multigas
    base_values: np.ndarray      # unscaled base-year emission vector
    n_draws: int
    seed: int
    skipped: tuple[float, ...] = ()

    def __post_init__(self):
        if np.any(~np.isfinite(self.inputs)) or np.any(~np.isfinite(self.labels)):
            raise ValidationError("training set contains non-finite values")
        n_cells = len(self.scenario_ids) * self.years.size
        if self.labels.shape[1] != n_cells * len(CHANNELS):
            raise ValidationError("label width does not match the output schema")
        cube = self.labels.reshape(-1, len(self.scenario_ids), self.years.size, len(CHANNELS))
        q05, med, q95 = cube[..., 2], cube[..., 1], cube[..., 3]
        if np.any(q05 > med + 1e-9) or np.any(med > q95 + 1e-9):
            raise ValidationError("label quantiles are not ordered")


def generate_training_set(chain, scenarios: list[Scenario], emission_grid,
                          n_draws: int = 800, seed: int = 0,
                          base_year: int = 2022, mode: str = "co2e",
                          progress: bool = False) -> TrainingSet:
    """Label a grid of base-year emission scalings with sampled band summaries.

    Every grid point perturbs the scenario pathways proportionally and runs
    the same propagation the reference pipeline uses, with one shared draw
    seed so labels vary smoothly along the grid. Failed grid points are
    skipped with a warning count rather than aborting the whole set.
    """
    grid = np.asarray(emission_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ConfigurationError("emission grid must be a non-empty 1-D array of scalings")
    if np.any(grid <= 0) or grid.size > 1 and np.ptp(grid) == 0.0:
        raise ConfigurationError("emission grid must be positive and non-degenerate")
    if mode not in ("co2e", "multigas"):
        raise ConfigurationError(f"unknown emulator mode {mode!r}")
    if not scenarios:
        raise ConfigurationError("at least one scenario required")

    years_axis = None
    for s in scenarios:
        base_idx = s.pathway.year_index(base_year)
        ya = s.years[base_idx:]
        if years_axis is None:
            years_axis = ya
        elif not np.array_equal(years_axis, ya):
            raise ConfigurationError("scenarios disagree on the output year axis")

    first = scenarios[0]
    base_idx = first.pathway.year_index(base_year)
    base_vector = first.emissions[base_idx].copy()
    co2_cols = list(first.schema.reservoir_indices)
    co2_base = float(base_vector[co2_cols].sum())
    co2e_base = float(first.pathway.co2e_total()[base_idx])

    inputs, rows, skipped = [], [], []
    start = time.perf_counter()
    for scale in grid:
        row = []
        try:
            for scen in scenarios:
                offset = (scale - 1.0) * co2_base
                pw = perturb_pathway(scen.pathway, offset, mode="proportional",
                                     base_year=base_year)
                band = propagate(pw, chain=chain, n=n_draws, levels=(0.9,),
                                 seed=seed, base_year=base_year,
                                 exo=scen.exogenous_forcing)
                sl = slice(band.years.size - years_axis.size, band.years.size)
                lo, hi = band.bands[0.9]
                row.append(np.stack(
                    [band.mean[sl], band.median[sl], lo[sl], hi[sl]], axis=-1))
        except DomainError:
            skipped.append(float(scale))
            continue
        if mode == "co2e":
            inputs.append([scale * co2e_base])
        else:
            inputs.append(scale * base_vector)
        rows.append(np.concatenate([r.ravel() for r in row]))
        if progress:
            done = len(rows) + len(skipped)
            print(f"  grid {done}/{grid.size} "
                  f"({time.perf_counter() - start:.0f} s)", flush=True)
    if not rows:
        raise DomainError("every grid point failed to propagate")

    return TrainingSet(
        inputs=np.asarray(inputs, dtype=float), labels=np.asarray(rows, dtype=float),
        scenario_ids=tuple(s.id for s in scenarios), years=years_axis.copy(),
        mode=mode, base_values=base_vector, n_draws=n_draws, seed=seed,
        skipped=tuple(skipped))


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 3000
    learning_rate: float = 1e-3
    batch_size: int = 32
    seed: int = 0
    validation_fraction: float = 0.2
    hidden_units: int = 20
    hidden_layers: int = 3
    val_ceiling: float | None = None   # standardized-RMSE convergence gate

    def __post_init__(self):
        if not (0.0 < self.validation_fraction < 1.0):
            raise ConfigurationError("validation fraction must be in (0, 1)")


@dataclass
class EmulatorModel:
    """Trained surrogate with its normalization statistics and provenance."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    input_mean: np.ndarray
    input_std: np.ndarray
    output_mean: np.ndarray
    output_std: np.ndarray
    input_low: np.ndarray
    input_high: np.ndarray
    scenario_ids: tuple[str, ...]
    years: np.ndarray
    mode: str
    loss_history: np.ndarray
    validation_rmse: float
    converged: bool
    config: dict = field(default_factory=dict)
    chain_id: str = ""
    extrapolation_margin: float = 0.1

    @property
    def model_id(self) -> str:
        digest = hashlib.sha256()
        for w in self.weights:
            digest.update(w.tobytes())
        return digest.hexdigest()[:16]

    def _forward(self, x: np.ndarray) -> np.ndarray:
        h = (x - self.input_mean) / self.input_std
        for w, b in zip(self.weights[:-1], self.biases[:-1]):
            h = np.tanh(h @ w + b)
        out = h @ self.weights[-1] + self.biases[-1]
        return out * self.output_std + self.output_mean

    def predict(self, base_emissions) -> "EmulatorPrediction":
        """Band summaries per scenario for the given base-year emissions.

        Inputs outside the training envelope (plus the extrapolation margin)
        attach a warning instead of failing.
        """
        x = np.atleast_1d(np.asarray(base_emissions, dtype=float))
        if x.shape != self.input_mean.shape:
            raise ValidationError(
                f"expected input of shape {self.input_mean.shape}, got {x.shape}")
        warnings = []
        span = self.input_high - self.input_low
        low = self.input_low - self.extrapolation_margin * span
        high = self.input_high + self.extrapolation_margin * span
        if np.any(x < low) or np.any(x > high):
            warnings.append(
                f"input {x.tolist()} outside the training envelope "
                f"[{self.input_low.tolist()}, {self.input_high.tolist()}]")
        raw = self._forward(x[None, :])[0]
        cube = raw.reshape(len(self.scenario_ids), self.years.size, len(CHANNELS))
        # enforce q05 <= median <= q95 cell by cell
        quantiles = np.sort(cube[:, :, 1:4], axis=-1)
        per_scenario = {}
        for i, sid in enumerate(self.scenario_ids):
            per_scenario[sid] = {
                "years": self.years.copy(),
                "mean": cube[i, :, 0].copy(),
                "q05": quantiles[i, :, 0].copy(),
                "median": quantiles[i, :, 1].copy(),
                "q95": quantiles[i, :, 2].copy(),
            }
        return EmulatorPrediction(
            base_emissions=x, per_scenario=per_scenario,
            warnings=tuple(warnings), model_id=self.model_id)

    def save(self, path: str | Path) -> None:
        path = Path(path)
        arrays = {"input_mean": self.input_mean, "input_std": self.input_std,
                  "output_mean": self.output_mean, "output_std": self.output_std,
                  "input_low": self.input_low, "input_high": self.input_high,
                  "years": self.years, "loss_history": self.loss_history}
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            arrays[f"w{i}"] = w
            arrays[f"b{i}"] = b
        np.savez_compressed(path.with_suffix(".npz"), **arrays)
        meta = {"schema_version": SCHEMA_VERSION, "scenario_ids": list(self.scenario_ids),
                "mode": self.mode, "n_layers": len(self.weights),
                "validation_rmse": self.validation_rmse, "converged": self.converged,
                "config": self.config, "chain_id": self.chain_id,
                "extrapolation_margin": self.extrapolation_margin,
                "model_id": self.model_id}
        path.with_suffix(".json").write_text(json.dumps(meta, indent=2))

    @classmethod
    def load(cls, path: str | Path) -> "EmulatorModel":
        path = Path(path)
        meta = json.loads(path.with_suffix(".json").read_text())
        if meta.get("schema_version") != SCHEMA_VERSION:
            raise ValidationError(
                f"unsupported emulator schema version {meta.get('schema_version')}")
        arrays = np.load(path.with_suffix(".npz"))
        n = meta["n_layers"]
        model = cls(
            weights=[arrays[f"w{i}"] for i in range(n)],
            biases=[arrays[f"b{i}"] for i in range(n)],
            input_mean=arrays["input_mean"], input_std=arrays["input_std"],
            output_mean=arrays["output_mean"], output_std=arrays["output_std"],
            input_low=arrays["input_low"], input_high=arrays["input_high"],
            scenario_ids=tuple(meta["scenario_ids"]), years=arrays["years"],
            mode=meta["mode"], loss_history=arrays["loss_history"],
            validation_rmse=meta["validation_rmse"], converged=meta["converged"],
            config=meta.get("config", {}), chain_id=meta.get("chain_id", ""),
            extrapolation_margin=meta.get("extrapolation_margin", 0.1))
        if model.model_id != meta["model_id"]:
            raise ValidationError("emulator weights do not match their metadata digest")
        return model


@dataclass(frozen=True)
class EmulatorPrediction:
    base_emissions: np.ndarray
    per_scenario: dict[str, dict[str, np.ndarray]]
    warnings: tuple[str, ...]
    model_id: str

    def at(self, scenario_id: str, year: int) -> dict[str, float]:
        block = self.per_scenario[scenario_id]
        idx = int(year) - int(block["years"][0])
        if idx < 0 or idx >= block["years"].size:
            raise ValidationError(f"year {year} outside emulator output range")
        return {k: float(block[k][idx]) for k in CHANNELS}

    def to_dict(self) -> dict:
        return {
            "base_emissions": self.base_emissions.tolist(),
            "model_id": self.model_id,
            "warnings": list(self.warnings),
            "per_scenario": {
                sid: {k: (v.tolist() if isinstance(v, np.ndarray) else v)
                      for k, v in block.items()}
                for sid, block in self.per_scenario.items()
            },
        }


def train(ts: TrainingSet, cfg: TrainConfig | None = None,
          chain_id: str = "") -> EmulatorModel:
    """Fit the surrogate network; deterministic for a given seed and data."""
    cfg = cfg or TrainConfig()
    rng = np.random.default_rng(cfg.seed)
    n = ts.inputs.shape[0]
    if n < 5:
        raise ConfigurationError("training set too small to split")

    perm = rng.permutation(n)
    n_val = max(1, int(round(cfg.validation_fraction * n)))
    val_idx, train_idx = perm[:n_val], perm[n_val:]
    x_train, y_train = ts.inputs[train_idx], ts.labels[train_idx]
    x_val, y_val = ts.inputs[val_idx], ts.labels[val_idx]

    in_mean = x_train.mean(axis=0)
    in_std = np.where(x_train.std(axis=0) > 0, x_train.std(axis=0), 1.0)
    out_mean = y_train.mean(axis=0)
    out_std = np.where(y_train.std(axis=0) > 0, y_train.std(axis=0), 1.0)
    xt = (x_train - in_mean) / in_std
    yt = (y_train - out_mean) / out_std
    xv = (x_val - in_mean) / in_std

    d_in, d_out = xt.shape[1], yt.shape[1]
    sizes = [d_in] + [cfg.hidden_units] * cfg.hidden_layers + [d_out]
    weights = [rng.normal(0.0, np.sqrt(1.0 / sizes[i]), size=(sizes[i], sizes[i + 1]))
               for i in range(len(sizes) - 1)]
    biases = [np.zeros(sizes[i + 1]) for i in range(len(sizes) - 1)]

    m_w = [np.zeros_like(w) for w in weights]
    v_w = [np.zeros_like(w) for w in weights]
    m_b = [np.zeros_like(b) for b in biases]
    v_b = [np.zeros_like(b) for b in biases]
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    step = 0
    losses = np.empty(cfg.epochs)

    for epoch in range(cfg.epochs):
        order = rng.permutation(xt.shape[0])
        epoch_loss = 0.0
        for start in range(0, xt.shape[0], cfg.batch_size):
            batch = order[start:start + cfg.batch_size]
            xb, yb = xt[batch], yt[batch]

            acts = [xb]
            h = xb
            for w, b in zip(weights[:-1], biases[:-1]):
                h = np.tanh(h @ w + b)
                acts.append(h)
            pred = h @ weights[-1] + biases[-1]
            err = pred - yb
            loss = float(np.mean(err ** 2))
            if not np.isfinite(loss):
                raise DomainError(
                    f"non-finite training loss at epoch {epoch}; reduce the "
                    f"learning rate ({cfg.learning_rate})")
            epoch_loss += loss * xb.shape[0]

            grad = 2.0 * err / (err.size)
            grads_w = [None] * len(weights)
            grads_b = [None] * len(weights)
            grads_w[-1] = acts[-1].T @ grad
            grads_b[-1] = grad.sum(axis=0)
            delta = grad @ weights[-1].T
            for layer in range(len(weights) - 2, -1, -1):
                delta = delta * (1.0 - acts[layer + 1] ** 2)
                grads_w[layer] = acts[layer].T @ delta
                grads_b[layer] = delta.sum(axis=0)
                if layer > 0:
                    delta = delta @ weights[layer].T

            step += 1
            corr1 = 1.0 - beta1 ** step
            corr2 = 1.0 - beta2 ** step
            for i in range(len(weights)):
                m_w[i] = beta1 * m_w[i] + (1 - beta1) * grads_w[i]
                v_w[i] = beta2 * v_w[i] + (1 - beta2) * grads_w[i] ** 2
                weights[i] -= cfg.learning_rate * (m_w[i] / corr1) / (np.sqrt(v_w[i] / corr2) + eps)
                m_b[i] = beta1 * m_b[i] + (1 - beta1) * grads_b[i]
                v_b[i] = beta2 * v_b[i] + (1 - beta2) * grads_b[i] ** 2
                biases[i] -= cfg.learning_rate * (m_b[i] / corr1) / (np.sqrt(v_b[i] / corr2) + eps)
        losses[epoch] = epoch_loss / xt.shape[0]

    h = xv
    for w, b in zip(weights[:-1], biases[:-1]):
        h = np.tanh(h @ w + b)
    val_pred = h @ weights[-1] + biases[-1]
    val_rmse = float(np.sqrt(np.mean((val_pred - (y_val - out_mean) / out_std) ** 2)))
    converged = cfg.val_ceiling is None or val_rmse <= cfg.val_ceiling

    return EmulatorModel(
        weights=weights, biases=biases,
        input_mean=in_mean, input_std=in_std,
        output_mean=out_mean, output_std=out_std,
        input_low=ts.inputs.min(axis=0), input_high=ts.inputs.max(axis=0),
        scenario_ids=ts.scenario_ids, years=ts.years.copy(), mode=ts.mode,
        loss_history=losses, validation_rmse=val_rmse, converged=converged,
        config={"epochs": cfg.epochs, "learning_rate": cfg.learning_rate,
                "batch_size": cfg.batch_size, "seed": cfg.seed,
                "hidden_units": cfg.hidden_units, "hidden_layers": cfg.hidden_layers,
                "validation_fraction": cfg.validation_fraction,
                "n_draws": ts.n_draws, "label_seed": ts.seed},
        chain_id=chain_id)
