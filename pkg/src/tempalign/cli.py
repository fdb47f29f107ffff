"""Command-line frontend mirroring the service endpoints.

Every run prints the seed and the configuration hash so results can be
reproduced exactly; outputs can additionally be written as CSV or JSON.
Exit codes: 2 usage errors (click), 3 data/validation errors, 4 numeric or
compute failures.
"""

from __future__ import annotations

import json
import socket
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__, bundle
from .calibration import (
    DramConfig,
    LikelihoodConfig,
    PosteriorChain,
    default_priors,
    diagnostics,
    dram_chain,
    sample_prior,
    valid_parameter_row,
)
from .emulator import EmulatorModel, TrainConfig, generate_training_set
from .emulator import train as train_model
from .errors import DataError, DomainError, FormatError, SchemaError, TempalignError, ValidationError
from .fair.model import backend_name
from .fair.params import ParameterVector
from .provenance import config_hash
from .socioecon import implied_temperature, load_benchmark, load_portfolio
from .uncertainty import EmissionUncertaintySpec, propagate

DATA_ERRORS = (SchemaError, FormatError, DataError, ValidationError,
               FileNotFoundError, KeyError)


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(3 if isinstance(exc, DATA_ERRORS) else 4)


def _announce(seed: int, config: dict) -> None:
    click.echo(f"seed={seed} config_hash={config_hash(config)} "
               f"kernel={backend_name()}")


def _parse_uncertainty(text: str | None) -> EmissionUncertaintySpec | None:
    if not text:
        return None
    family, mu, sigma = text.split(",")
    return EmissionUncertaintySpec(family=family.strip(), mu=float(mu),
                                   sigma=float(sigma), mode="proportional")


def _resolve_chain(ref: str | None, n_prior: int = 2000):
    """'prior', a chain file path, or None (fixed default parameters)."""
    if ref is None or ref == "fixed":
        return None, "fixed-default-parameters"
    if ref == "prior":
        prior = default_priors()
        return sample_prior(prior, n_prior, seed=0, validate=valid_parameter_row), "prior"
    return PosteriorChain.load(ref), str(ref)


@click.group()
@click.version_option(__version__)
def main():
    """Portfolio temperature alignment with uncertainty quantification."""


@main.command()
@click.option("--iterations", default=100_000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--use-concentration", is_flag=True,
              help="Include CO2-concentration residuals in the likelihood.")
@click.option("--out", type=click.Path(), required=True,
              help="Chain artifact basename (.npz/.json pair).")
def calibrate(iterations, seed, use_concentration, out):
    """Sample the parameter posterior against the bundled observations."""
    config = {"cmd": "calibrate", "iterations": iterations, "seed": seed,
              "use_concentration": use_concentration}
    _announce(seed, config)
    try:
        obs = bundle.load_bundled_observations()
        scen = bundle.load_bundled_scenario(bundle.SCENARIO_IDS[0])
        hist = scen.pathway.slice_years(int(scen.years[0]), int(obs.years[-1]))
        chain = dram_chain(ParameterVector(), iterations, default_priors(), obs,
                           LikelihoodConfig(pathway=hist,
                                            use_concentration=use_concentration),
                           DramConfig(seed=seed))
        chain.save(out)
        report = diagnostics(chain)
        click.echo(f"chain saved to {out}.npz/.json  "
                   f"acceptance={chain.acceptance_rate:.3f} "
                   f"stationary={report.stationary}")
    except (TempalignError, FileNotFoundError, KeyError) as exc:
        _fail(exc)


@main.command()
@click.option("--scenario", "scenario_id", required=True)
@click.option("--chain", "chain_ref", default=None,
              help="'prior', 'fixed', or a saved chain basename.")
@click.option("--n", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--levels", default="0.9,0.99", show_default=True)
@click.option("--uncertainty", default=None,
              help="Emission uncertainty as family,mu,sigma (e.g. lognormal,1,13).")
@click.option("--out", type=click.Path(), default=None,
              help="Write the band as CSV (.csv) or JSON (.json).")
def propagate_cmd(scenario_id, chain_ref, n, seed, levels, uncertainty, out):
    """Propagate parameter and/or emission uncertainty to a credible band."""
    config = {"cmd": "propagate", "scenario": scenario_id, "chain": chain_ref,
              "n": n, "seed": seed, "levels": levels, "uncertainty": uncertainty}
    _announce(seed, config)
    try:
        scen = bundle.load_bundled_scenario(scenario_id)
        chain, chain_name = _resolve_chain(chain_ref)
        theta = ParameterVector() if chain is None else None
        spec = _parse_uncertainty(uncertainty)
        level_tuple = tuple(float(x) for x in levels.split(","))
        band = propagate(scen, chain=chain, theta=theta, spec=spec, n=n,
                         levels=level_tuple, seed=seed, base_year=2022)
        main_level = sorted(band.bands)[0]
        for year in (2050, int(band.years[-1])):
            d = band.at(year, main_level)
            click.echo(f"{scenario_id} {year}: median {d['median']:.3f} K, "
                       f"{main_level:.0%} band ({d['lower']:.3f}, {d['upper']:.3f})")
        click.echo(f"provenance: chain={chain_name} n={band.n_samples} seed={seed}")
        if out:
            path = Path(out)
            if path.suffix == ".json":
                path.write_text(band.to_json())
            else:
                band.to_csv(path)
            click.echo(f"band written to {path}")
    except (TempalignError, FileNotFoundError, KeyError) as exc:
        _fail(exc)


main.add_command(propagate_cmd, name="propagate")


@main.command()
@click.option("--portfolio", "portfolio_path", type=click.Path(exists=True), required=True)
@click.option("--benchmark", "benchmark_path", type=click.Path(exists=True), default=None,
              help="Benchmark ensemble JSON; defaults to the bundled ensemble.")
@click.option("--scenario", "scenario_ids", required=True,
              help="Scenario id or comma-separated list.")
@click.option("--mode", type=click.Choice(["mcmc", "emulator"]), default="mcmc",
              show_default=True)
@click.option("--chain", "chain_ref", default=None,
              help="'prior', 'fixed', or a saved chain basename (mcmc mode).")
@click.option("--model", "model_path", default=None,
              help="Saved emulator basename (emulator mode).")
@click.option("--n", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--uncertainty", default=None, help="family,mu,sigma")
@click.option("--out", type=click.Path(), default=None, help="Write summaries as JSON.")
def align(portfolio_path, benchmark_path, scenario_ids, mode, chain_ref,
          model_path, n, seed, uncertainty, out):
    """Implied-temperature summary of a portfolio under one or more scenarios."""
    config = {"cmd": "align", "portfolio": str(portfolio_path),
              "benchmark": benchmark_path, "scenarios": scenario_ids,
              "mode": mode, "chain": chain_ref, "model": model_path,
              "n": n, "seed": seed, "uncertainty": uncertainty}
    _announce(seed, config)
    try:
        portfolio = load_portfolio(portfolio_path)
        benchmark = (load_benchmark(benchmark_path) if benchmark_path
                     else bundle.load_bundled_benchmark())
        shares = bundle.load_bundled_shares()
        spec = _parse_uncertainty(uncertainty)
        rows = []
        if mode == "mcmc":
            chain, chain_name = _resolve_chain(chain_ref)
            for sid in scenario_ids.split(","):
                scen = bundle.load_bundled_scenario(sid.strip())
                band, summary = implied_temperature(
                    portfolio, benchmark, scen, shares, chain=chain, spec=spec,
                    n=n, seed=seed)
                summary["provenance"] = {"chain": chain_name, "seed": seed}
                rows.append(summary)
        else:
            if model_path is None:
                raise ValidationError("emulator mode needs --model")
            model = EmulatorModel.load(model_path)
            from .socioecon import intensity_ratios, pathway_adjustment_factor
            k = pathway_adjustment_factor(intensity_ratios(portfolio, benchmark), shares)
            for sid in scenario_ids.split(","):
                sid = sid.strip()
                scen = bundle.load_bundled_scenario(sid)
                base_idx = scen.pathway.year_index(portfolio.base_year)
                base_co2e = float(scen.pathway.co2e_total()[base_idx])
                pred = model.predict(np.array([k * base_co2e]))
                block = pred.per_scenario[sid]
                rows.append({
                    "scenario": sid,
                    "end_year": int(block["years"][-1]),
                    "mean_end": float(block["mean"][-1]),
                    "median_end": float(block["median"][-1]),
                    "mean_2050": pred.at(sid, 2050)["mean"],
                    "median_2050": pred.at(sid, 2050)["median"],
                    "provenance": {"model_id": pred.model_id, "seed": seed},
                    "warnings": list(pred.warnings),
                })
        click.echo(f"{'scenario':<14} {'mean 2050':>12} {'mean 2100':>10} {'median 2100':>12}")
        for r in rows:
            click.echo(f"{r['scenario']:<14} {r['mean_2050']:>12.3f} "
                       f"{r['mean_end']:>10.3f} {r['median_end']:>12.3f}")
        if out:
            Path(out).write_text(json.dumps(rows, indent=2))
            click.echo(f"summaries written to {out}")
    except (TempalignError, FileNotFoundError, KeyError) as exc:
        _fail(exc)


@main.command(name="emulate-train")
@click.option("--chain", "chain_ref", required=True,
              help="'prior', 'fixed', or a saved chain basename.")
@click.option("--grid", default="0.5,1.5,40", show_default=True,
              help="Emission-scaling grid as low,high,points.")
@click.option("--draws", default=500, show_default=True)
@click.option("--epochs", default=2000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", type=click.Path(), required=True)
def emulate_train(chain_ref, grid, draws, epochs, seed, out):
    """Generate labels from the sampling pipeline and fit the surrogate."""
    config = {"cmd": "emulate-train", "chain": chain_ref, "grid": grid,
              "draws": draws, "epochs": epochs, "seed": seed}
    _announce(seed, config)
    try:
        lo, hi, npts = grid.split(",")
        chain, chain_name = _resolve_chain(chain_ref)
        if chain is None:
            raise ValidationError("emulator training needs a chain ('prior' or a file)")
        scenarios = [bundle.load_bundled_scenario(sid) for sid in bundle.SCENARIO_IDS]
        ts = generate_training_set(chain, scenarios,
                                   np.linspace(float(lo), float(hi), int(npts)),
                                   n_draws=draws, seed=seed)
        model = train_model(ts, TrainConfig(epochs=epochs, seed=seed,
                                            learning_rate=3e-3),
                            chain_id=chain_name)
        model.save(out)
        click.echo(f"model saved to {out}.npz/.json  "
                   f"validation_rmse={model.validation_rmse:.4f} "
                   f"converged={model.converged} model_id={model.model_id}")
    except (TempalignError, FileNotFoundError, KeyError) as exc:
        _fail(exc)


@main.command(name="emulate-predict")
@click.option("--model", "model_path", type=click.Path(), required=True)
@click.option("--base-emissions", type=float, required=True,
              help="Base-year CO2e emissions, GtCO2e/yr.")
@click.option("--out", type=click.Path(), default=None)
def emulate_predict(model_path, base_emissions, out):
    """Predict band summaries from base-year emissions."""
    config = {"cmd": "emulate-predict", "model": str(model_path),
              "base_emissions": base_emissions}
    _announce(0, config)
    try:
        model = EmulatorModel.load(model_path)
        pred = model.predict(np.array([base_emissions]))
        for sid, block in pred.per_scenario.items():
            click.echo(f"{sid}: 2100 median {block['median'][-1]:.3f} K "
                       f"(90% band {block['q05'][-1]:.3f}..{block['q95'][-1]:.3f})")
        for w in pred.warnings:
            click.echo(f"warning: {w}")
        if out:
            Path(out).write_text(json.dumps(pred.to_dict(), indent=2))
            click.echo(f"prediction written to {out}")
    except (TempalignError, FileNotFoundError, KeyError) as exc:
        _fail(exc)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True,
              help="0 binds an ephemeral port and prints it.")
@click.option("--artifacts", type=click.Path(), default="artifacts", show_default=True)
def serve(host, port, artifacts):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app, default_state

    config = {"cmd": "serve", "host": host, "port": port}
    _announce(0, config)
    app = create_app(default_state(artifacts_dir=artifacts))
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((host, port))
    actual = sock.getsockname()[1]
    click.echo(f"listening on http://{host}:{actual}")
    server = uvicorn.Server(uvicorn.Config(app, log_level="info"))
    server.run(sockets=[sock])


if __name__ == "__main__":
    main()
