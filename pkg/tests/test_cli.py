"""Command-line interface: verbs, outputs, exit codes, serve."""

import json
import re
import socket
import subprocess
import sys
import time
import urllib.request

import numpy as np
import pytest
from click.testing import CliRunner

from tempalign import bundle
from tempalign.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def ssab_path():
    return str(bundle.data_dir() / "portfolios" / "ssab_scope3_harmonized.json")


def test_propagate_fixed_prints_seed_and_hash(runner, tmp_path):
    out = tmp_path / "band.csv"
    r = runner.invoke(main, ["propagate", "--scenario", "SSP5-RCP8.5",
                             "--chain", "fixed", "--n", "120", "--seed", "9",
                             "--levels", "0.9", "--out", str(out)])
    assert r.exit_code == 0, r.output
    assert "seed=9" in r.output and "config_hash=" in r.output
    assert out.exists()
    header = out.read_text().splitlines()[0]
    assert header.startswith("year,median,lo90,hi90")


def test_propagate_prior_band_wider_than_fixed(runner, tmp_path):
    paths = {}
    for chain in ("fixed", "prior"):
        out = tmp_path / f"{chain}.json"
        r = runner.invoke(main, ["propagate", "--scenario", "SSP5-RCP8.5",
                                 "--chain", chain, "--n", "150", "--seed", "4",
                                 "--levels", "0.9", "--out", str(out)])
        assert r.exit_code == 0, r.output
        paths[chain] = json.loads(out.read_text())
    i2050 = paths["prior"]["years"].index(2050)

    def width(doc):
        band = doc["bands"]["0.9"]
        return band["upper"][i2050] - band["lower"][i2050]

    assert width(paths["prior"]) > width(paths["fixed"])


def test_propagate_unknown_scenario_exit_3(runner):
    r = runner.invoke(main, ["propagate", "--scenario", "SSP9-RCP1.0",
                             "--chain", "fixed"])
    assert r.exit_code == 3


def test_align_summary_table(runner, tmp_path):
    out = tmp_path / "summary.json"
    r = runner.invoke(main, ["align", "--portfolio", ssab_path(),
                             "--scenario", "SSP2-RCP4.5", "--mode", "mcmc",
                             "--chain", "fixed", "--n", "150", "--seed", "0",
                             "--out", str(out)])
    assert r.exit_code == 0, r.output
    assert "SSP2-RCP4.5" in r.output
    rows = json.loads(out.read_text())
    # the CLI reproduces the library computation exactly (same seed, same data)
    from tempalign.socioecon import implied_temperature, load_portfolio
    portfolio = load_portfolio(ssab_path())
    _, expected = implied_temperature(
        portfolio, bundle.load_bundled_benchmark(),
        bundle.load_bundled_scenario("SSP2-RCP4.5"), bundle.load_bundled_shares(),
        chain=None, n=150, seed=0)
    assert rows[0]["mean_end"] == expected["mean_end"]
    assert rows[0]["provenance"]["chain"] == "fixed-default-parameters"


def test_align_uncertainty_flag(runner):
    r = runner.invoke(main, ["align", "--portfolio", ssab_path(),
                             "--scenario", "SSP1-RCP2.6", "--chain", "fixed",
                             "--n", "150", "--uncertainty", "lognormal,1,13"])
    assert r.exit_code == 0, r.output


def test_emulate_train_and_predict(runner, tmp_path):
    model_path = tmp_path / "model"
    r = runner.invoke(main, ["emulate-train", "--chain", "prior",
                             "--grid", "0.8,1.2,8", "--draws", "100",
                             "--epochs", "300", "--seed", "1",
                             "--out", str(model_path)])
    assert r.exit_code == 0, r.output
    assert "model saved" in r.output

    out = tmp_path / "pred.json"
    scen = bundle.load_bundled_scenario("SSP2-RCP4.5")
    base = float(scen.pathway.co2e_total()[scen.pathway.year_index(2022)])
    r = runner.invoke(main, ["emulate-predict", "--model", str(model_path),
                             "--base-emissions", str(base), "--out", str(out)])
    assert r.exit_code == 0, r.output
    doc = json.loads(out.read_text())
    assert set(doc["per_scenario"]) == set(bundle.SCENARIO_IDS)
    block = doc["per_scenario"]["SSP5-RCP8.5"]
    assert block["q05"][-1] <= block["median"][-1] <= block["q95"][-1]


def test_calibrate_then_propagate_narrows(runner, tmp_path):
    out = tmp_path / "chain"
    r = runner.invoke(main, ["calibrate", "--iterations", "2500", "--seed", "2",
                             "--out", str(out)])
    assert r.exit_code == 0, r.output
    assert (out.with_suffix(".npz")).exists()
    assert (out.with_suffix(".json")).exists()
    meta = json.loads(out.with_suffix(".json").read_text())
    assert 0.0 < meta["acceptance_rate"] < 1.0

    widths = {}
    for chain_ref, tag in ((str(out), "posterior"), ("prior", "prior")):
        band_path = tmp_path / f"{tag}.json"
        r = runner.invoke(main, ["propagate", "--scenario", "SSP5-RCP8.5",
                                 "--chain", chain_ref, "--n", "200", "--seed", "6",
                                 "--levels", "0.9", "--out", str(band_path)])
        assert r.exit_code == 0, r.output
        doc = json.loads(band_path.read_text())
        i2050 = doc["years"].index(2050)
        band = doc["bands"]["0.9"]
        widths[tag] = band["upper"][i2050] - band["lower"][i2050]
    assert widths["posterior"] < widths["prior"]


def test_serve_ephemeral_port():
    proc = subprocess.Popen(
        [sys.executable, "-m", "tempalign.cli", "serve", "--port", "0"],
        stdout=subprocess.PIPE, stderr=subprocess.STDOUT, text=True)
    try:
        port = None
        deadline = time.time() + 30
        while time.time() < deadline:
            line = proc.stdout.readline()
            m = re.search(r"listening on http://127\.0\.0\.1:(\d+)", line)
            if m:
                port = int(m.group(1))
                break
        assert port, "serve did not print its port"
        deadline = time.time() + 15
        doc = None
        while time.time() < deadline:
            try:
                with urllib.request.urlopen(
                        f"http://127.0.0.1:{port}/scenarios", timeout=2) as r:
                    doc = json.loads(r.read())
                break
            except Exception:
                time.sleep(0.3)
        assert doc and len(doc["scenarios"]) == 5
    finally:
        proc.terminate()
        proc.wait(timeout=10)
