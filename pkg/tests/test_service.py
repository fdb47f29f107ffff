"""HTTP service contract: endpoints, jobs, provenance, concurrency."""

import json
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from fastapi.testclient import TestClient

from tempalign import bundle
from tempalign import emulator as emu
from tempalign.fair import ParameterVector
from tempalign.service import ServiceState, create_app, default_state


@pytest.fixture(scope="module")
def state(tmp_path_factory):
    st = default_state(artifacts_dir=tmp_path_factory.mktemp("artifacts"))
    # register a tiny emulator so emulator-mode endpoints are exercised
    theta = ParameterVector()
    rng = np.random.default_rng(1)
    samples = np.tile(theta.to_array(), (300, 1))
    samples[:, 11] *= rng.lognormal(0.0, 0.05, 300)
    scenarios = [bundle.load_bundled_scenario(sid) for sid in bundle.SCENARIO_IDS]
    ts = emu.generate_training_set(samples, scenarios, np.linspace(0.7, 1.3, 12),
                                   n_draws=120, seed=0)
    model = emu.train(ts, emu.TrainConfig(epochs=600, seed=0, learning_rate=3e-3),
                      chain_id="unit-fixture")
    st.add_model("default", model)
    return st


@pytest.fixture(scope="module")
def client(state):
    return TestClient(create_app(state))


@pytest.fixture(scope="module")
def ssab_payload():
    path = bundle.data_dir() / "portfolios" / "ssab_scope3_harmonized.json"
    return json.loads(path.read_text())


def align_request(ssab_payload, **kw):
    body = {"portfolio": ssab_payload, "scenario_ids": ["SSP2-RCP4.5"],
            "mode": "mcmc", "chain_id": "fixed", "n": 150, "seed": 3}
    body.update(kw)
    return body


# ---------------------------------------------------------------------------
# catalog


def test_scenario_catalog(client):
    r = client.get("/scenarios")
    assert r.status_code == 200
    ids = [s["id"] for s in r.json()["scenarios"]]
    assert ids == sorted(bundle.SCENARIO_IDS)
    assert all(s["n_gases"] == 39 for s in r.json()["scenarios"])


def test_malformed_query_string_rejected(client):
    assert client.get("/scenarios?limit=abc").status_code == 400


def test_openapi_served_at_spec(client):
    r = client.get("/spec")
    assert r.status_code == 200
    assert "/align" in r.json()["paths"]


# ---------------------------------------------------------------------------
# align


def test_align_mcmc_fixed_parameters(client, ssab_payload):
    r = client.post("/align", json=align_request(ssab_payload))
    assert r.status_code == 200
    doc = r.json()
    summary = doc["results"]["SSP2-RCP4.5"]["summary"]
    from tempalign.socioecon import implied_temperature, portfolio_from_dict
    _, expected = implied_temperature(
        portfolio_from_dict(ssab_payload), bundle.load_bundled_benchmark(),
        bundle.load_bundled_scenario("SSP2-RCP4.5"), bundle.load_bundled_shares(),
        chain=None, n=150, seed=3)
    assert summary["mean_end"] == expected["mean_end"]
    prov = doc["provenance"]
    assert prov["seed"] == 3 and prov["chain_id"] == "fixed-default-parameters"
    assert "config_hash" in prov and prov["adjustment_factor"] < 1.0


def test_align_repeat_is_byte_identical(client, ssab_payload):
    body = align_request(ssab_payload)
    a = client.post("/align", json=body)
    b = client.post("/align", json=body)
    assert a.content == b.content


def test_align_invalid_portfolio_422(client, ssab_payload):
    bad = json.loads(json.dumps(ssab_payload))
    bad["constituents"][0]["gva_musd"] = 0.0
    r = client.post("/align", json=align_request(bad))
    assert r.status_code == 422
    assert "gva_musd" in json.dumps(r.json())


def test_align_unknown_scenario_404(client, ssab_payload):
    r = client.post("/align", json=align_request(ssab_payload,
                                                 scenario_ids=["SSP9-RCP9.9"]))
    assert r.status_code == 404


def test_align_emulator_mode(client, ssab_payload):
    t0 = time.perf_counter()
    r = client.post("/align", json=align_request(
        ssab_payload, mode="emulator",
        scenario_ids=["SSP2-RCP4.5", "SSP5-RCP8.5"]))
    elapsed = time.perf_counter() - t0
    assert r.status_code == 200
    doc = r.json()
    assert "model_id" in doc["provenance"]
    assert doc["results"]["SSP5-RCP8.5"]["summary"]["mean_end"] > \
        doc["results"]["SSP2-RCP4.5"]["summary"]["mean_end"]
    assert elapsed < 0.5


def test_align_emulator_envelope_warning_is_200(client, ssab_payload):
    heavy = json.loads(json.dumps(ssab_payload))
    heavy["constituents"][0]["scope3_kt"] = 5e6  # intensity far beyond training
    r = client.post("/align", json=align_request(heavy, mode="emulator"))
    assert r.status_code == 200
    assert any("envelope" in w for w in r.json()["warnings"])


def test_align_concurrent_requests_match_serial(client, ssab_payload):
    body = align_request(ssab_payload, n=120)
    serial = client.post("/align", json=body).content
    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(
            lambda _: client.post("/align", json=body).content, range(32)))
    assert all(r == serial for r in results)


# ---------------------------------------------------------------------------
# propagate


def test_propagate_prior_vs_fixed(client):
    fixed = client.post("/propagate", json={
        "scenario_id": "SSP5-RCP8.5", "chain": "fixed", "n": 120, "seed": 1})
    assert fixed.status_code == 200
    prior = client.post("/propagate", json={
        "scenario_id": "SSP5-RCP8.5", "chain": "prior", "n": 150, "seed": 1})
    assert prior.status_code == 200
    band = prior.json()["band"]
    years = band["years"]
    i2050 = years.index(2050)
    lo = band["bands"]["0.9"]["lower"][i2050]
    hi = band["bands"]["0.9"]["upper"][i2050]
    assert hi - lo > 0.5  # prior predictive spread is wide
    assert prior.json()["provenance"]["chain_id"] == "prior"


def test_propagate_unknown_scenario(client):
    r = client.post("/propagate", json={"scenario_id": "nope", "chain": "fixed"})
    assert r.status_code == 404


# ---------------------------------------------------------------------------
# jobs


def test_calibrate_job_lifecycle(client):
    body = {"n_iter": 2000, "seed": 5, "chain_name": "smoke"}
    r = client.post("/calibrate", json=body)
    assert r.status_code == 202
    job = r.json()
    assert job["status"] in ("queued", "running")
    # duplicate submission returns the same job
    again = client.post("/calibrate", json=body)
    assert again.json()["id"] == job["id"]

    deadline = time.time() + 120
    while time.time() < deadline:
        status = client.get(f"/jobs/{job['id']}").json()
        if status["status"] in ("done", "failed"):
            break
        time.sleep(0.5)
    assert status["status"] == "done", status
    assert status["progress"] == 1.0
    assert status["result"]

    chains = client.get("/chains").json()["chains"]
    assert any(c["id"] == "smoke" for c in chains)
    # the persisted artifact is now usable by /align
    r = client.post("/align", json={
        "portfolio": json.loads(
            (bundle.data_dir() / "portfolios" / "ssab.json").read_text()),
        "scenario_ids": ["SSP1-RCP2.6"], "mode": "mcmc",
        "chain_id": "smoke", "n": 120, "seed": 0})
    assert r.status_code == 200


def test_invalid_prior_bounds_422(client):
    r = client.post("/calibrate", json={
        "n_iter": 2000, "seed": 1,
        "prior_overrides": {"F2x": {"family": "normal", "loc": 3.7,
                                    "scale": 0.3, "low": 5.0, "high": 2.0}}})
    assert r.status_code == 422


def test_unknown_job_404(client):
    assert client.get("/jobs/deadbeef").status_code == 404


def test_unknown_chain_404(client, ssab_payload):
    r = client.post("/align", json=align_request(ssab_payload, chain_id="ghost"))
    assert r.status_code == 404
