"""Priors, likelihood, DRAM sampler, model comparison and diagnostics."""

import math

import numpy as np
import pytest
from scipy import stats

from tempalign import bundle
from tempalign import calibration as cal
from tempalign.errors import ConfigurationError, DomainError, ValidationError
from tempalign.fair import ParameterVector


@pytest.fixture(scope="module")
def prior():
    return cal.default_priors()


@pytest.fixture(scope="module")
def lik_setup(ssp2_module, observations_module):
    hist = ssp2_module.pathway.slice_years(int(ssp2_module.years[0]), 2022)
    return observations_module, cal.LikelihoodConfig(pathway=hist)


@pytest.fixture(scope="module")
def ssp2_module():
    return bundle.load_bundled_scenario("SSP2-RCP4.5")


@pytest.fixture(scope="module")
def observations_module():
    return bundle.load_bundled_observations()


# ---------------------------------------------------------------------------
# log_prior


def test_log_prior_maximal_at_modes(prior):
    base = prior.modes()
    ref = cal.log_prior(base, prior)
    rng = np.random.default_rng(0)
    for j in range(prior.dim):
        for _ in range(3):
            perturbed = base.copy()
            perturbed[j] *= 1.0 + rng.uniform(0.02, 0.2) * rng.choice([-1, 1])
            # lognormal modes sit below the median; allow equality only at mode
            if prior.priors[j].family == "normal":
                assert cal.log_prior(perturbed, prior) < ref


def test_log_prior_out_of_bounds_is_minus_inf(prior):
    theta = prior.modes()
    theta[10] = 100.0  # far above the F2x upper bound
    assert cal.log_prior(theta, prior) == float("-inf")


def test_log_prior_uniform_unit_density():
    spec = cal.PriorSpec(priors=(
        cal.ParameterPrior("x", "uniform", loc=0.0, scale=1.0),
    ))
    assert cal.log_prior(np.array([0.5]), spec) == pytest.approx(math.log(1.0))
    assert cal.log_prior(np.array([1.5]), spec) == float("-inf")


def test_log_prior_matches_scipy(prior):
    theta = prior.modes()
    expected = 0.0
    for p, x in zip(prior.priors, theta):
        if p.family == "normal":
            expected += stats.norm.logpdf(x, p.loc, p.scale)
        elif p.family == "lognormal":
            expected += stats.lognorm.logpdf(x, s=p.scale, scale=p.loc)
        else:
            expected += stats.uniform.logpdf(x, p.loc, p.scale)
    assert cal.log_prior(theta, prior) == pytest.approx(expected, rel=1e-12)


def test_prior_samples_respect_parameter_invariants(prior):
    samples = cal.sample_prior(prior, 200, seed=3, validate=cal.valid_parameter_row)
    for row in samples:
        ParameterVector.from_array(row)  # raises if invalid


# ---------------------------------------------------------------------------
# log_likelihood


def test_zero_residuals_closed_form(lik_setup, theta):
    obs, cfg = lik_setup
    from tempalign.fair import run

    out = run(cfg.pathway, theta)
    idx = cfg.observation_indices(obs)
    perfect = type(obs)(
        years=obs.years,
        temperature_anomaly=out.temperature[idx],
        co2_concentration=out.co2_ppm[idx],
        temperature_sd=obs.temperature_sd, co2_sd=obs.co2_sd)
    n = obs.years.size
    expected = -0.5 * n * math.log(2 * math.pi * obs.temperature_sd ** 2)
    assert cal.log_likelihood(theta, perfect, cfg) == pytest.approx(expected, rel=1e-12)


def test_likelihood_maximized_at_truth_along_axis_scans(lik_setup, theta):
    obs, cfg = lik_setup
    from tempalign.fair import run

    out = run(cfg.pathway, theta)
    idx = cfg.observation_indices(obs)
    perfect = type(obs)(
        years=obs.years, temperature_anomaly=out.temperature[idx],
        co2_concentration=out.co2_ppm[idx],
        temperature_sd=obs.temperature_sd, co2_sd=obs.co2_sd)
    base = theta.to_array()
    ref = cal.log_likelihood(theta, perfect, cfg)
    for j in (10, 11, 7, 0):  # F2x, q1, r0, a1: strongly identified axes
        for eps in (-0.05, 0.05):
            perturbed = base.copy()
            perturbed[j] *= 1.0 + eps
            assert cal.log_likelihood(
                ParameterVector.from_array(perturbed), perfect, cfg) <= ref


def test_sigma_argmax_is_residual_rms():
    """The Gaussian log density in sigma peaks at the residual RMS."""
    residuals = np.array([0.5, -1.0, 0.25, 0.75])
    rms = float(np.sqrt(np.mean(residuals ** 2)))
    below, at, above = (cal.gaussian_log_density(residuals, s)
                        for s in (0.6 * rms, rms, 1.7 * rms))
    assert at > below and at > above
    # doubling sigma increases the density when the residual spread is large
    # enough (RMS/sigma above sqrt(8 ln2 / 3)) and decreases it when small
    threshold = math.sqrt(8.0 * math.log(2.0) / 3.0)
    sigma_small = rms / (threshold * 1.2)
    assert cal.gaussian_log_density(residuals, 2 * sigma_small) > \
        cal.gaussian_log_density(residuals, sigma_small)
    sigma_large = rms
    assert cal.gaussian_log_density(residuals, 2 * sigma_large) < \
        cal.gaussian_log_density(residuals, sigma_large)


def test_forward_failure_returns_minus_inf(lik_setup):
    obs, cfg = lik_setup
    # forcing strong net removals through history collapses the burden
    from tempalign.fair.state import EmissionPathway

    bad = EmissionPathway(
        years=cfg.pathway.years,
        values=np.full_like(cfg.pathway.values, -15.0),
        schema=cfg.pathway.schema)
    bad_cfg = cal.LikelihoodConfig(pathway=bad)
    out = cal.log_likelihood(ParameterVector(), obs, bad_cfg)
    assert out == float("-inf")
    assert len(bad_cfg.failures) == 1


def test_concentration_term_optional(lik_setup, theta):
    obs, cfg = lik_setup
    with_conc = cal.LikelihoodConfig(pathway=cfg.pathway, use_concentration=True)
    assert cal.log_likelihood(theta, obs, with_conc) != \
        cal.log_likelihood(theta, obs, cfg)


# ---------------------------------------------------------------------------
# DRAM sampler


def test_dram_two_d_gaussian_moments():
    def log_target(x):
        return -0.5 * float(x @ x)

    res = cal.dram_sample(log_target, np.zeros(2), 60000,
                          cal.DramConfig(seed=5, initial_step=np.array([0.5, 0.5])))
    s = res.samples[10000:]
    for j in range(2):
        tau = cal.integrated_autocorrelation_time(s[:, j])
        se = s[:, j].std() * math.sqrt(tau / s.shape[0])
        assert abs(s[:, j].mean()) < 3.5 * se
    cov = np.cov(s.T)
    assert np.abs(cov - np.eye(2)).max() < 0.10
    assert 0.0 < res.acceptance_rate < 1.0


def test_dram_seed_determinism():
    def log_target(x):
        return -0.5 * float(x @ x)

    cfg = cal.DramConfig(seed=42, initial_step=np.array([1.0]))
    a = cal.dram_sample(log_target, np.zeros(1), 5000, cfg)
    b = cal.dram_sample(log_target, np.zeros(1), 5000, cfg)
    assert np.array_equal(a.samples, b.samples)
    assert a.acceptance_rate == b.acceptance_rate


def test_dram_banana_acceptance_window():
    b = 0.1

    def log_target(x):
        return -x[0] ** 2 / 200.0 - 0.5 * (x[1] + b * x[0] ** 2 - 100 * b) ** 2

    res = cal.dram_sample(log_target, np.zeros(2), 60000,
                          cal.DramConfig(seed=3, initial_step=np.array([1.0, 1.0])))
    # post-adaptation acceptance: ignore the warmup stretch
    assert 0.1 <= res.acceptance_rate <= 0.5
    # transformation-sampling oracle for the twisted-normal moments
    rng = np.random.default_rng(0)
    z1 = rng.normal(0, 10, 400000)
    x2 = rng.normal(0, 1, 400000) - b * z1 ** 2 + 100 * b
    s = res.samples[12000:]
    assert abs(s[:, 0].mean()) < 2.0
    assert abs(s[:, 1].mean() - x2.mean()) < 0.2 * x2.std()


def test_dram_zero_acceptance_aborts():
    def log_target(x):
        # accept only a microscopic ball around an unreachable point
        return 0.0 if abs(x[0] - 1e9) < 1e-12 else float("-inf")

    with pytest.raises((DomainError, ValidationError)):
        cal.dram_sample(log_target, np.array([1e9]), 2000,
                        cal.DramConfig(seed=1, warmup=500,
                                       initial_step=np.array([1e6])))


def test_dram_chain_artifact_roundtrip(tmp_path, lik_setup, prior):
    obs, cfg = lik_setup
    chain = cal.dram_chain(ParameterVector(), 2500, prior, obs, cfg,
                           cal.DramConfig(seed=9))
    assert 0.0 < chain.acceptance_rate < 1.0
    assert chain.burn_in == int(0.2 * chain.samples.shape[0])
    assert np.all(np.isfinite(chain.log_posterior))
    path = tmp_path / "chain"
    chain.save(path)
    again = cal.PosteriorChain.load(path)
    assert np.array_equal(again.samples, chain.samples)
    assert again.param_names == chain.param_names
    assert again.seed == chain.seed


def test_degenerate_chain_rejected():
    with pytest.raises(ValidationError):
        cal.PosteriorChain(
            samples=np.zeros((10, 2)), log_posterior=np.zeros(10),
            acceptance_rate=0.0, burn_in=2, param_names=("x", "y"), seed=0)


# ---------------------------------------------------------------------------
# posterior predictive


def test_posterior_predictive_degenerate_chain(theta, ssp2_module):
    """A chain of identical samples collapses to the deterministic run."""
    from tempalign.fair import run

    samples = np.tile(theta.to_array(), (300, 1))
    band = cal.posterior_predictive(samples, ssp2_module, n_draws=150, seed=1)
    det = run(ssp2_module.pathway, theta, exo=ssp2_module.exogenous_forcing)
    np.testing.assert_array_equal(band.median, det.temperature)
    lo, hi = band.bands[0.9]
    np.testing.assert_array_equal(lo, hi)


# ---------------------------------------------------------------------------
# model comparison


def _conjugate_model(n_obs, prior_sd, noise_sd, seed):
    rng = np.random.default_rng(seed)
    y = rng.normal(0.3, noise_sd, n_obs)

    def log_lik(thv):
        t = float(np.atleast_1d(thv)[0])
        return float(-0.5 * np.sum(((y - t) / noise_sd) ** 2)
                     - n_obs * 0.5 * math.log(2 * math.pi * noise_sd ** 2))

    def log_pri(thv):
        t = float(np.atleast_1d(thv)[0])
        return float(stats.norm.logpdf(t, 0.0, prior_sd))

    # exact evidence: y ~ N(0, noise^2 I + prior_sd^2 J)
    cov = noise_sd ** 2 * np.eye(n_obs) + prior_sd ** 2 * np.ones((n_obs, n_obs))
    log_z = stats.multivariate_normal.logpdf(y, mean=np.zeros(n_obs), cov=cov)
    # posterior for chain construction
    post_var = 1.0 / (1.0 / prior_sd ** 2 + n_obs / noise_sd ** 2)
    post_mean = post_var * y.sum() / noise_sd ** 2
    chain = rng.normal(post_mean, math.sqrt(post_var), (4000, 1))
    return (log_lik, log_pri, chain), float(log_z)


def test_model_posterior_symmetric_pair():
    model, _ = _conjugate_model(10, 1.0, 0.5, seed=2)
    probs = cal.model_posterior([model, model], [0.5, 0.5], seed=0)
    assert probs == pytest.approx([0.5, 0.5], abs=0.02)


def test_model_posterior_matches_conjugate_evidence():
    m1, logz1 = _conjugate_model(10, 1.0, 0.5, seed=2)
    m2, logz2 = _conjugate_model(10, 0.1, 0.5, seed=2)
    probs = cal.model_posterior([m1, m2], [0.5, 0.5], n_importance=20000, seed=1)
    exact = 1.0 / (1.0 + math.exp(logz2 - logz1))
    bayes_est = probs[0] / probs[1]
    bayes_true = math.exp(logz1 - logz2)
    assert bayes_est == pytest.approx(bayes_true, rel=0.10)
    assert probs[0] == pytest.approx(exact, abs=0.03)


def test_model_posterior_prior_mass_forcing():
    model, _ = _conjugate_model(10, 1.0, 0.5, seed=4)
    probs = cal.model_posterior([model, model], [1.0, 0.0], seed=0)
    assert probs == pytest.approx([1.0, 0.0], abs=1e-12)


def test_model_posterior_needs_two_models():
    model, _ = _conjugate_model(5, 1.0, 0.5, seed=0)
    with pytest.raises(ConfigurationError):
        cal.model_posterior([model], [1.0])


# ---------------------------------------------------------------------------
# diagnostics


def test_iid_chain_autocorrelation_near_one():
    rng = np.random.default_rng(0)
    tau = cal.integrated_autocorrelation_time(rng.standard_normal(100000))
    assert tau == pytest.approx(1.0, abs=0.1)


def test_constant_chain_flagged_degenerate():
    report = cal.diagnostics(np.ones((500, 1)))
    assert not report.stationary
    assert any("degenerate" in f for f in report.flags)


def test_ar1_autocorrelation_time():
    rng = np.random.default_rng(8)
    n, rho = 400000, 0.9
    x = np.empty(n)
    x[0] = rng.standard_normal()
    eps = rng.standard_normal(n)
    for i in range(1, n):
        x[i] = rho * x[i - 1] + eps[i]
    tau = cal.integrated_autocorrelation_time(x)
    expected = (1 + rho) / (1 - rho)
    assert abs(tau - expected) / expected < 0.2


def test_diagnostics_on_real_chain(lik_setup, prior):
    obs, cfg = lik_setup
    chain = cal.dram_chain(ParameterVector(), 3000, prior, obs, cfg,
                           cal.DramConfig(seed=12))
    report = cal.diagnostics(chain)
    assert report.acceptance_rate == chain.acceptance_rate
    assert report.means.shape == (20,)
    assert report.to_dict()["n_samples"] == chain.posterior_samples().shape[0]
