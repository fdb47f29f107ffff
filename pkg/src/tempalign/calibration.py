"""Bayesian inference of the climate-model parameters.

Delayed-rejection adaptive Metropolis (DRAM) sampling of the posterior,
posterior-predictive simulation, importance-sampled model comparison and
chain diagnostics.

The sampler is generic over a log-density; the climate calibration problem
is one instance of it, so the sampler's correctness tests run on analytic
targets with known moments.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError, ValidationError
from .fair.model import run
from .fair.params import DEFAULT_CONFIG, N_PARAMS, PARAM_NAMES, ModelConfig, ParameterVector
from .fair.state import EmissionPathway
from .scenarios import ObservationSeries

NEG_INF = float("-inf")
LOG_2PI = math.log(2.0 * math.pi)


# ---------------------------------------------------------------------------
# priors


@dataclass(frozen=True)
class ParameterPrior:
    """Marginal prior for one parameter.

    Families: ``normal`` (loc = mean, scale = sd), ``lognormal`` (loc =
    median, scale = sd of the log) and ``uniform`` (scipy convention:
    support [loc, loc + scale]). Hard bounds truncate the support without
    renormalizing the density.
    """

    name: str
    family: str
    loc: float
    scale: float
    low: float = -math.inf
    high: float = math.inf

    def __post_init__(self):
        if self.family not in ("normal", "lognormal", "uniform"):
            raise ConfigurationError(f"{self.name}: unknown prior family {self.family!r}")
        if self.scale <= 0:
            raise ConfigurationError(f"{self.name}: prior scale must be positive")
        if self.low >= self.high:
            raise ConfigurationError(f"{self.name}: empty support")

    def log_pdf(self, x: float) -> float:
        if not (self.low <= x <= self.high):
            return NEG_INF
        if self.family == "normal":
            z = (x - self.loc) / self.scale
            return -0.5 * (z * z + LOG_2PI) - math.log(self.scale)
        if self.family == "lognormal":
            if x <= 0:
                return NEG_INF
            z = (math.log(x) - math.log(self.loc)) / self.scale
            return -0.5 * (z * z + LOG_2PI) - math.log(self.scale) - math.log(x)
        lo, hi = self.loc, self.loc + self.scale
        if not (lo <= x <= hi):
            return NEG_INF
        return -math.log(hi - lo)

    def sample(self, rng: np.random.Generator) -> float:
        for _ in range(10000):
            if self.family == "normal":
                x = rng.normal(self.loc, self.scale)
            elif self.family == "lognormal":
                x = math.exp(rng.normal(math.log(self.loc), self.scale))
            else:
                x = rng.uniform(self.loc, self.loc + self.scale)
            if self.low <= x <= self.high:
                return x
        raise DomainError(f"{self.name}: rejection sampling failed against the bounds")

    @property
    def typical_step(self) -> float:
        """Scale used to seed the pre-adaptation proposal."""
        if self.family == "lognormal":
            return self.loc * math.expm1(self.scale)
        return self.scale


@dataclass(frozen=True)
class PriorSpec:
    """Exactly one marginal prior per parameter."""

    priors: tuple[ParameterPrior, ...]

    def __post_init__(self):
        names = [p.name for p in self.priors]
        if len(set(names)) != len(names):
            raise ConfigurationError("duplicate prior entries")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.priors)

    @property
    def dim(self) -> int:
        return len(self.priors)

    def modes(self) -> np.ndarray:
        return np.array([p.loc for p in self.priors])


def log_prior(theta, prior: PriorSpec) -> float:
    """Sum of marginal log densities; -inf outside any hard bound."""
    if isinstance(theta, ParameterVector):
        theta = theta.to_array()
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (prior.dim,):
        raise ValidationError(f"theta has shape {theta.shape}, prior has dim {prior.dim}")
    if not np.all(np.isfinite(theta)):
        raise DomainError("theta must be finite")
    total = 0.0
    for p, x in zip(prior.priors, theta):
        lp = p.log_pdf(float(x))
        if lp == NEG_INF:
            return NEG_INF
        total += lp
    return total


def sample_prior(prior: PriorSpec, n: int, seed: int,
                 validate: Callable[[np.ndarray], bool] | None = None) -> np.ndarray:
    """Draw n joint prior samples, rejecting rows `validate` refuses."""
    rng = np.random.default_rng(seed)
    out = np.empty((n, prior.dim))
    for i in range(n):
        for _ in range(10000):
            row = np.array([p.sample(rng) for p in prior.priors])
            if validate is None or validate(row):
                out[i] = row
                break
        else:
            raise DomainError("prior rejection sampling failed")
    return out


def default_priors() -> PriorSpec:
    """Wide, physics-plausible priors over the 20 model parameters."""
    n = lambda name, loc, scale, low, high: ParameterPrior(name, "normal", loc, scale, low, high)
    ln = lambda name, med, sd, low, high: ParameterPrior(name, "lognormal", med, sd, low, high)
    return PriorSpec(priors=(
        n("a1", 0.2173, 0.03, 0.01, 0.6),
        n("a2", 0.2240, 0.03, 0.01, 0.6),
        n("a3", 0.2824, 0.04, 0.01, 0.6),
        ln("tau1", 1.0e6, 0.2, 1e4, 1e8),
        ln("tau2", 394.4, 0.2, 50.0, 2000.0),
        ln("tau3", 36.54, 0.2, 5.0, 200.0),
        ln("tau4", 4.304, 0.2, 0.5, 20.0),
        n("r0", 35.0, 5.0, 10.0, 60.0),
        n("rC", 0.019, 0.005, 0.0, 0.1),
        n("rT", 4.165, 1.0, 0.0, 10.0),
        n("F2x", 3.71, 0.35, 2.0, 6.0),
        n("q1", 0.33, 0.10, 0.05, 1.0),
        n("q2", 0.41, 0.12, 0.05, 1.5),
        ln("d1", 239.0, 0.25, 50.0, 1000.0),
        ln("d2", 4.1, 0.25, 1.0, 20.0),
        n("scale_ch4", 1.0, 0.3, 0.0, 3.0),
        n("scale_n2o", 1.0, 0.3, 0.0, 3.0),
        n("scale_aerosol", 1.0, 0.3, 0.0, 3.0),
        n("scale_ozone", 1.0, 0.3, 0.0, 3.0),
        n("scale_other", 1.0, 0.3, 0.0, 3.0),
    ))


def valid_parameter_row(theta: np.ndarray) -> bool:
    try:
        ParameterVector.from_array(theta)
        return True
    except ValidationError:
        return False


# ---------------------------------------------------------------------------
# likelihood


@dataclass(frozen=True)
class LikelihoodConfig:
    """Observation model: independent Gaussian noise per series.

    Temperature residuals always enter; concentration residuals are optional
    (off by default). `pathway` drives the forward model over the
    observation window.
    """

    pathway: EmissionPathway
    exo: np.ndarray | None = None
    use_concentration: bool = False
    model_config: ModelConfig = DEFAULT_CONFIG
    failures: list = field(default_factory=list, compare=False)

    def observation_indices(self, obs: ObservationSeries) -> np.ndarray:
        first, last = int(self.pathway.years[0]), int(self.pathway.years[-1])
        if obs.years[0] < first or obs.years[-1] > last:
            raise ValidationError(
                f"observations [{obs.years[0]}, {obs.years[-1]}] extend beyond "
                f"the driving pathway [{first}, {last}]")
        return obs.years - first


def gaussian_log_density(residuals: np.ndarray, sd: float) -> float:
    n = residuals.size
    return float(-0.5 * np.sum((residuals / sd) ** 2)
                 - 0.5 * n * (LOG_2PI + 2.0 * math.log(sd)))


def log_likelihood(theta, obs: ObservationSeries, cfg: LikelihoodConfig) -> float:
    """Gaussian log likelihood of the model residuals at the observed years.

    Forward-model domain failures count as impossible (-inf) and are recorded
    on the config's failure list.
    """
    pv = theta if isinstance(theta, ParameterVector) else ParameterVector.from_array(theta)
    try:
        out = run(cfg.pathway, pv, exo=cfg.exo, config=cfg.model_config)
    except DomainError as exc:
        cfg.failures.append(str(exc))
        return NEG_INF
    idx = cfg.observation_indices(obs)
    total = gaussian_log_density(
        out.temperature[idx] - obs.temperature_anomaly, obs.temperature_sd)
    if cfg.use_concentration:
        total += gaussian_log_density(
            out.co2_ppm[idx] - obs.co2_concentration, obs.co2_sd)
    return total


# ---------------------------------------------------------------------------
# DRAM sampler


@dataclass(frozen=True)
class DramConfig:
    """Sampler constants; defaults are the standard adaptive-Metropolis and
    delayed-rejection choices."""

    seed: int = 0
    warmup: int = 1000              # iterations before adaptation starts
    adapt_interval: int = 100       # proposal refresh cadence after warmup
    s_d: float | None = None        # default 2.4^2 / dim
    epsilon: float = 1e-10          # covariance regularization
    dr_shrink: float = 0.2          # second-stage proposal scale factor
    initial_step: np.ndarray | None = None  # pre-adaptation per-dim proposal sd
    store_cov_history: bool = False

    def __post_init__(self):
        if not (0.0 < self.dr_shrink < 1.0):
            raise ConfigurationError("dr_shrink must be in (0, 1)")
        if self.warmup < 1 or self.adapt_interval < 1:
            raise ConfigurationError("warmup and adapt_interval must be >= 1")


@dataclass
class DramResult:
    samples: np.ndarray        # [n_iter + 1, dim], including the start point
    log_post: np.ndarray
    acceptance_rate: float
    first_stage_accepts: int
    second_stage_accepts: int
    cov_history: list[np.ndarray]


class _RunningMoments:
    """Streaming mean and covariance over the full chain history."""

    def __init__(self, x0: np.ndarray):
        self.n = 1
        self.mean = x0.astype(float).copy()
        self.m2 = np.zeros((x0.size, x0.size))

    def update(self, x: np.ndarray) -> None:
        self.n += 1
        delta = x - self.mean
        self.mean += delta / self.n
        self.m2 += np.outer(delta, x - self.mean)

    def cov(self) -> np.ndarray:
        if self.n < 2:
            return np.zeros_like(self.m2)
        return self.m2 / (self.n - 1)


def dram_sample(log_target: Callable[[np.ndarray], float],
                init: np.ndarray, n_iter: int, config: DramConfig) -> DramResult:
    """Delayed-rejection adaptive Metropolis chain over an arbitrary target.

    Adaptation: the proposal covariance is s_d * (sample covariance of the
    whole history + epsilon * I), refreshed every `adapt_interval` iterations
    once `warmup` iterations have passed. Delayed rejection: one second-stage
    proposal with the scale shrunk by `dr_shrink`, accepted with the
    stationarity-preserving two-stage probability. Reproducible from the
    seed.
    """
    from scipy.linalg import cholesky, solve_triangular

    x = np.asarray(init, dtype=float).copy()
    dim = x.size
    rng = np.random.default_rng(config.seed)
    s_d = config.s_d if config.s_d is not None else 2.4 ** 2 / dim

    lp = log_target(x)
    if not np.isfinite(lp):
        raise ValidationError("initial point has non-finite target density")

    if config.initial_step is not None:
        step = np.asarray(config.initial_step, dtype=float)
        if step.shape != (dim,):
            raise ConfigurationError("initial_step must have one entry per dimension")
    else:
        step = np.maximum(np.abs(x) * 0.05, 1e-3)
    chol = np.diag(step)
    logdet = float(np.sum(np.log(np.diag(chol))))

    samples = np.empty((n_iter + 1, dim))
    log_post = np.empty(n_iter + 1)
    samples[0] = x
    log_post[0] = lp

    moments = _RunningMoments(x)
    accepts1 = accepts2 = 0
    cov_history: list[np.ndarray] = []
    gamma = config.dr_shrink

    def q_log(diff: np.ndarray) -> float:
        z = solve_triangular(chol, diff, lower=True)
        return -0.5 * float(z @ z) - logdet

    for k in range(1, n_iter + 1):
        y1 = x + chol @ rng.standard_normal(dim)
        lp1 = log_target(y1)
        log_a1 = min(0.0, lp1 - lp) if np.isfinite(lp1) else NEG_INF
        if log_a1 == 0.0 or math.log(rng.random()) < log_a1:
            x, lp = y1, lp1
            accepts1 += 1
        else:
            # second stage: shrunken proposal around the current point
            y2 = x + gamma * (chol @ rng.standard_normal(dim))
            lp2 = log_target(y2)
            if np.isfinite(lp2):
                log_a12 = min(0.0, lp1 - lp2) if np.isfinite(lp1) else NEG_INF
                if log_a12 < 0.0:  # alpha(y2 -> y1) < 1, else the numerator vanishes
                    num = lp2 + q_log(y1 - y2) + _log1m_exp(log_a12)
                    den = lp + q_log(y1 - x) + _log1m_exp(log_a1)
                    if math.log(rng.random()) < num - den:
                        x, lp = y2, lp2
                        accepts2 += 1
        samples[k] = x
        log_post[k] = lp
        moments.update(x)

        if k == config.warmup and accepts1 + accepts2 == 0:
            raise DomainError(
                f"zero acceptance over the {config.warmup}-iteration warm-up; "
                f"initial step scales are likely far too large")
        if k >= config.warmup and k % config.adapt_interval == 0:
            cov = s_d * (moments.cov() + config.epsilon * np.eye(dim))
            try:
                chol = cholesky(cov, lower=True)
            except np.linalg.LinAlgError:
                chol = cholesky(cov + 1e-8 * np.eye(dim), lower=True)
            logdet = float(np.sum(np.log(np.diag(chol))))
            if config.store_cov_history:
                cov_history.append(cov.copy())

    return DramResult(
        samples=samples, log_post=log_post,
        acceptance_rate=(accepts1 + accepts2) / n_iter,
        first_stage_accepts=accepts1, second_stage_accepts=accepts2,
        cov_history=cov_history)


def _log1m_exp(log_a: float) -> float:
    """log(1 - exp(log_a)) for log_a < 0."""
    if log_a == NEG_INF:
        return 0.0
    return math.log(-math.expm1(log_a))


# ---------------------------------------------------------------------------
# posterior chain artifact


@dataclass(frozen=True)
class PosteriorChain:
    """MCMC samples plus the metadata needed to reuse them."""

    samples: np.ndarray             # [n, dim]
    log_posterior: np.ndarray
    acceptance_rate: float
    burn_in: int
    param_names: tuple[str, ...]
    seed: int
    config: dict = field(default_factory=dict)
    proposal_covariance_history: tuple = ()

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 2 or s.shape[0] < 2:
            raise ValidationError("chain must be a 2-D sample matrix")
        if not (0.0 < self.acceptance_rate < 1.0):
            raise ValidationError(
                f"acceptance rate {self.acceptance_rate} outside (0, 1); "
                "the chain is degenerate")
        if not (0 <= self.burn_in < s.shape[0]):
            raise ValidationError("burn-in outside the chain length")
        if not np.all(np.isfinite(self.log_posterior)):
            raise ValidationError("chain contains samples with non-finite log posterior")
        if tuple(self.param_names) == PARAM_NAMES:
            _check_parameter_invariants(s)
        object.__setattr__(self, "samples", s)

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    def posterior_samples(self) -> np.ndarray:
        """Samples after burn-in removal."""
        return self.samples[self.burn_in:]

    def save(self, path: str | Path) -> None:
        """Columnar binary + JSON metadata, reloadable without re-sampling."""
        path = Path(path)
        np.savez_compressed(
            path.with_suffix(".npz"),
            samples=self.samples, log_posterior=self.log_posterior,
            cov_history=np.array(self.proposal_covariance_history)
            if self.proposal_covariance_history else np.zeros((0, 0, 0)))
        meta = {
            "acceptance_rate": self.acceptance_rate,
            "burn_in": self.burn_in,
            "param_names": list(self.param_names),
            "seed": self.seed,
            "config": self.config,
        }
        path.with_suffix(".json").write_text(json.dumps(meta, indent=2))

    @classmethod
    def load(cls, path: str | Path) -> "PosteriorChain":
        path = Path(path)
        arrays = np.load(path.with_suffix(".npz"))
        meta = json.loads(path.with_suffix(".json").read_text())
        cov = arrays["cov_history"]
        return cls(
            samples=arrays["samples"], log_posterior=arrays["log_posterior"],
            acceptance_rate=meta["acceptance_rate"], burn_in=meta["burn_in"],
            param_names=tuple(meta["param_names"]), seed=meta["seed"],
            config=meta.get("config", {}),
            proposal_covariance_history=tuple(cov) if cov.size else ())


def _check_parameter_invariants(samples: np.ndarray) -> None:
    a_sum = samples[:, 0:3].sum(axis=1)
    bad = (
        np.any(samples[:, 0:3] < 0) or np.any(a_sum > 1.0)
        or np.any(samples[:, 3:7] <= 0)
        or np.any(samples[:, 10:13] <= 0)
        or np.any(samples[:, 13:15] <= 0)
    )
    if bad:
        raise ValidationError("chain contains samples violating parameter invariants")


def dram_chain(init: ParameterVector | np.ndarray, n_iter: int,
               prior: PriorSpec, obs: ObservationSeries, cfg: LikelihoodConfig,
               dram_cfg: DramConfig | None = None,
               burn_in_fraction: float = 0.2) -> PosteriorChain:
    """Sample the parameter posterior given observations.

    Burn-in defaults to the first 20% of the chain and is recorded on the
    artifact.
    """
    if dram_cfg is None:
        dram_cfg = DramConfig()
    if dram_cfg.initial_step is None:
        step = np.array([p.typical_step for p in prior.priors]) * 0.1
        dram_cfg = replace(dram_cfg, initial_step=step)
    theta0 = init.to_array() if isinstance(init, ParameterVector) else np.asarray(init, float)

    def log_post(theta: np.ndarray) -> float:
        lp = log_prior(theta, prior)
        if lp == NEG_INF:
            return NEG_INF
        try:
            pv = ParameterVector.from_array(theta)
        except ValidationError:
            return NEG_INF
        ll = log_likelihood(pv, obs, cfg)
        if ll == NEG_INF:
            return NEG_INF
        return lp + ll

    result = dram_sample(log_post, theta0, n_iter, dram_cfg)
    burn = int(burn_in_fraction * result.samples.shape[0])
    return PosteriorChain(
        samples=result.samples, log_posterior=result.log_post,
        acceptance_rate=result.acceptance_rate, burn_in=burn,
        param_names=prior.names, seed=dram_cfg.seed,
        config={"n_iter": n_iter, "warmup": dram_cfg.warmup,
                "adapt_interval": dram_cfg.adapt_interval,
                "dr_shrink": dram_cfg.dr_shrink,
                "burn_in_fraction": burn_in_fraction,
                "use_concentration": cfg.use_concentration,
                "forward_failures": len(cfg.failures)},
        proposal_covariance_history=tuple(result.cov_history))


# ---------------------------------------------------------------------------
# posterior predictive


def posterior_predictive(chain, scenario, n_draws: int, levels=(0.9, 0.99),
                         seed: int = 0, exo=None):
    """Credible band of temperature trajectories under posterior draws.

    Thin wrapper over uncertainty.propagate with no emission uncertainty;
    draws are taken with replacement from the post-burn-in chain.
    """
    from .uncertainty import propagate

    return propagate(scenario=scenario, chain=chain, spec=None,
                     n=n_draws, levels=levels, seed=seed, exo=exo)


# ---------------------------------------------------------------------------
# model comparison


def model_posterior(models: Sequence, model_priors: Sequence[float],
                    n_importance: int = 4000, seed: int = 0) -> np.ndarray:
    """Posterior probability of each model given shared data.

    `models` holds (log_likelihood, log_prior, chain) triples where the
    callables take a parameter vector and `chain` is a sample matrix (or an
    object exposing posterior_samples()). The marginal likelihood of each
    model is estimated by importance sampling with a Gaussian fitted to its
    chain; probabilities are the prior-weighted normalized estimates.
    """
    if len(models) < 2:
        raise ConfigurationError("model comparison needs at least two models")
    if len(model_priors) != len(models):
        raise ConfigurationError("one prior probability per model required")
    p_m = np.asarray(model_priors, dtype=float)
    if np.any(p_m < 0) or p_m.sum() <= 0:
        raise ConfigurationError("model priors must be non-negative and not all zero")
    p_m = p_m / p_m.sum()

    log_evidence = np.empty(len(models))
    for i, entry in enumerate(models):
        log_lik, log_pri, chain = entry
        samples = chain.posterior_samples() if hasattr(chain, "posterior_samples") \
            else np.asarray(chain, dtype=float)
        log_evidence[i] = _importance_log_evidence(
            log_lik, log_pri, samples, n_importance, seed + i)
        if not np.isfinite(log_evidence[i]):
            raise DomainError(f"marginal-likelihood estimate for model {i} is non-finite")

    # models with zero prior mass are excluded regardless of evidence
    log_w = np.where(p_m > 0, log_evidence + np.log(np.where(p_m > 0, p_m, 1.0)), NEG_INF)
    log_w -= np.max(log_w[np.isfinite(log_w)])
    w = np.exp(log_w)
    w[~np.isfinite(log_w)] = 0.0
    return w / w.sum()


def _importance_log_evidence(log_lik, log_pri, samples: np.ndarray,
                             n: int, seed: int) -> float:
    from scipy.stats import multivariate_normal

    samples = np.atleast_2d(samples)
    mean = samples.mean(axis=0)
    cov = np.cov(samples.T) if samples.shape[1] > 1 else \
        np.array([[np.var(samples[:, 0], ddof=1)]])
    cov = np.atleast_2d(cov) + 1e-12 * np.eye(samples.shape[1])
    proposal = multivariate_normal(mean=mean, cov=cov, allow_singular=True)
    rng = np.random.default_rng(seed)
    draws = proposal.rvs(size=n, random_state=rng)
    draws = np.atleast_2d(draws)
    if draws.shape[0] != n:
        draws = draws.reshape(n, -1)
    log_q = proposal.logpdf(draws)
    log_w = np.array([log_lik(d) + log_pri(d) for d in draws]) - log_q
    finite = np.isfinite(log_w)
    if not np.any(finite):
        return NEG_INF
    m = np.max(log_w[finite])
    return float(m + np.log(np.sum(np.exp(log_w[finite] - m)) / n))


# ---------------------------------------------------------------------------
# diagnostics


@dataclass(frozen=True)
class ChainDiagnostics:
    acceptance_rate: float
    n_samples: int
    burn_in: int
    means: np.ndarray
    sds: np.ndarray
    autocorrelation_time: np.ndarray
    split_rhat: np.ndarray
    stationary: bool
    flags: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "acceptance_rate": self.acceptance_rate,
            "n_samples": self.n_samples,
            "burn_in": self.burn_in,
            "means": self.means.tolist(),
            "sds": self.sds.tolist(),
            "autocorrelation_time": self.autocorrelation_time.tolist(),
            "split_rhat": self.split_rhat.tolist(),
            "stationary": self.stationary,
            "flags": list(self.flags),
        }


def integrated_autocorrelation_time(series: np.ndarray, c: float = 6.0) -> float:
    """Sokal-windowed IACT estimate; 1 for white noise, inf for a constant."""
    x = np.asarray(series, dtype=float)
    n = x.size
    if n < 4:
        return float("nan")
    x = x - x.mean()
    var = float(x @ x) / n
    if var == 0.0:
        return float("inf")
    # FFT autocorrelation
    m = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(x, m)
    acf = np.fft.irfft(f * np.conjugate(f), m)[:n].real
    acf /= acf[0]
    tau = 1.0
    for k in range(1, n):
        tau += 2.0 * acf[k]
        if k >= c * tau:
            return max(tau, 1e-12)
    return max(tau, 1e-12)


def split_rhat(series: np.ndarray) -> float:
    """Potential scale reduction of the two chain halves."""
    x = np.asarray(series, dtype=float)
    n = x.size // 2
    if n < 2:
        return float("nan")
    halves = np.stack([x[:n], x[n:2 * n]])
    within = halves.var(axis=1, ddof=1).mean()
    between = n * halves.mean(axis=1).var(ddof=1)
    if within == 0.0:
        return float("inf")
    var_plus = (n - 1) / n * within + between / n
    return float(np.sqrt(var_plus / within))


def diagnostics(chain, rhat_threshold: float = 1.05) -> ChainDiagnostics:
    """Trace summaries, autocorrelation times and a stationarity flag."""
    if hasattr(chain, "posterior_samples"):
        samples = chain.posterior_samples()
        acceptance = chain.acceptance_rate
        burn = chain.burn_in
    else:
        samples = np.atleast_2d(np.asarray(chain, dtype=float))
        if samples.shape[0] == 1:
            samples = samples.T
        acceptance = float("nan")
        burn = 0
    if samples.shape[0] < 4:
        raise ValidationError("chain too short to diagnose")

    dim = samples.shape[1]
    tau = np.array([integrated_autocorrelation_time(samples[:, j]) for j in range(dim)])
    rhat = np.array([split_rhat(samples[:, j]) for j in range(dim)])
    flags = []
    if np.any(~np.isfinite(tau)):
        flags.append("degenerate: constant parameter trace")
    if np.any(rhat[np.isfinite(rhat)] > rhat_threshold):
        flags.append(f"split-rhat above {rhat_threshold}")
    if np.any(~np.isfinite(rhat)):
        flags.append("degenerate: zero within-half variance")
    stationary = not flags
    return ChainDiagnostics(
        acceptance_rate=acceptance, n_samples=samples.shape[0], burn_in=burn,
        means=samples.mean(axis=0), sds=samples.std(axis=0, ddof=1),
        autocorrelation_time=tau, split_rhat=rhat,
        stationary=stationary, flags=tuple(flags))
