"""Pure-Python simulation kernel.

Mirrors the compiled kernel operation for operation so both backends produce
identical trajectories; keep the two in sync when touching either. The
compiled kernel is selected at import time when available (see backend.py).

Integration scheme: operator-split annual steps. The timescale adjustment is
solved once per year from the start-of-year state, reservoirs and gas
concentrations advance by the exact exponential solution of their linear ODEs
with emissions held constant over the year, forcing enters the thermal boxes
as the start/end-of-year average, and the boxes advance by their own exact
one-year solution.
"""

from __future__ import annotations

from math import exp, expm1, log, sqrt

LN2 = log(2.0)

# mode codes, aligned with gases.MODE_CODES
_RESERVOIR = 0
_CONC_SQRT = 1
_CONC_LINEAR = 2
_EMISSION = 3

ERR_OK = 0
ERR_CONC_NONPOSITIVE = 1


def iirf_100(alpha, a, tau):
    """100-year integrated impulse response of the alpha-scaled reservoirs."""
    total = 0.0
    for i in range(4):
        x = alpha * tau[i]
        total += a[i] * x * (-expm1(-100.0 / x))
    return total


def _iirf_derivative(alpha, a, tau):
    total = 0.0
    for i in range(4):
        x = alpha * tau[i]
        e = exp(-100.0 / x)
        total += a[i] * (tau[i] * (1.0 - e) - (100.0 / alpha) * e)
    return total


def solve_alpha_kernel(target, a, tau, alpha_min, alpha_max, tol, warm_start):
    """Return (alpha, clamped) with |iirf_100(alpha) - target| < tol.

    Safeguarded Newton within a shrinking bisection bracket; iirf_100 is
    strictly increasing in alpha, so the bracket is always valid. Targets
    outside the representable range clamp to the bounds and flag.
    """
    f_min = iirf_100(alpha_min, a, tau) - target
    if f_min >= 0.0:
        return alpha_min, (f_min > tol)
    f_max = iirf_100(alpha_max, a, tau) - target
    if f_max <= 0.0:
        return alpha_max, (-f_max > tol)

    lo, hi = alpha_min, alpha_max
    x = warm_start
    if not (lo < x < hi):
        x = sqrt(lo * hi)
    for _ in range(200):
        f = iirf_100(x, a, tau) - target
        if abs(f) < tol:
            return x, False
        if f > 0.0:
            hi = x
        else:
            lo = x
        fp = _iirf_derivative(x, a, tau)
        if fp > 0.0:
            x_new = x - f / fp
        else:
            x_new = 0.5 * (lo + hi)
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        x = x_new
    return x, False


def run_kernel(emissions, exo, theta,
               mode, category, lifetime, conv, conc0, efficiency, efficiency2,
               category2,
               c0_ppm, gtc_per_ppm, alpha_min, alpha_max, alpha_tol,
               alpha_start,
               state, gas_conc,
               temp_out, conc_out, forcing_out, alpha_out, forcing_cat_out):
    """Advance the model over every year of `emissions`.

    `state` ([R1..R4, T1, T2, uptake]) and `gas_conc` are updated in place;
    outputs are written per year. Returns (error_code, error_year_index,
    n_alpha_clamped).
    """
    n_years = emissions.shape[0]
    n_gases = emissions.shape[1]

    a = (theta[0], theta[1], theta[2], 1.0 - theta[0] - theta[1] - theta[2])
    tau = (theta[3], theta[4], theta[5], theta[6])
    r0, r_c, r_t = theta[7], theta[8], theta[9]
    f2x, q1, q2, d1, d2 = theta[10], theta[11], theta[12], theta[13], theta[14]
    # scale factors: ch4, n2o, aerosol, ozone, other -> categories 1..5
    dec1 = exp(-1.0 / d1)
    dec2 = exp(-1.0 / d2)
    gain1 = -expm1(-1.0 / d1)
    gain2 = -expm1(-1.0 / d2)

    r = [state[0], state[1], state[2], state[3]]
    t1, t2 = state[4], state[5]
    uptake = state[6]

    alpha = alpha_start
    n_clamped = 0

    for t in range(n_years):
        target = r0 + r_c * uptake + r_t * (t1 + t2)
        alpha, clamped = solve_alpha_kernel(
            target, a, tau, alpha_min, alpha_max, alpha_tol, alpha)
        if clamped:
            n_clamped += 1

        e_co2 = 0.0
        for g in range(n_gases):
            if mode[g] == _RESERVOIR:
                e_co2 += emissions[t, g]

        rsum_start = r[0] + r[1] + r[2] + r[3]
        conc_start = c0_ppm + rsum_start / gtc_per_ppm
        for i in range(4):
            s = alpha * tau[i]
            dec = exp(-1.0 / s)
            r[i] = r[i] * dec + a[i] * e_co2 * (-s * expm1(-1.0 / s))
        rsum_end = r[0] + r[1] + r[2] + r[3]
        uptake += e_co2 - (rsum_end - rsum_start)
        conc_end = c0_ppm + rsum_end / gtc_per_ppm
        if conc_start <= 0.0 or conc_end <= 0.0:
            state[0], state[1], state[2], state[3] = r
            state[4], state[5], state[6] = t1, t2, uptake
            return ERR_CONC_NONPOSITIVE, t, n_clamped

        f_cat = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
        f_cat[0] = (f2x / LN2) * 0.5 * (log(conc_start / c0_ppm) + log(conc_end / c0_ppm))

        for g in range(n_gases):
            m = mode[g]
            if m == _RESERVOIR:
                continue
            e = emissions[t, g]
            if m == _EMISSION:
                f_cat[category[g]] += efficiency[g] * e
            else:
                s = lifetime[g]
                dec = exp(-1.0 / s)
                c_prev = gas_conc[g]
                c_new = conc0[g] + (c_prev - conc0[g]) * dec \
                    + conv[g] * e * (-s * expm1(-1.0 / s))
                gas_conc[g] = c_new
                c_mid = 0.5 * (c_prev + c_new)
                if m == _CONC_SQRT:
                    if c_mid < 0.0:
                        c_mid = 0.0
                    f_cat[category[g]] += efficiency[g] * (sqrt(c_mid) - sqrt(conc0[g]))
                else:
                    f_cat[category[g]] += efficiency[g] * (c_mid - conc0[g])
            if category2[g] >= 0:
                f_cat[category2[g]] += efficiency2[g] * e

        f_total = f_cat[0] + exo[t]
        forcing_cat_out[t, 0] = f_cat[0]
        for c in range(1, 6):
            scaled = theta[14 + c] * f_cat[c]
            forcing_cat_out[t, c] = scaled
            f_total += scaled

        t1 = t1 * dec1 + q1 * f_total * gain1
        t2 = t2 * dec2 + q2 * f_total * gain2

        temp_out[t] = t1 + t2
        conc_out[t] = conc_end
        forcing_out[t] = f_total
        alpha_out[t] = alpha

    state[0], state[1], state[2], state[3] = r
    state[4], state[5], state[6] = t1, t2, uptake
    return ERR_OK, -1, n_clamped
