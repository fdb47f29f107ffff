# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled simulation kernel.

Operation-for-operation mirror of _kernel_py.run_kernel; keep both in sync.
"""

from libc.math cimport exp, expm1, log, sqrt

cdef double LN2 = log(2.0)

cdef int _RESERVOIR = 0
cdef int _CONC_SQRT = 1
cdef int _CONC_LINEAR = 2
cdef int _EMISSION = 3


cdef inline double _iirf(double alpha, double* a, double* tau) noexcept nogil:
    cdef double total = 0.0
    cdef double x
    cdef int i
    for i in range(4):
        x = alpha * tau[i]
        total += a[i] * x * (-expm1(-100.0 / x))
    return total


cdef inline double _iirf_deriv(double alpha, double* a, double* tau) noexcept nogil:
    cdef double total = 0.0
    cdef double x, e
    cdef int i
    for i in range(4):
        x = alpha * tau[i]
        e = exp(-100.0 / x)
        total += a[i] * (tau[i] * (1.0 - e) - (100.0 / alpha) * e)
    return total


cdef double _solve_alpha(double target, double* a, double* tau,
                         double alpha_min, double alpha_max, double tol,
                         double warm_start, int* clamped) noexcept nogil:
    cdef double f_min, f_max, lo, hi, x, f, fp, x_new
    cdef int k
    clamped[0] = 0
    f_min = _iirf(alpha_min, a, tau) - target
    if f_min >= 0.0:
        if f_min > tol:
            clamped[0] = 1
        return alpha_min
    f_max = _iirf(alpha_max, a, tau) - target
    if f_max <= 0.0:
        if -f_max > tol:
            clamped[0] = 1
        return alpha_max

    lo = alpha_min
    hi = alpha_max
    x = warm_start
    if not (lo < x < hi):
        x = sqrt(lo * hi)
    for k in range(200):
        f = _iirf(x, a, tau) - target
        if f < tol and f > -tol:
            return x
        if f > 0.0:
            hi = x
        else:
            lo = x
        fp = _iirf_deriv(x, a, tau)
        if fp > 0.0:
            x_new = x - f / fp
        else:
            x_new = 0.5 * (lo + hi)
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        x = x_new
    return x


def solve_alpha_compiled(double target, double a1, double a2, double a3, double a4,
                         double tau1, double tau2, double tau3, double tau4,
                         double alpha_min, double alpha_max, double tol,
                         double warm_start):
    """Scalar entry point used by the model-level alpha solver."""
    cdef double a[4]
    cdef double tau[4]
    cdef int clamped = 0
    a[0], a[1], a[2], a[3] = a1, a2, a3, a4
    tau[0], tau[1], tau[2], tau[3] = tau1, tau2, tau3, tau4
    cdef double alpha = _solve_alpha(target, a, tau, alpha_min, alpha_max,
                                     tol, warm_start, &clamped)
    return alpha, bool(clamped)


def run_kernel(double[:, ::1] emissions, double[::1] exo, double[::1] theta,
               long[::1] mode, long[::1] category,
               double[::1] lifetime, double[::1] conv, double[::1] conc0,
               double[::1] efficiency, double[::1] efficiency2, long[::1] category2,
               double c0_ppm, double gtc_per_ppm,
               double alpha_min, double alpha_max, double alpha_tol,
               double alpha_start,
               double[::1] state, double[::1] gas_conc,
               double[::1] temp_out, double[::1] conc_out, double[::1] forcing_out,
               double[::1] alpha_out, double[:, ::1] forcing_cat_out):
    cdef int n_years = emissions.shape[0]
    cdef int n_gases = emissions.shape[1]

    cdef double a[4]
    cdef double tau[4]
    a[0], a[1], a[2] = theta[0], theta[1], theta[2]
    a[3] = 1.0 - theta[0] - theta[1] - theta[2]
    tau[0], tau[1], tau[2], tau[3] = theta[3], theta[4], theta[5], theta[6]
    cdef double r0 = theta[7], r_c = theta[8], r_t = theta[9]
    cdef double f2x = theta[10], q1 = theta[11], q2 = theta[12]
    cdef double d1 = theta[13], d2 = theta[14]
    cdef double dec1 = exp(-1.0 / d1)
    cdef double dec2 = exp(-1.0 / d2)
    cdef double gain1 = -expm1(-1.0 / d1)
    cdef double gain2 = -expm1(-1.0 / d2)

    cdef double r[4]
    r[0], r[1], r[2], r[3] = state[0], state[1], state[2], state[3]
    cdef double t1 = state[4], t2 = state[5]
    cdef double uptake = state[6]

    cdef double alpha = alpha_start
    cdef int n_clamped = 0
    cdef int clamped = 0

    cdef int t, g, i, c, m
    cdef double target, e_co2, rsum_start, rsum_end, conc_start, conc_end
    cdef double s, dec, e, c_prev, c_new, c_mid, f_total, scaled
    cdef double f_cat[6]

    for t in range(n_years):
        target = r0 + r_c * uptake + r_t * (t1 + t2)
        alpha = _solve_alpha(target, a, tau, alpha_min, alpha_max,
                             alpha_tol, alpha, &clamped)
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
            state[0], state[1], state[2], state[3] = r[0], r[1], r[2], r[3]
            state[4], state[5], state[6] = t1, t2, uptake
            return 1, t, n_clamped

        for c in range(6):
            f_cat[c] = 0.0
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

    state[0], state[1], state[2], state[3] = r[0], r[1], r[2], r[3]
    state[4], state[5], state[6] = t1, t2, uptake
    return 0, -1, n_clamped
