# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo path kernel for the default contract family.

Mirrors ``pppcontract._mc_py.simulate_paths``: the same Philox4x32-10
counter-based increments indexed by (seed, path, step), the same stepping
and termination rules, looped per path at C speed.
"""

from libc.math cimport exp, log, sqrt, cos, pow, expm1

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double TWO_PI = 6.283185307179586476925286766559
cdef double TWO_NEG32 = 2.3283064365386962890625e-10  # 2^-32

cdef unsigned int M0 = 0xD2511F53u
cdef unsigned int M1 = 0xCD9E8D57u
cdef unsigned int W0 = 0x9E3779B9u
cdef unsigned int W1 = 0xBB67AE85u


cdef inline double philox_normal(unsigned long long seed,
                                 unsigned long long path,
                                 unsigned long long step) nogil:
    cdef unsigned int c0 = <unsigned int>(step & 0xFFFFFFFFu)
    cdef unsigned int c1 = <unsigned int>(step >> 32)
    cdef unsigned int c2 = <unsigned int>(path & 0xFFFFFFFFu)
    cdef unsigned int c3 = <unsigned int>(path >> 32)
    cdef unsigned int k0 = <unsigned int>(seed & 0xFFFFFFFFu)
    cdef unsigned int k1 = <unsigned int>(seed >> 32)
    cdef unsigned int hi0, lo0, hi1, lo1, t0, t1, t2, t3
    cdef unsigned long long p0, p1
    cdef int rnd
    for rnd in range(10):
        if rnd > 0:
            k0 = k0 + W0
            k1 = k1 + W1
        p0 = (<unsigned long long>c0) * M0
        p1 = (<unsigned long long>c2) * M1
        hi0 = <unsigned int>(p0 >> 32); lo0 = <unsigned int>(p0 & 0xFFFFFFFFu)
        hi1 = <unsigned int>(p1 >> 32); lo1 = <unsigned int>(p1 & 0xFFFFFFFFu)
        t0 = hi1 ^ c1 ^ k0
        t1 = lo1
        t2 = hi0 ^ c3 ^ k1
        t3 = lo0
        c0 = t0; c1 = t1; c2 = t2; c3 = t3
    cdef double u1 = ((<double>c0) + 1.0) * TWO_NEG32
    cdef double u2 = (<double>c1) * TWO_NEG32
    return sqrt(-2.0 * log(u1)) * cos(TWO_PI * u2)


def simulate_paths_default(int kind, double x0, long n_paths, double dt,
                           long n_steps, unsigned long long seed,
                           double x_star, double x_maxv, double v0_credit,
                           double effort_scale,
                           double[::1] a_nodes, double[::1] r_nodes,
                           double spacing, double rate, double lam,
                           double sigma, double alpha, double beta):
    """Default-family twin of the numpy kernel (kind 0 = principal, 1 = agent)."""
    payoff_arr = np.zeros(n_paths)
    term_arr = np.full(n_paths, n_steps * dt)
    status_arr = np.full(n_paths, 2, np.int8)  # censored unless terminated
    cdef double[::1] payoff = payoff_arr
    cdef double[::1] term = term_arr
    cdef signed char[::1] status = status_arr

    cdef long n_knots = a_nodes.shape[0] - 1
    cdef double edf = exp(-rate * dt)
    cdef double sqdt = sqrt(dt)
    cdef double ratio = beta / alpha

    cdef long p, k, cell
    cdef double J, disc, pos, w, a, r, ur, s, flow, mu, z, a_dev, pay
    cdef bint done
    with nogil:
        for p in range(n_paths):
            J = x0
            disc = 1.0
            pay = 0.0
            done = False
            for k in range(n_steps + 1):
                if J >= x_star:
                    pay += disc * J if kind == 1 else -disc * J
                    term[p] = k * dt
                    status[p] = 0
                    done = True
                    break
                if J <= 0.0:
                    if kind == 0:
                        pay += disc * v0_credit
                    term[p] = k * dt
                    status[p] = 1
                    done = True
                    break
                if k == n_steps:
                    break
                pos = J / spacing
                cell = <long>pos
                if cell > n_knots - 1:
                    cell = n_knots - 1
                w = pos - cell
                a = (1.0 - w) * a_nodes[cell] + w * a_nodes[cell + 1]
                r = (1.0 - w) * r_nodes[cell] + w * r_nodes[cell + 1]
                ur = 0.5 * pow(r, 0.75) if r > 0.0 else 0.0
                s = sigma * ratio * exp((alpha + beta) * a) if a > 0.0 else 0.0
                if kind == 1:
                    a_dev = effort_scale * a
                    flow = ur - expm1(beta * a_dev)
                    mu = (lam * J - ur + expm1(beta * a)
                          - s * ((-expm1(-alpha * a)) - (-expm1(-alpha * a_dev))) / sigma)
                else:
                    flow = (-expm1(-alpha * a)) - r
                    mu = lam * J - ur + expm1(beta * a)
                pay += disc * flow * dt
                z = philox_normal(seed, <unsigned long long>p, <unsigned long long>k)
                J = J + mu * dt + s * sqdt * z
                if J < 0.0:
                    J = 0.0
                elif J > x_maxv:
                    J = x_maxv
                disc *= edf
            if not done:
                pay += disc * J if kind == 1 else -disc * J
            payoff[p] = pay
    return payoff_arr, term_arr, status_arr
