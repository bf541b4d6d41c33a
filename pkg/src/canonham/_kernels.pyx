# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled recursion kernels.

Semantics are identical to ``_kernels_py``; that module is the readable
reference.  The loops here are plain C over complex128 buffers, which pays
off at the small-to-moderate orders the solvers live at, where per-call NumPy
overhead dominates the pure-Python path.
"""

import numpy as np

from libc.math cimport sqrt

BACKEND = "cython"


def levinson_sweep(gamma_in, Py_ssize_t n, double pd_tol, bint want_solutions=False):
    g_arr = np.array(gamma_in, dtype=np.complex128, order="C")
    cdef double complex[::1] g = g_arr
    cdef double e = g[0].real
    if not e > pd_tol:
        z = np.zeros(0)
        return z.astype(complex), z, z, z.astype(complex), None, -1

    alphas_arr = np.zeros(n, dtype=np.complex128)
    eps_arr = np.zeros(n + 1)
    sums_arr = np.zeros(n + 1)
    dsums_arr = np.zeros(n + 1, dtype=np.complex128)
    sol_arr = np.zeros((n + 1, n + 1), dtype=np.complex128) if want_solutions else None

    cdef double complex[::1] alphas = alphas_arr
    cdef double[::1] eps = eps_arr
    cdef double[::1] sums = sums_arr
    cdef double complex[::1] dsums = dsums_arr
    cdef double complex[:, ::1] sol
    if want_solutions:
        sol = sol_arr

    a_arr = np.zeros(n + 1, dtype=np.complex128)
    anew_arr = np.zeros(n + 1, dtype=np.complex128)
    x_arr = np.zeros(n + 1, dtype=np.complex128)
    pre_arr = np.zeros(n + 1, dtype=np.complex128)
    cdef double complex[::1] a = a_arr
    cdef double complex[::1] anew = anew_arr
    cdef double complex[::1] x = x_arr
    cdef double complex[::1] pre = pre_arr

    cdef Py_ssize_t k, j, reached
    cdef double complex alpha, phi1, acc, tmp, scale
    cdef double e_next, mag2

    for j in range(1, n + 1):
        pre[j] = pre[j - 1] + g[j]

    a[0] = 1.0
    x[0] = 1.0 / e
    eps[0] = e
    sums[0] = 1.0 / e
    if want_solutions:
        sol[0, 0] = x[0]
    reached = 0
    for k in range(n):
        acc = 0
        for j in range(k + 1):
            acc = acc + a[j].conjugate() * g[j + 1]
        alpha = acc / e
        mag2 = alpha.real * alpha.real + alpha.imag * alpha.imag
        e_next = e * (1.0 - mag2)
        if not e_next > pd_tol:
            break
        alphas[k] = alpha
        for j in range(k + 2):
            tmp = a[j - 1] if j >= 1 else 0
            if j <= k:
                tmp = tmp - alpha.conjugate() * a[k - j].conjugate()
            anew[j] = tmp
        for j in range(k + 2):
            a[j] = anew[j]
        e = e_next
        phi1 = 0
        for j in range(k + 2):
            phi1 = phi1 + a[j]
        scale = phi1 / e
        for j in range(k + 2):
            x[j] = x[j] + scale * a[j].conjugate()
        eps[k + 1] = e
        sums[k + 1] = sums[k] + (phi1.real * phi1.real + phi1.imag * phi1.imag) / e
        acc = 0
        for j in range(k + 2):
            acc = acc + (pre[j] - pre[k + 1 - j].conjugate()) * x[j]
        dsums[k + 1] = acc
        if want_solutions:
            for j in range(k + 2):
                sol[k + 1, j] = x[j]
        reached = k + 1

    sol_out = sol_arr[: reached + 1, : reached + 1].copy() if want_solutions else None
    return (
        alphas_arr[:reached],
        eps_arr[: reached + 1],
        sums_arr[: reached + 1],
        dsums_arr[: reached + 1],
        sol_out,
        reached,
    )


def szego_eval(double gamma0, alphas_in, double complex eta, Py_ssize_t n):
    al_arr = np.array(alphas_in, dtype=np.complex128, order="C")
    cdef double complex[::1] al = al_arr
    phi_arr = np.empty(n + 1, dtype=np.complex128)
    phis_arr = np.empty(n + 1, dtype=np.complex128)
    cdef double complex[::1] phi = phi_arr
    cdef double complex[::1] phis = phis_arr
    cdef double complex p, ps, pn
    cdef double rho, mag2
    cdef Py_ssize_t k
    p = 1.0 / sqrt(gamma0)
    ps = p
    phi[0] = p
    phis[0] = ps
    for k in range(n):
        mag2 = al[k].real * al[k].real + al[k].imag * al[k].imag
        rho = sqrt(1.0 - mag2)
        pn = (eta * p - al[k].conjugate() * ps) / rho
        ps = (ps - al[k] * eta * p) / rho
        p = pn
        phi[k + 1] = p
        phis[k + 1] = ps
    return phi_arr, phis_arr


def moments_from_alphas(double gamma0, alphas_in, Py_ssize_t n):
    al_arr = np.array(alphas_in, dtype=np.complex128, order="C")
    cdef double complex[::1] al = al_arr
    gamma_arr = np.zeros(n + 1, dtype=np.complex128)
    cdef double complex[::1] gamma = gamma_arr
    a_arr = np.zeros(n + 1, dtype=np.complex128)
    anew_arr = np.zeros(n + 1, dtype=np.complex128)
    cdef double complex[::1] a = a_arr
    cdef double complex[::1] anew = anew_arr
    cdef double complex alpha, s, tmp
    cdef double e, mag2
    cdef Py_ssize_t k, j
    gamma[0] = gamma0
    a[0] = 1.0
    e = gamma0
    for k in range(n):
        alpha = al[k]
        s = 0
        for j in range(k):
            s = s + a[j].conjugate() * gamma[j + 1]
        gamma[k + 1] = alpha * e - s
        for j in range(k + 2):
            tmp = a[j - 1] if j >= 1 else 0
            if j <= k:
                tmp = tmp - alpha.conjugate() * a[k - j].conjugate()
            anew[j] = tmp
        for j in range(k + 2):
            a[j] = anew[j]
        mag2 = alpha.real * alpha.real + alpha.imag * alpha.imag
        e = e * (1.0 - mag2)
    return gamma_arr
