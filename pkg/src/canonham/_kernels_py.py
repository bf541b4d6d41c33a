"""Pure-NumPy implementations of the hot recursion kernels.

These mirror the compiled extension in ``_kernels.pyx``; the dispatcher in
``kernels`` picks whichever is available.  All three kernels work on the
monic orthogonal-polynomial recursion attached to a Hermitian Toeplitz moment
matrix Gamma[j, k] = gamma_{k-j}:

    Phi_{k+1}(z) = z Phi_k(z) - conj(alpha_k) Phi_k^*(z),
    eps_{k+1}    = eps_k (1 - |alpha_k|^2),        eps_0 = gamma_0,

with alpha_k = (sum_j conj(a_j) gamma_{j+1}) / eps_k for Phi_k = sum a_j z^j.
The sweep simultaneously accumulates, for every order k,

    x_k    = Gamma_k^{-1} 1          (via the Christoffel-Darboux kernel at 1),
    s_k    = 1^T x_k                 (the summed inverse),
    d_k    = 1^T Delta_k x_k         (the zero-diagonal companion functional),

where the column sums of Delta_k are P_j - conj(P_{k-j}) with the moment
prefix sums P_j = gamma_1 + ... + gamma_j.
"""

import numpy as np

BACKEND = "python"


def levinson_sweep(gamma, n, pd_tol, want_solutions=False):
    """One O(n^2) sweep over orders 0..n.

    Parameters
    ----------
    gamma : (>= n+1,) complex array, gamma[0] real positive.
    n : highest order requested.
    pd_tol : absolute floor for the innovation eps (positive definiteness is
        considered lost when eps <= pd_tol).
    want_solutions : also accumulate the stacked solutions x_k.

    Returns
    -------
    (alphas, eps, sums, dsums, solutions, reached)
        ``reached`` is the largest order with a valid solution, or -1 when
        gamma_0 itself fails.  alphas[k] is valid for k < reached; eps, sums
        and dsums cover orders 0..reached.  solutions is a
        (reached+1, reached+1) array with x_k in solutions[k, :k+1], or None.
    """
    gamma = np.asarray(gamma, dtype=complex)
    e = float(gamma[0].real)
    if not e > pd_tol:
        z = np.zeros(0)
        return z.astype(complex), z, z, z.astype(complex), None, -1

    alphas = np.zeros(n, dtype=complex)
    eps = np.zeros(n + 1)
    sums = np.zeros(n + 1)
    dsums = np.zeros(n + 1, dtype=complex)
    sol = np.zeros((n + 1, n + 1), dtype=complex) if want_solutions else None

    prefix = np.concatenate([[0.0 + 0j], np.cumsum(gamma[1 : n + 1])])
    a = np.array([1.0 + 0j])
    x = np.array([1.0 / e + 0j])
    eps[0] = e
    sums[0] = 1.0 / e
    if want_solutions:
        sol[0, 0] = x[0]
    reached = 0
    for k in range(n):
        alpha = np.vdot(a, gamma[1 : k + 2]) / e
        e_next = e * (1.0 - abs(alpha) ** 2)
        if not e_next > pd_tol:
            break
        alphas[k] = alpha
        a_new = np.zeros(k + 2, dtype=complex)
        a_new[1:] = a
        a_new[: k + 1] -= np.conj(alpha) * np.conj(a[::-1])
        a = a_new
        e = e_next
        phi1 = np.sum(a)
        x = np.concatenate([x, [0.0]]) + (phi1 / e) * np.conj(a)
        eps[k + 1] = e
        sums[k + 1] = sums[k] + abs(phi1) ** 2 / e
        j = np.arange(k + 2)
        dsums[k + 1] = (prefix[j] - np.conj(prefix[k + 1 - j])) @ x
        if want_solutions:
            sol[k + 1, : k + 2] = x
        reached = k + 1
    if want_solutions:
        sol = sol[: reached + 1, : reached + 1]
    return (
        alphas[:reached],
        eps[: reached + 1],
        sums[: reached + 1],
        dsums[: reached + 1],
        sol,
        reached,
    )


def szego_eval(gamma0, alphas, eta, n):
    """Orthonormal polynomial values phi_k(eta), phi*_k(eta) for k = 0..n."""
    alphas = np.asarray(alphas, dtype=complex)
    phi = np.empty(n + 1, dtype=complex)
    phis = np.empty(n + 1, dtype=complex)
    p = ps = 1.0 / np.sqrt(gamma0) + 0j
    phi[0] = p
    phis[0] = ps
    for k in range(n):
        rho = np.sqrt(1.0 - abs(alphas[k]) ** 2)
        p, ps = (eta * p - np.conj(alphas[k]) * ps) / rho, (
            ps - alphas[k] * eta * p
        ) / rho
        phi[k + 1] = p
        phis[k + 1] = ps
    return phi, phis


def moments_from_alphas(gamma0, alphas, n):
    """Invert the sweep: moments gamma_0..gamma_n from reflection data."""
    alphas = np.asarray(alphas, dtype=complex)
    gamma = np.zeros(n + 1, dtype=complex)
    gamma[0] = gamma0
    a = np.array([1.0 + 0j])
    e = float(gamma0)
    for k in range(n):
        alpha = alphas[k]
        s = np.vdot(a[:-1], gamma[1 : k + 1]) if k > 0 else 0.0
        gamma[k + 1] = alpha * e - s
        a_new = np.zeros(k + 2, dtype=complex)
        a_new[1:] = a
        a_new[: k + 1] -= np.conj(alpha) * np.conj(a[::-1])
        a = a_new
        e *= 1.0 - abs(alpha) ** 2
    return gamma
