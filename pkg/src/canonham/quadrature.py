"""Adaptive Gauss-Legendre quadrature for oscillatory moment integrals.

The moment computations integrate a real density against e^{-i*omega*x} for a
whole family of frequencies at once.  Panels are bisected adaptively; on each
panel the density is evaluated once and reused for every frequency, and the
error estimate is the difference between a 12-point and a 24-point rule.

Also provides the exact segment integrals of a piecewise-linear density
against e^{-i*omega*x}, used for tabulated densities where naive quadrature
would be both slow and inaccurate at large omega.
"""

import numpy as np

from .errors import QuadratureFailure

_NODES_LO, _WEIGHTS_LO = np.polynomial.legendre.leggauss(12)
_NODES_HI, _WEIGHTS_HI = np.polynomial.legendre.leggauss(24)

_FACT = [1.0]
for _n in range(1, 20):
    _FACT.append(_FACT[-1] * _n)


def _panel_integrals(f, a, b, omegas):
    """Return (lo, hi) rule values of int_a^b f(x) e^{-i w x} dx for all w."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    out = []
    for nodes, weights in ((_NODES_LO, _WEIGHTS_LO), (_NODES_HI, _WEIGHTS_HI)):
        x = mid + half * nodes
        fx = np.asarray(f(x), dtype=float) * weights
        phase = np.exp(-1j * np.outer(omegas, x))
        out.append(half * (phase @ fx))
    return out


def oscillatory_moments(f, a, b, omegas, tol=1e-11, max_panels=40000):
    """Integrate ``f(x) * exp(-i*omega*x)`` over [a, b] for each omega.

    Parameters
    ----------
    f : callable
        Vectorized real density, ``f(x)`` for an ndarray ``x``.
    a, b : float
        Integration limits, a < b.
    omegas : array_like
        Frequencies; the result has one entry per frequency.
    tol : float
        Absolute tolerance per frequency.
    max_panels : int
        Refinement budget before giving up.

    Returns
    -------
    ndarray of complex, one integral per omega.

    Raises
    ------
    QuadratureFailure
        If the panel budget is exhausted before every frequency meets ``tol``.
    """
    omegas = np.asarray(omegas, dtype=float)
    if b <= a:
        return np.zeros(omegas.shape, dtype=complex)
    width = b - a
    total = np.zeros(omegas.shape, dtype=complex)
    lo, hi = _panel_integrals(f, a, b, omegas)
    stack = [(a, b, hi, float(np.max(np.abs(hi - lo))))]
    n_panels = 1
    while stack:
        pa, pb, val, err = stack.pop()
        if err <= tol * (pb - pa) / width or (pb - pa) < 1e-14 * width:
            total += val
            continue
        if n_panels >= max_panels:
            raise QuadratureFailure(
                f"adaptive quadrature exceeded {max_panels} panels "
                f"(worst panel error {err:.3e}, tol {tol:.3e})"
            )
        pm = 0.5 * (pa + pb)
        for qa, qb in ((pa, pm), (pm, pb)):
            lo, hi = _panel_integrals(f, qa, qb, omegas)
            stack.append((qa, qb, hi, float(np.max(np.abs(hi - lo)))))
            n_panels += 1
    return total


def adaptive_integral(f, a, b, tol=1e-11, max_panels=40000):
    """Plain adaptive integral of a scalar real function (omega = 0 case)."""
    return float(
        np.real(oscillatory_moments(f, a, b, np.zeros(1), tol, max_panels)[0])
    )


def _e0(theta):
    # int_0^1 e^{-i theta u} du, switched to a series near theta = 0
    theta = np.asarray(theta, dtype=float)
    small = np.abs(theta) < 0.5
    ts = np.where(small, theta, 1.0)
    acc = np.zeros(ts.shape, dtype=complex)
    term = np.ones(ts.shape, dtype=complex)
    for n in range(1, 18):
        acc += term / _FACT[n]
        term = term * (-1j * ts)
    tb = np.where(small, 1.0, theta)
    closed = (1.0 - np.exp(-1j * tb)) / (1j * tb)
    return np.where(small, acc, closed)


def _e1(theta):
    # int_0^1 u e^{-i theta u} du = (E0(theta) - e^{-i theta}) / (i theta)
    theta = np.asarray(theta, dtype=float)
    small = np.abs(theta) < 0.5
    ts = np.where(small, theta, 1.0)
    acc = np.zeros(ts.shape, dtype=complex)
    term = np.ones(ts.shape, dtype=complex)
    for n in range(0, 18):
        acc += term / (_FACT[n] * (n + 2))
        term = term * (-1j * ts)
    tb = np.where(small, 1.0, theta)
    closed = (_e0(tb) - np.exp(-1j * tb)) / (1j * tb)
    return np.where(small, acc, closed)


def piecewise_linear_moments(x, rho, omegas):
    """Exact integrals of the linear interpolant of (x, rho) against e^{-i w x}.

    Parameters
    ----------
    x : (m,) increasing knots
    rho : (m,) density values at the knots
    omegas : (K,) frequencies

    Returns
    -------
    (K,) complex array: int rho_lin(x) e^{-i w x} dx over [x[0], x[-1]].
    """
    x = np.asarray(x, dtype=float)
    rho = np.asarray(rho, dtype=float)
    omegas = np.asarray(omegas, dtype=float)
    h = np.diff(x)                      # (m-1,)
    r0 = rho[:-1]
    dr = np.diff(rho)
    theta = np.outer(omegas, h)        # (K, m-1)
    seg = h * (r0 * _e0(theta) + dr * _e1(theta))
    phase = np.exp(-1j * np.outer(omegas, x[:-1]))
    return np.sum(phase * seg, axis=1)
