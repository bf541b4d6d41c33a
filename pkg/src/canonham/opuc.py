"""The unit-circle orthogonal-polynomial route.

Moments of a periodic measure define polynomials orthonormal on the circle;
their reflection (Verblunsky) coefficients alpha_n with |alpha_n| < 1 encode
the measure up to the mass normalization gamma_0.  Point evaluations at z = 1
give the diagonal Hamiltonian steps, h_n = |phi_n(1)|^2; evaluations of the
dual family (alpha -> -alpha) give the off-diagonal steps through the phase
of the ratio phi~_n(1)/phi_n(1).  The same machinery runs the direct spectral
problem: a diagonal step Hamiltonian determines its reflection coefficients
through the step ratios, and inverting the recursion recovers the moments.

Conventions are fixed operationally: the recursion signs are whichever make
the polynomial route reproduce the Toeplitz route on the (1+cos x)dx pin,
which the test suite asserts up front.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import kernels, toeplitz
from .errors import (
    BreakdownAtOrder,
    DegenerateRatio,
    InsufficientMoments,
    NonDiagonalHamiltonian,
)
from .measures import MomentSequence

# relative floor for |Re(ratio)| in the off-diagonal formula
RATIO_TOL = 1e-12


@dataclass(frozen=True)
class VerblunskySeq:
    """Reflection coefficients plus the mass normalization gamma_0."""

    gamma0: float
    alpha: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.alpha, dtype=complex).copy()
        a.setflags(write=False)
        if self.gamma0 <= 0:
            raise ValueError("gamma0 must be positive")
        if len(a) and np.max(np.abs(a)) >= 1.0:
            raise ValueError("all |alpha_n| must be < 1")
        object.__setattr__(self, "alpha", a)

    @property
    def order(self):
        return len(self.alpha)

    def to_json(self):
        return {
            "gamma0": self.gamma0,
            "alpha": [[float(a.real), float(a.imag)] for a in self.alpha],
        }

    @staticmethod
    def from_json(obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        return VerblunskySeq(
            gamma0=float(obj["gamma0"]),
            alpha=np.array([complex(re, im) for re, im in obj["alpha"]]),
        )


@dataclass(frozen=True)
class OrthoPolyEval:
    """Values phi_0..phi_N and phi*_0..phi*_N at a point of the unit circle."""

    point: complex
    phi: np.ndarray = field(repr=False)
    phi_star: np.ndarray = field(repr=False)


def verblunsky_from_moments(moments, pd_tol=None):
    """Reflection coefficients of the measure behind a moment sequence.

    Uses all available moments (order N gives alpha_0..alpha_{N-1}).  Raises
    BreakdownAtOrder when positive definiteness fails; the exception carries
    the valid prefix as a VerblunskySeq.
    """
    gamma0 = float(np.real(moments.gamma[0]))
    if pd_tol is None:
        pd_tol = toeplitz.PD_TOL_FACTOR * gamma0
    alphas, _, _, _, _, reached = kernels.levinson_sweep(
        moments.gamma, moments.order, pd_tol
    )
    if reached < moments.order:
        raise BreakdownAtOrder(
            reached + 1, partial=VerblunskySeq(gamma0=gamma0, alpha=alphas)
        )
    return VerblunskySeq(gamma0=gamma0, alpha=alphas)


def moments_from_verblunsky(v, N, half_period=np.pi):
    """Moments gamma_0..gamma_N of the measure with reflection data ``v``.

    Exact inverse of verblunsky_from_moments (round trips to machine
    precision).  Requires N <= v.order.
    """
    if N > v.order:
        raise ValueError(f"need {N} reflection coefficients, have {v.order}")
    gamma = kernels.moments_from_alphas(v.gamma0, v.alpha, N)
    return MomentSequence(half_period=half_period, gamma=gamma)


def dual_verblunsky(v):
    """The AC-dual measure's data: negated coefficients, same normalization.

    The mass of the dual is only determined up to a positive constant; keeping
    gamma_0 makes the duality an involution, and every downstream formula is
    invariant under that choice.
    """
    return VerblunskySeq(gamma0=v.gamma0, alpha=-v.alpha)


def phi_at(v, eta, N=None):
    """Evaluate the orthonormal family at a point eta with |eta| = 1."""
    eta = complex(eta)
    if abs(abs(eta) - 1.0) > 1e-12:
        raise ValueError(f"|eta| = {abs(eta)} is not on the unit circle")
    if N is None:
        N = v.order
    if N > v.order:
        raise ValueError(f"need {N} reflection coefficients, have {v.order}")
    phi, phi_star = kernels.szego_eval(v.gamma0, v.alpha, eta, N)
    return OrthoPolyEval(point=eta, phi=phi, phi_star=phi_star)


def h_via_opuc(moments, N, pd_tol=None):
    """Diagonal steps via point evaluation: h_n = |phi_n(1)|^2."""
    v = _verblunsky_prefix(moments, N, pd_tol)
    if v.order < N:
        raise BreakdownAtOrder(
            v.order + 1, partial=np.abs(phi_at(v, 1.0).phi) ** 2
        )
    return np.abs(phi_at(v, 1.0, N).phi) ** 2


def g_via_opuc(moments, N, pd_tol=None):
    """Off-diagonal steps from the dual family.

    g_n = -Im(r_n)/Re(r_n) with r_n = phi~_n(1)/phi_n(1); raises
    DegenerateRatio when the real part vanishes (relative to |r_n|).
    """
    v = _verblunsky_prefix(moments, N, pd_tol)
    if v.order < N:
        raise BreakdownAtOrder(v.order + 1, partial=_g_ratio(v, v.order))
    return _g_ratio(v, N)


def _verblunsky_prefix(moments, N, pd_tol):
    if N > moments.order:
        raise InsufficientMoments(
            f"order {N} requested but only {moments.order} moments available"
        )
    try:
        v = verblunsky_from_moments(moments, pd_tol=pd_tol)
    except BreakdownAtOrder as exc:
        v = exc.partial
        if v.order < N:
            return v
    return VerblunskySeq(gamma0=v.gamma0, alpha=v.alpha[:N]) if v.order > N else v


def _g_ratio(v, N):
    r = phi_at(v, 1.0, N).phi
    rt = phi_at(dual_verblunsky(v), 1.0, N).phi
    ratio = rt / r
    bad = np.abs(ratio.real) < RATIO_TOL * np.abs(ratio)
    if np.any(bad):
        n = int(np.argmax(bad))
        raise DegenerateRatio(f"Re(phi~_{n}(1)/phi_{n}(1)) vanishes")
    return -ratio.imag / ratio.real


def verblunsky_from_hamiltonian(H):
    """Reflection data of the spectral measure of a diagonal step Hamiltonian.

    gamma_0 = 1/h_0 and alpha_n = (1 - h_{n+1}/h_n) / (1 + h_{n+1}/h_n); the
    coefficients are invariant under scaling of the measure, so this holds
    for any gamma_0 > 0.
    """
    if not H.is_diagonal():
        raise NonDiagonalHamiltonian(
            "direct spectral problem implemented for diagonal Hamiltonians only"
        )
    h = H.h11
    if len(h) < 1:
        raise ValueError("Hamiltonian has no steps")
    ratios = h[1:] / h[:-1]
    alpha = (1.0 - ratios) / (1.0 + ratios)
    return VerblunskySeq(gamma0=1.0 / float(h[0]), alpha=alpha.astype(complex))


def direct_moments(H, N):
    """Moments of the spectral measure of a diagonal step Hamiltonian.

    The measure is 2T-periodic with T = pi/(2 * step_length); gamma_0 = 1/h_0
    and the higher moments come from inverting the reflection recursion.
    Requires N+1 available steps (h_0..h_N).
    """
    v = verblunsky_from_hamiltonian(H)
    if N > v.order:
        raise ValueError(f"{N + 1} steps needed for {N} moments, have {H.n_steps}")
    return moments_from_verblunsky(
        v, N, half_period=np.pi / (2.0 * H.step_length)
    )
