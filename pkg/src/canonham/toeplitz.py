"""Toeplitz moment matrices and the summed-inverse functionals.

Two independent linear-algebra paths compute the same functionals:

* a dense path (``sum_inverse`` / ``sum_delta_inverse``) that materializes the
  matrices and solves through a Hermitian Cholesky factorization, and
* a fast path (``levinson_solve_ones``) that runs the Levinson-type recursion
  once and yields the solutions of Gamma_k x = 1 for every order k in O(n^2).

The fast path also produces the reflection coefficients consumed by the
orthogonal-polynomial route.

For Hermitian moment data the companion functional S[Delta_n Gamma_n^{-1}] is
purely imaginary (conjugating flips its sign, by persymmetry of Toeplitz
matrices), so ``sum_delta_inverse`` returns its imaginary part as the real
off-diagonal increment and treats the residual real part as a consistency
check.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    BreakdownAtOrder,
    InsufficientMoments,
    NonRealResult,
    NotPositiveDefinite,
)
from .kernels import levinson_sweep

# innovation floor: positive definiteness requires eps_n > PD_TOL_FACTOR * gamma_0
PD_TOL_FACTOR = 1e-13

# tolerance on the residual (should-vanish) part of S[Delta Gamma^{-1}]
REAL_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class GammaMatrix:
    """Hermitian Toeplitz moment matrix of size (n+1) x (n+1)."""

    order: int
    first_row: np.ndarray = field(repr=False)

    def __post_init__(self):
        row = np.asarray(self.first_row, dtype=complex).copy()
        row.setflags(write=False)
        if len(row) != self.order + 1:
            raise ValueError("first_row must hold gamma_0..gamma_n")
        object.__setattr__(self, "first_row", row)

    def to_dense(self):
        """Entry (j, k) = gamma_{k-j}."""
        return scipy.linalg.toeplitz(np.conj(self.first_row), self.first_row)


@dataclass(frozen=True)
class DeltaMatrix:
    """Zero-diagonal companion: gamma_{k-j} above, -conj(gamma_{j-k}) below."""

    order: int
    first_row: np.ndarray = field(repr=False)

    def __post_init__(self):
        row = np.asarray(self.first_row, dtype=complex).copy()
        row.setflags(write=False)
        if len(row) != self.order + 1:
            raise ValueError("first_row must hold gamma_0..gamma_n")
        object.__setattr__(self, "first_row", row)

    def to_dense(self):
        upper = np.triu(
            scipy.linalg.toeplitz(np.conj(self.first_row), self.first_row), 1
        )
        return upper - upper.conj().T


def build_gamma(moments, n):
    """Gamma_n(mu): the (n+1) x (n+1) upper-left moment matrix."""
    if n < 0:
        raise ValueError("order must be nonnegative")
    if n > moments.order:
        raise InsufficientMoments(
            f"order {n} requested but only {moments.order} moments available"
        )
    return GammaMatrix(order=n, first_row=moments.gamma[: n + 1])


def build_delta(moments, n):
    """Delta_n(mu), same order convention as build_gamma."""
    if n < 0:
        raise ValueError("order must be nonnegative")
    if n > moments.order:
        raise InsufficientMoments(
            f"order {n} requested but only {moments.order} moments available"
        )
    return DeltaMatrix(order=n, first_row=moments.gamma[: n + 1])


def _cho_solve_ones(G):
    dense = G.to_dense()
    try:
        factor = scipy.linalg.cho_factor(dense, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(
            f"Gamma_{G.order} is not positive definite: {exc}",
            max_order=_max_pd_order(G.first_row),
        ) from exc
    return scipy.linalg.cho_solve(factor, np.ones(G.order + 1, dtype=complex))


def _max_pd_order(gamma):
    pd_tol = PD_TOL_FACTOR * max(float(np.real(gamma[0])), 0.0)
    *_, reached = levinson_sweep(gamma, len(gamma) - 1, pd_tol)
    return reached


def sum_inverse(G):
    """S[Gamma^{-1}] = 1^T Gamma^{-1} 1, via the dense Cholesky path.

    Raises NotPositiveDefinite (with the largest order at which positivity
    held) when the factorization fails.
    """
    x = _cho_solve_ones(G)
    return float(np.real(np.sum(x)))


def sum_delta_inverse(D, G):
    """The real off-diagonal functional extracted from S[Delta Gamma^{-1}].

    Solves Gamma y = 1 once, forms s = 1^T (Delta y), and returns Im(s); for
    Hermitian moment data s is purely imaginary and Re(s) is roundoff.  A
    real part exceeding REAL_RESIDUAL_TOL (relative to |s|) signals
    inconsistent moment data and raises NonRealResult.
    """
    if D.order != G.order:
        raise ValueError("Delta and Gamma orders must match")
    y = _cho_solve_ones(G)
    s = complex(np.sum(D.to_dense() @ y))
    # the residual scales with the size of the companion functionals, so the
    # tolerance is relative to them rather than absolute
    scale = max(1.0, abs(s), abs(float(np.real(np.sum(y)))))
    if abs(s.real) > REAL_RESIDUAL_TOL * scale:
        raise NonRealResult(
            f"S[Delta Gamma^-1] residual part {s.real:.3e} exceeds tolerance"
        )
    return s.imag


@dataclass(frozen=True)
class LevinsonResult:
    """Everything one Levinson sweep produces, orders 0..reached.

    solutions[k] solves Gamma_k x = 1; sums[k] = S[Gamma_k^{-1}];
    delta_sums[k] = Im S[Delta_k Gamma_k^{-1}]; alphas are the reflection
    coefficients reused by the orthogonal-polynomial route; innovations are
    the per-order prediction variances (ratios of consecutive Toeplitz
    determinants).
    """

    reached: int
    alphas: np.ndarray
    innovations: np.ndarray
    sums: np.ndarray
    delta_sums: np.ndarray
    residuals: np.ndarray
    _solutions: np.ndarray = field(repr=False, default=None)

    @property
    def solutions(self):
        if self._solutions is None:
            raise ValueError("sweep was run without want_solutions")
        return [self._solutions[k, : k + 1] for k in range(self.reached + 1)]


def levinson_solve_ones(moments, n, pd_tol=None, want_solutions=True):
    """Solve Gamma_k x = 1 for every k <= n in one O(n^2) sweep.

    Parameters
    ----------
    moments : MomentSequence
    n : highest order
    pd_tol : innovation floor; defaults to PD_TOL_FACTOR * gamma_0.
    want_solutions : keep the O(n^2) solution stack (the sums and reflection
        data are always kept).

    Raises
    ------
    BreakdownAtOrder
        When positivity fails at some order k <= n; the exception's
        ``partial`` attribute carries the LevinsonResult for orders < k.
    """
    if n > moments.order:
        raise InsufficientMoments(
            f"order {n} requested but only {moments.order} moments available"
        )
    gamma0 = float(np.real(moments.gamma[0]))
    if pd_tol is None:
        pd_tol = PD_TOL_FACTOR * gamma0
    alphas, eps, sums, dsums, sol, reached = levinson_sweep(
        moments.gamma, n, pd_tol, want_solutions
    )
    result = LevinsonResult(
        reached=reached,
        alphas=alphas,
        innovations=eps,
        sums=sums,
        delta_sums=np.imag(dsums),
        residuals=np.real(dsums),
        _solutions=sol,
    )
    if reached < n:
        raise BreakdownAtOrder(reached + 1, partial=result)
    return result
