"""Recovery of step Hamiltonians from the moments of periodic spectral measures.

For a 2T-periodic measure the Hamiltonian is locally constant on a uniform
grid of step pi/(2T); the diagonal steps come from differences of summed
inverses of the moment matrices and the off-diagonal steps from the companion
functional.  Both a fast recursion path and a dense factorization path are
available and must agree; the fast path is the default.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import toeplitz
from .errors import (
    BreakdownAtOrder,
    LengthMismatch,
    NonRealResult,
    NotPositiveDefinite,
    PartialResultWarning,
)


@dataclass(frozen=True)
class StepHamiltonian:
    """Det-normalized step Hamiltonian: h22 = (1 + g^2)/h11 per step.

    Step n covers [n*step_length, (n+1)*step_length).
    """

    step_length: float
    h11: np.ndarray = field(repr=False)
    g: np.ndarray = field(repr=False)

    def __post_init__(self):
        h11 = np.asarray(self.h11, dtype=float).copy()
        g = np.asarray(self.g, dtype=float).copy()
        if self.step_length <= 0:
            raise ValueError("step_length must be positive")
        if h11.shape != g.shape or h11.ndim != 1:
            raise LengthMismatch("h11 and g must be 1-d arrays of equal length")
        if len(h11) and np.min(h11) <= 0:
            raise ValueError("all h11 steps must be positive")
        h11.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "h11", h11)
        object.__setattr__(self, "g", g)

    @property
    def n_steps(self):
        return len(self.h11)

    @property
    def h22(self):
        return (1.0 + self.g**2) / self.h11

    def is_diagonal(self):
        return bool(np.all(self.g == 0.0))

    def value_at(self, t):
        """(h11, g, h22) of the step containing time t >= 0."""
        n = int(np.floor(t / self.step_length))
        if t < 0 or n >= self.n_steps:
            raise IndexError(f"t = {t} outside the covered range")
        return float(self.h11[n]), float(self.g[n]), float(self.h22[n])

    def integral_h11(self, a, b):
        """Exact integral of the piecewise-constant h11 over [a, b]."""
        if not 0 <= a <= b <= self.n_steps * self.step_length:
            raise ValueError("interval outside the covered range")
        edges = np.arange(self.n_steps + 1) * self.step_length
        lo = np.clip(edges[:-1], a, b)
        hi = np.clip(edges[1:], a, b)
        return float(np.sum((hi - lo) * self.h11))

    def to_json(self):
        return {
            "step_length": self.step_length,
            "steps": [
                {"h11": float(h), "g": float(g)} for h, g in zip(self.h11, self.g)
            ],
        }

    @staticmethod
    def from_json(obj):
        steps = obj["steps"]
        return StepHamiltonian(
            step_length=float(obj["step_length"]),
            h11=np.array([s["h11"] for s in steps], dtype=float),
            g=np.array([s["g"] for s in steps], dtype=float),
        )

    def csv_rows(self):
        """Rows (t_start, t_end, h11, g, h22)."""
        s = self.step_length
        h22 = self.h22
        return [
            (n * s, (n + 1) * s, float(self.h11[n]), float(self.g[n]), float(h22[n]))
            for n in range(self.n_steps)
        ]


def assemble(h_list, g_list, T):
    """Assemble recovered steps into the Hamiltonian of a 2T-periodic measure."""
    h = np.asarray(h_list, dtype=float)
    g = np.asarray(g_list, dtype=float)
    if h.shape != g.shape:
        raise LengthMismatch(f"{len(h)} h-steps vs {len(g)} g-steps")
    return StepHamiltonian(step_length=np.pi / (2.0 * T), h11=h, g=g)


def _handle_breakdown(order, partial_values, allow_partial, what):
    if allow_partial:
        warnings.warn(
            f"positive definiteness lost at order {order}; "
            f"returning {len(partial_values)} {what}-steps",
            PartialResultWarning,
            stacklevel=3,
        )
        return partial_values
    raise BreakdownAtOrder(order, partial=partial_values)


def recover_h(moments, N, method="levinson", pd_tol=None, allow_partial=False):
    """Diagonal steps h_0..h_N from the summed-inverse differences.

    h_0 = 1/gamma_0 and h_n = S[Gamma_n^{-1}] - S[Gamma_{n-1}^{-1}].

    ``method`` selects the fast recursion ("levinson") or the dense
    factorization path ("dense").  On loss of positive definiteness at order
    k <= N, raises BreakdownAtOrder carrying steps 0..k-1, or returns them
    with a PartialResultWarning when ``allow_partial`` is set.
    """
    if method == "levinson":
        try:
            res = toeplitz.levinson_solve_ones(
                moments, N, pd_tol=pd_tol, want_solutions=False
            )
            sums = res.sums
        except BreakdownAtOrder as exc:
            sums = exc.partial.sums
            return _handle_breakdown(exc.order, _diff(sums), allow_partial, "h")
        return _diff(sums)
    if method == "dense":
        sums = []
        for n in range(N + 1):
            try:
                sums.append(toeplitz.sum_inverse(toeplitz.build_gamma(moments, n)))
            except NotPositiveDefinite:
                return _handle_breakdown(n, _diff(np.array(sums)), allow_partial, "h")
        return _diff(np.array(sums))
    raise ValueError(f"unknown method {method!r}")


def recover_g(moments, N, method="levinson", pd_tol=None, allow_partial=False):
    """Off-diagonal steps g_0..g_N; g_0 = 0.

    g_n is the increment of the companion functional Im S[Delta_n Gamma_n^{-1}].
    Raises NonRealResult if the residual part of the functional indicates
    inconsistent moment data; breakdown handling matches recover_h.
    """
    if method == "levinson":
        try:
            res = toeplitz.levinson_solve_ones(
                moments, N, pd_tol=pd_tol, want_solutions=False
            )
        except BreakdownAtOrder as exc:
            vals = _g_from_sweep(exc.partial, allow_partial)
            return _handle_breakdown(exc.order, vals, allow_partial, "g")
        return _g_from_sweep(res, allow_partial)
    if method == "dense":
        dsums = []
        for n in range(N + 1):
            try:
                dsums.append(
                    toeplitz.sum_delta_inverse(
                        toeplitz.build_delta(moments, n),
                        toeplitz.build_gamma(moments, n),
                    )
                )
            except NotPositiveDefinite:
                return _handle_breakdown(n, _diff(np.array(dsums)), allow_partial, "g")
        return _diff(np.array(dsums))
    raise ValueError(f"unknown method {method!r}")


def _g_from_sweep(res, allow_partial=False):
    # residual tolerance is relative to the functional magnitudes at the same
    # order; an absolute threshold would misfire near conditioning limits
    scale = np.maximum(np.maximum(1.0, np.abs(res.delta_sums)), res.sums)
    bad = np.abs(res.residuals) > toeplitz.REAL_RESIDUAL_TOL * scale
    if np.any(bad):
        n = int(np.argmax(bad))
        if allow_partial:
            warnings.warn(
                f"companion functional residual at order {n}; "
                f"returning {n} g-steps",
                PartialResultWarning,
                stacklevel=3,
            )
            return _diff(res.delta_sums[:n])
        raise NonRealResult(
            f"companion functional residual {res.residuals[n]:.3e} at order {n}"
        )
    return _diff(res.delta_sums)


def _diff(cumulative):
    out = np.asarray(cumulative, dtype=float).copy()
    if len(out) > 1:
        out[1:] = np.diff(out)
    return out


def recover_hamiltonian(moments, N=None, method="levinson", pd_tol=None,
                        allow_partial=False):
    """Full pipeline: moments -> assembled StepHamiltonian.

    N defaults to the full available moment order.  With ``allow_partial``
    the result may have fewer than N+1 steps.
    """
    if N is None:
        N = moments.order
    h = recover_h(moments, N, method=method, pd_tol=pd_tol,
                  allow_partial=allow_partial)
    g = recover_g(moments, N, method=method, pd_tol=pd_tol,
                  allow_partial=allow_partial)
    m = min(len(h), len(g))
    return assemble(h[:m], g[:m], moments.half_period)
