"""Closed-form reference Hamiltonians: point-mass families, atom systems,
the homogeneous family, and the Bessel system.

These are the analytic oracles the numerical pipelines are checked against.
Conventions for the measure parameters follow ``mu = alpha + beta*pi*delta``:
``alpha`` is a constant Lebesgue density and ``beta*pi`` the mass of each atom.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.integrate

from .errors import DomainError, SeriesDivergence, SingularSystem


@dataclass(frozen=True)
class HamiltonianFunction:
    """Continuous-time Hamiltonian t -> (h11, g, h22) on (domain_start, inf).

    h22 defaults to the det-normalized completion (1 + g^2)/h11; a closed
    form may override it.
    """

    h11: object
    g: object = None
    h22: object = None
    domain_start: float = 0.0
    domain_open: bool = False
    label: str = ""

    def _check(self, t):
        bad = t <= self.domain_start if self.domain_open else t < self.domain_start
        if np.any(bad):
            op = "<=" if self.domain_open else "<"
            raise DomainError(f"{self.label or 'Hamiltonian'}: t {op} {self.domain_start}")

    def __call__(self, t):
        """Evaluate (h11, g, h22) at scalar or array t."""
        t = np.asarray(t, dtype=float)
        self._check(t)
        h11 = np.asarray(self.h11(t), dtype=float)
        g = np.zeros_like(h11) if self.g is None else np.asarray(self.g(t), dtype=float)
        if self.h22 is None:
            h22 = (1.0 + g**2) / h11
        else:
            h22 = np.asarray(self.h22(t), dtype=float)
        return h11, g, h22

    def integral_h11(self, a, b, tol=1e-10):
        self._check(np.array([a]))
        val, _ = scipy.integrate.quad(self.h11, a, b, epsabs=tol, epsrel=tol, limit=200)
        return val


def pointmass_h(alpha, beta, t):
    """h(t) = alpha/(alpha + t*beta)^2 for mu = alpha + beta*pi*delta_0."""
    t = np.asarray(t, dtype=float)
    return alpha / (alpha + t * beta) ** 2


def pointmass_hamiltonian(alpha, beta):
    return HamiltonianFunction(
        h11=lambda t: pointmass_h(alpha, beta, t), label=f"pointmass({alpha},{beta})"
    )


def winkler_h(h_base, r, t, antiderivative=None, tol=1e-10):
    """h of the measure mu + r*pi*delta_0: h_base(t) / (1 + r*int_0^t h_base)^2.

    The running integral uses ``antiderivative`` when supplied (exact for
    declared bases), adaptive quadrature otherwise.
    """
    if antiderivative is not None:
        integral = antiderivative(t) - antiderivative(0.0)
    else:
        integral, _ = scipy.integrate.quad(
            h_base, 0.0, t, epsabs=tol, epsrel=tol, limit=200
        )
    return h_base(t) / (1.0 + r * integral) ** 2


def winkler_fn(h_base, r, antiderivative=None, tol=1e-10):
    """The Winkler transform as a callable, for composition and plotting."""

    def h(t):
        return winkler_h(h_base, r, t, antiderivative=antiderivative, tol=tol)

    return h


def _sinc_scaled(t, x):
    # sin(t*x)/x with the removable value t at x = 0
    return t * np.sinc(t * np.asarray(x) / np.pi)


def atom_at_lambda_h(alpha, beta, lam, t):
    """h for mu = alpha + beta*pi*delta_lambda.

    Expanded derivative of t/alpha - (beta/alpha) (sin(lam t)/lam)^2/(alpha+beta t):

        h(t) = 1/alpha - (beta/alpha) * [ sin(2 lam t)/(lam (alpha + beta t))
               - beta sin^2(lam t)/(lam^2 (alpha + beta t)^2) ].

    The lam -> 0 limit reduces to the origin point-mass closed form.
    """
    t = np.asarray(t, dtype=float)
    denom = alpha + beta * t
    s2 = _sinc_scaled(2.0 * t, lam)          # sin(2 lam t)/lam
    s1 = _sinc_scaled(t, lam)                # sin(lam t)/lam
    return 1.0 / alpha - (beta / alpha) * (s2 / denom - beta * s1**2 / denom**2)


@dataclass(frozen=True)
class AtomSystem:
    """mu = alpha + sum_j pi*beta_j*delta_{lambda_j} with alpha > 0."""

    alpha: float
    atoms: tuple  # (lambda_j, beta_j)

    def __post_init__(self):
        atoms = tuple((float(l), float(b)) for l, b in self.atoms)
        if self.alpha <= 0:
            raise ValueError("background scale alpha must be positive")
        if any(b <= 0 for _, b in atoms):
            raise ValueError("atom scales beta_j must be positive")
        locs = [l for l, _ in atoms]
        if len(set(locs)) != len(locs):
            raise ValueError("atom locations must be distinct")
        object.__setattr__(self, "atoms", atoms)


def _atoms_quadratic(sys, t):
    # <B (alpha + S_t B)^{-1} L_t, L_t> at one time
    lam = np.array([l for l, _ in sys.atoms])
    beta = np.array([b for _, b in sys.atoms])
    S = _sinc_scaled(t, lam[:, None] - lam[None, :])
    L = np.sqrt(2.0 / np.pi) * _sinc_scaled(t, lam)
    M = sys.alpha * np.eye(len(lam)) + S * beta[None, :]
    try:
        c = np.linalg.solve(M, L)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"alpha + S_t B singular at t = {t}") from exc
    return float((beta * c) @ L)


def atoms_h(sys, t):
    """h for finitely many atoms over a Lebesgue background.

    Solves (alpha + S_t B) C = L_t with S_t[j,k] = sin(t(l_j-l_k))/(l_j-l_k)
    (value t on the diagonal), B = diag(beta_j), L_t = sqrt(2/pi) sinc_t(l_j),
    then

        h(t) = 1/alpha - (pi/(2 alpha)) * d/dt <B (alpha + S_t B)^{-1} L_t, L_t>.

    The derivative is a central difference with one Richardson level.  For a
    single atom this reduces to the two closed forms above.
    """
    e = 1e-5 * (1.0 + abs(t))
    d1 = (_atoms_quadratic(sys, t + e) - _atoms_quadratic(sys, t - e)) / (2 * e)
    d2 = (_atoms_quadratic(sys, t + e / 2) - _atoms_quadratic(sys, t - e / 2)) / e
    deriv = (4.0 * d2 - d1) / 3.0
    return 1.0 / sys.alpha - (np.pi / (2.0 * sys.alpha)) * deriv


def homogeneous_constants(c1, c2):
    """(C1, C2) for the homogeneous density c1 + c2*sign(x).

    C1 = sqrt(pi/2) log((c1+c2)/(c1-c2)) / c2 and
    C2 = log((c1+c2)/(c1-c2)) / sqrt(2 pi); the even case c2 = 0 is the limit
    C1 = sqrt(2 pi)/c1, C2 = 0.
    """
    if not c1 > abs(c2):
        raise ValueError("homogeneous density requires c1 > |c2|")
    if c2 == 0:
        return math.sqrt(2.0 * math.pi) / c1, 0.0
    ratio = math.log1p(2.0 * c2 / (c1 - c2))  # log((c1+c2)/(c1-c2)), stably
    return math.sqrt(math.pi / 2.0) * ratio / c2, ratio / math.sqrt(2.0 * math.pi)


def homogeneous_hamiltonian(c1, c2, C_free=0.0):
    """The log-affine Hamiltonian of a homogeneous measure, for t > 0.

    h11 = C1, g(t) = C_free - C2 log t, and the lower-right entry is kept in
    the source's displayed form (1 - g^2)/C1.  The absolute normalization of
    C1 carries a documented caveat; the periodization cross-check in the
    approximation layer measures the empirical ratio rather than rescaling.
    """
    C1, C2 = homogeneous_constants(c1, c2)

    def g(t):
        return C_free - C2 * np.log(t)

    return HamiltonianFunction(
        h11=lambda t: np.full(np.shape(t), C1),
        g=g,
        h22=lambda t: (1.0 - g(t) ** 2) / C1,
        domain_start=0.0,
        domain_open=True,
        label=f"homogeneous({c1},{c2})",
    )


def bessel_F(nu, x, max_terms=500):
    """The entire function F_nu with J_nu(x) = x^nu F_nu(x).

    Power series with term-ratio truncation at 1e-16; F_nu(0) =
    1/(2^nu Gamma(nu+1)).  Accepts real or complex arguments.
    """
    term = 1.0 / (2.0**nu * math.gamma(nu + 1.0))
    acc = term
    q = -(np.asarray(x, dtype=complex) ** 2) / 4.0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(max_terms):
            term = term * q / ((k + 1.0) * (k + 1.0 + nu))
            acc = acc + term
            if not np.all(np.isfinite(acc)):
                raise SeriesDivergence("F_nu series overflowed before converging")
            if np.all(np.abs(term) <= 1e-16 * np.maximum(np.abs(acc), 1e-300)):
                if np.isrealobj(x):
                    return float(np.real(acc)) if np.ndim(acc) == 0 else np.real(acc)
                return complex(acc) if np.ndim(acc) == 0 else acc
    raise SeriesDivergence(f"F_nu series not converged after {max_terms} terms")


@dataclass(frozen=True)
class BesselSystem:
    """Canonical system with h(t) = t^m: A = g_nu F_{nu-1}(zt),
    C = g_nu t^{2 nu} z F_nu(zt), nu = (m+1)/2, g_nu = 2^{nu-1} Gamma(nu)."""

    m: float
    nu: float = field(init=False)
    g_nu: float = field(init=False)

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("exponent m must be nonnegative")
        nu = (self.m + 1.0) / 2.0
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "g_nu", 2.0 ** (nu - 1.0) * math.gamma(nu))

    def h(self, t):
        return np.asarray(t, dtype=float) ** self.m

    def A(self, t, z):
        return self.g_nu * bessel_F(self.nu - 1.0, z * t)

    def C(self, t, z):
        return self.g_nu * np.asarray(t, dtype=float) ** (2 * self.nu) * z * bessel_F(
            self.nu, z * t
        )


def bessel_system(m):
    """The Bessel canonical system for the power density |x|^m."""
    return BesselSystem(m=m)
