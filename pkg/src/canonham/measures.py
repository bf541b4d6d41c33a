"""Symbolic measures on the line, their periodizations and trigonometric moments.

A measure is described by an absolutely continuous part (one of a few symbolic
density kinds plus a Lebesgue multiple) and a finite list of atoms.  For a
2T-periodic measure the moments are fixed to the convention

    gamma_k = (1/2T) * int_{[-T,T)} e^{-i k pi x / T} dmu(x),

so the T = pi case is the classical Fourier-coefficient normalization on the
circle.  Moments are Hermitian by construction (only k >= 0 is stored) and a
measure is even iff all moments are real.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyPeriod, NegativeDensity
from .quadrature import oscillatory_moments, piecewise_linear_moments

# a sampled density below -NEG_TOL * scale is rejected
NEG_TOL = 1e-9


@dataclass(frozen=True)
class TrigPoly:
    """Density a0 + sum_k (a_k cos(k*omega*x) + b_k sin(k*omega*x))."""

    a: tuple
    b: tuple = ()
    omega: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        if not self.a and not self.b:
            raise ValueError("TrigPoly needs at least one coefficient")
        if self.omega <= 0:
            raise ValueError("TrigPoly base frequency must be positive")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for k, ak in enumerate(self.a):
            out += ak * (np.cos(k * self.omega * x) if k else 1.0)
        for k, bk in enumerate(self.b):
            if k and bk:
                out += bk * np.sin(k * self.omega * x)
        return out


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear density through the knots (x, rho); zero outside."""

    x: tuple
    rho: tuple

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        rho = np.asarray(self.rho, dtype=float)
        if x.ndim != 1 or x.shape != rho.shape or len(x) < 2:
            raise ValueError("Tabulated needs matching 1-d x and rho, len >= 2")
        if np.any(np.diff(x) <= 0):
            raise ValueError("Tabulated grid must be strictly increasing")
        if np.min(rho) < -NEG_TOL * max(1.0, float(np.max(np.abs(rho)))):
            raise NegativeDensity("tabulated density has negative values")
        object.__setattr__(self, "x", tuple(float(v) for v in x))
        object.__setattr__(self, "rho", tuple(float(v) for v in rho))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.interp(t, self.x, self.rho, left=0.0, right=0.0)


@dataclass(frozen=True)
class Homogeneous:
    """Density c1 + c2 on the positive half-line and c1 - c2 on the negative."""

    c1: float
    c2: float

    def __post_init__(self):
        if not self.c1 > abs(self.c2):
            raise ValueError("Homogeneous requires c1 > |c2|")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.c1 + self.c2 * np.sign(x)


@dataclass(frozen=True)
class PowerDensity:
    """Density scale * |x|**m."""

    m: float
    scale: float = 1.0

    def __post_init__(self):
        if self.m <= -1:
            raise ValueError("PowerDensity exponent must exceed -1")
        if self.scale < 0:
            raise NegativeDensity("PowerDensity scale must be nonnegative")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.scale * np.abs(x) ** self.m


@dataclass(frozen=True)
class MeasureSpec:
    """A measure: optional density kind + Lebesgue multiple + finite atoms."""

    density: object = None
    atoms: tuple = ()
    lebesgue_scale: float = 0.0

    def __post_init__(self):
        atoms = tuple((float(loc), float(w)) for loc, w in self.atoms)
        if any(w <= 0 for _, w in atoms):
            raise ValueError("atom weights must be strictly positive")
        locs = [loc for loc, _ in atoms]
        if len(set(locs)) != len(locs):
            raise ValueError("atom locations must be distinct")
        if self.lebesgue_scale < 0:
            raise ValueError("lebesgue_scale must be nonnegative")
        if self.density is not None and not callable(self.density):
            raise TypeError("density must be a density kind or None")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "lebesgue_scale", float(self.lebesgue_scale))

    def ac_density(self, x):
        """Total absolutely continuous density at x (density kind + Lebesgue)."""
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, self.lebesgue_scale)
        if self.density is not None:
            out = out + self.density(x)
        return out

    def scaled(self, c):
        """The measure c * mu, c > 0."""
        if c <= 0:
            raise ValueError("scale factor must be positive")
        d = self.density
        if isinstance(d, TrigPoly):
            d = TrigPoly(tuple(c * v for v in d.a), tuple(c * v for v in d.b), d.omega)
        elif isinstance(d, Tabulated):
            d = Tabulated(d.x, tuple(c * v for v in d.rho))
        elif isinstance(d, Homogeneous):
            d = Homogeneous(c * d.c1, c * d.c2)
        elif isinstance(d, PowerDensity):
            d = PowerDensity(d.m, c * d.scale)
        elif d is not None:
            raise TypeError("cannot scale a custom density kind")
        return MeasureSpec(
            density=d,
            atoms=tuple((loc, c * w) for loc, w in self.atoms),
            lebesgue_scale=c * self.lebesgue_scale,
        )

    def is_even(self):
        """True when the spec is symmetric under x -> -x (exact checks only)."""
        d = self.density
        if isinstance(d, TrigPoly):
            dens_even = all(v == 0 for v in d.b)
        elif isinstance(d, Tabulated):
            xs = np.array(d.x)
            dens_even = np.allclose(d(xs), d(-xs), rtol=0, atol=1e-14)
        elif isinstance(d, Homogeneous):
            dens_even = d.c2 == 0
        elif isinstance(d, PowerDensity) or d is None:
            dens_even = True
        else:
            return False
        weights = dict(self.atoms)
        atoms_even = all(weights.get(-loc) == w for loc, w in self.atoms)
        return dens_even and atoms_even

    def to_json(self):
        d = self.density
        if d is None:
            dd = None
        elif isinstance(d, TrigPoly):
            dd = {"kind": "trigpoly", "a": list(d.a), "b": list(d.b), "omega": d.omega}
        elif isinstance(d, Tabulated):
            dd = {"kind": "tabulated", "x": list(d.x), "rho": list(d.rho)}
        elif isinstance(d, Homogeneous):
            dd = {"kind": "homogeneous", "c1": d.c1, "c2": d.c2}
        elif isinstance(d, PowerDensity):
            dd = {"kind": "power", "m": d.m, "scale": d.scale}
        else:
            raise TypeError("custom density kinds are not serializable")
        return {
            "density": dd,
            "atoms": [[loc, w] for loc, w in self.atoms],
            "lebesgue_scale": self.lebesgue_scale,
        }

    @staticmethod
    def from_json(obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        dd = obj.get("density")
        if dd is None:
            density = None
        else:
            kind = dd.get("kind")
            if kind == "trigpoly":
                density = TrigPoly(
                    tuple(dd.get("a", ())),
                    tuple(dd.get("b", ())),
                    float(dd.get("omega", 1.0)),
                )
            elif kind == "tabulated":
                density = Tabulated(tuple(dd["x"]), tuple(dd["rho"]))
            elif kind == "homogeneous":
                density = Homogeneous(float(dd["c1"]), float(dd["c2"]))
            elif kind == "power":
                density = PowerDensity(float(dd["m"]), float(dd.get("scale", 1.0)))
            else:
                raise ValueError(f"unknown density kind {kind!r}")
        return MeasureSpec(
            density=density,
            atoms=tuple((loc, w) for loc, w in obj.get("atoms", ())),
            lebesgue_scale=float(obj.get("lebesgue_scale", 0.0)),
        )


@dataclass(frozen=True)
class PeriodicMeasure:
    """A MeasureSpec restricted to [-T, T) and understood 2T-periodically."""

    half_period: float
    content: MeasureSpec

    def __post_init__(self):
        if self.half_period <= 0:
            raise ValueError("half_period must be positive")
        T = self.half_period
        for loc, _ in self.content.atoms:
            if not (-T <= loc < T):
                raise ValueError(f"atom at {loc} outside [-T, T) for T = {T}")


@dataclass(frozen=True)
class MomentSequence:
    """Trigonometric moments gamma_0..gamma_N of a 2T-periodic measure."""

    half_period: float
    gamma: np.ndarray = field(repr=False)

    def __post_init__(self):
        g = np.asarray(self.gamma, dtype=complex).copy()
        g.setflags(write=False)
        if g.ndim != 1 or len(g) == 0:
            raise ValueError("gamma must be a nonempty 1-d sequence")
        if not (g[0].real > 0) or abs(g[0].imag) > 1e-12 * g[0].real:
            raise ValueError("gamma_0 must be real and positive")
        object.__setattr__(self, "gamma", g)
        if self.half_period <= 0:
            raise ValueError("half_period must be positive")

    @property
    def order(self):
        return len(self.gamma) - 1

    def gamma_at(self, k):
        """gamma_k for any integer k, Hermitian extension for k < 0."""
        if abs(k) > self.order:
            raise IndexError(f"moment {k} not available (order {self.order})")
        return complex(self.gamma[k]) if k >= 0 else complex(np.conj(self.gamma[-k]))

    def is_even(self, tol=1e-12):
        return bool(np.max(np.abs(self.gamma.imag)) < tol)

    def scaled(self, c):
        if c <= 0:
            raise ValueError("scale factor must be positive")
        return MomentSequence(self.half_period, c * self.gamma)


def periodize(spec, T):
    """Restrict ``spec`` to [-T, T) and declare the result 2T-periodic.

    Atoms at x = -T are kept, atoms at x = T fall outside the fundamental
    domain and are dropped, as are all atoms beyond it.  Densities are
    restricted to the window (their values elsewhere never enter any moment).

    Raises
    ------
    EmptyPeriod
        If the restriction is the zero measure.
    """
    if T <= 0:
        raise ValueError("half-period T must be positive")
    kept = tuple((loc, w) for loc, w in spec.atoms if -T <= loc < T)
    restricted = MeasureSpec(
        density=spec.density, atoms=kept, lebesgue_scale=spec.lebesgue_scale
    )
    if not kept and not _density_nontrivial(restricted, T):
        raise EmptyPeriod(f"measure restricted to [-{T}, {T}) is zero")
    return PeriodicMeasure(half_period=float(T), content=restricted)


def locally_infinite_support(pm):
    """True iff the periodic measure has infinitely many support points per period.

    Finite atom lists alone never qualify; any nontrivial density component
    does.  This is the Paley-Wiener gate for periodic measures.
    """
    return _density_nontrivial(pm.content, pm.half_period)


def _density_nontrivial(spec, T):
    if spec.lebesgue_scale > 0:
        return True
    d = spec.density
    if d is None:
        return False
    if isinstance(d, TrigPoly):
        return any(v != 0 for v in d.a) or any(v != 0 for v in d.b)
    if isinstance(d, Tabulated):
        x = np.asarray(d.x)
        inside = (x >= -T) & (x <= T)
        # knots inside the window, plus interpolated boundary values
        vals = list(np.asarray(d.rho)[inside]) + [d(-T), d(min(T, d.x[-1]))]
        return bool(np.max(np.abs(vals)) > 0)
    if isinstance(d, Homogeneous):
        return True
    if isinstance(d, PowerDensity):
        return d.scale > 0
    probe = d(np.linspace(-T, T, 513))
    return bool(np.max(np.abs(probe)) > 0)


def trig_moments(pm, n_max, tol=1e-11):
    """Trigonometric moments gamma_0..gamma_{n_max} of a periodic measure.

    Closed forms are used for trig-polynomial densities (when the polynomial
    is 2T-periodic), Lebesgue parts, homogeneous densities, and atoms.
    Tabulated densities are integrated exactly as piecewise-linear functions
    against the oscillatory kernel; anything else falls back to adaptive
    Gauss-Legendre quadrature with absolute tolerance ``tol`` per moment.

    Raises
    ------
    NegativeDensity
        If the sampled absolutely continuous density dips below -NEG_TOL.
    QuadratureFailure
        If adaptive refinement cannot reach ``tol``.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    T = pm.half_period
    spec = pm.content
    gamma = np.zeros(n_max + 1, dtype=complex)
    gamma[0] += spec.lebesgue_scale

    d = spec.density
    if isinstance(d, TrigPoly):
        _check_nonnegative(spec, T)
        r = d.omega * T / np.pi
        r_int = round(r)
        if r_int >= 1 and abs(r - r_int) < 1e-12 * max(1.0, r):
            if d.a:
                gamma[0] += d.a[0]
            for k in range(1, max(len(d.a), len(d.b))):
                m = k * r_int
                if m <= n_max:
                    ak = d.a[k] if k < len(d.a) else 0.0
                    bk = d.b[k] if k < len(d.b) else 0.0
                    gamma[m] += 0.5 * (ak - 1j * bk)
        else:
            gamma += _quadrature_moments(d, T, n_max, tol)
    elif isinstance(d, Tabulated):
        lo, hi = max(-T, d.x[0]), min(T, d.x[-1])
        if lo < hi:
            knots = [lo] + [x for x in d.x if lo < x < hi] + [hi]
            vals = d(np.array(knots))
            omegas = np.arange(n_max + 1) * np.pi / T
            gamma += piecewise_linear_moments(knots, vals, omegas) / (2 * T)
    elif isinstance(d, Homogeneous):
        gamma[0] += d.c1
        odd = np.arange(1, n_max + 1, 2)
        gamma[odd] += -2j * d.c2 / (odd * np.pi)
    elif isinstance(d, PowerDensity):
        if d.scale > 0:
            omegas = np.arange(n_max + 1) * np.pi / T
            half = oscillatory_moments(lambda x: x**d.m, 0.0, T, omegas, tol=tol)
            gamma += d.scale * 2.0 * half.real / (2 * T)
    elif d is not None:
        _check_nonnegative(spec, T)
        gamma += _quadrature_moments(d, T, n_max, tol)

    if spec.atoms:
        locs = np.array([loc for loc, _ in spec.atoms])
        ws = np.array([w for _, w in spec.atoms])
        k = np.arange(n_max + 1)
        gamma += np.exp(-1j * np.outer(k, locs) * np.pi / T) @ ws / (2 * T)

    return MomentSequence(half_period=T, gamma=gamma)


def _quadrature_moments(density, T, n_max, tol):
    omegas = np.arange(n_max + 1) * np.pi / T
    return oscillatory_moments(density, -T, T, omegas, tol=tol) / (2 * T)


def _check_nonnegative(spec, T):
    x = np.linspace(-T, T, 4097)
    vals = spec.ac_density(x)
    scale = max(1.0, float(np.max(np.abs(vals))))
    if float(np.min(vals)) < -NEG_TOL * scale:
        raise NegativeDensity(
            f"density sampled below -{NEG_TOL:g} on [-T, T) (min {np.min(vals):.3e})"
        )
