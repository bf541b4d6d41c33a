"""canonham: spectral problems for 2x2 canonical Hamiltonian systems.

Inverse problems (periodic spectral measure -> step Hamiltonian) run through
two independent routes, Toeplitz summed-inverse functionals and orthogonal
polynomials on the unit circle; the direct problem (diagonal step Hamiltonian
-> moments) inverts the reflection-coefficient recursion.  Closed forms from
the analytic theory serve as oracles, and a periodization layer approximates
Hamiltonians of non-periodic measures.
"""

from .approx import (
    ConvergenceReport,
    convergence_sweep,
    declared_h11,
    dirac_direct_spectrum,
    dirac_step_hamiltonian,
    inverse_via_periodization,
)
from .closedforms import (
    AtomSystem,
    HamiltonianFunction,
    atom_at_lambda_h,
    atoms_h,
    bessel_F,
    bessel_system,
    homogeneous_constants,
    homogeneous_hamiltonian,
    pointmass_h,
    pointmass_hamiltonian,
    winkler_fn,
    winkler_h,
)
from .errors import (
    BreakdownAtOrder,
    CanonhamError,
    DegenerateRatio,
    DomainError,
    EmptyPeriod,
    InsufficientMoments,
    LengthMismatch,
    NegativeDensity,
    NonDiagonalHamiltonian,
    NonRealResult,
    NotPositiveDefinite,
    PartialResultWarning,
    QuadratureFailure,
    SeriesDivergence,
    SingularSystem,
)
from .inverse import StepHamiltonian, assemble, recover_g, recover_h, recover_hamiltonian
from .kernels import backend_name
from .measures import (
    Homogeneous,
    MeasureSpec,
    MomentSequence,
    PeriodicMeasure,
    PowerDensity,
    Tabulated,
    TrigPoly,
    locally_infinite_support,
    periodize,
    trig_moments,
)
from .opuc import (
    OrthoPolyEval,
    VerblunskySeq,
    direct_moments,
    dual_verblunsky,
    g_via_opuc,
    h_via_opuc,
    moments_from_verblunsky,
    phi_at,
    verblunsky_from_hamiltonian,
    verblunsky_from_moments,
)
from .svg import render_svg
from .toeplitz import (
    DeltaMatrix,
    GammaMatrix,
    LevinsonResult,
    build_delta,
    build_gamma,
    levinson_solve_ones,
    sum_delta_inverse,
    sum_inverse,
)

__version__ = "0.1.0"
