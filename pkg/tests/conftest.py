import numpy as np
import pytest

from canonham import (
    MeasureSpec,
    MomentSequence,
    TrigPoly,
    moments_from_verblunsky,
    periodize,
    trig_moments,
    VerblunskySeq,
)


@pytest.fixture(scope="session", autouse=True)
def convention_self_test():
    """Pin the operational sign conventions before anything else runs.

    The polynomial-route conventions are defined as whichever reproduce the
    Toeplitz route on (1+cos x)dx: alpha_0 = 1/2 and matching first steps.
    """
    from canonham import h_via_opuc, recover_h, verblunsky_from_moments

    m = trig_moments(periodize(MeasureSpec(density=TrigPoly(a=(1.0, 1.0))), np.pi), 5)
    assert verblunsky_from_moments(m).alpha[0] == pytest.approx(0.5, rel=1e-12)
    assert np.allclose(h_via_opuc(m, 4), recover_h(m, 4), rtol=1e-12)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_pd_moments(rng, order, complex_ok=True, max_mag=0.85):
    """Random positive-definite moment sequence via reflection coefficients.

    Decaying magnitudes keep the sequence well-conditioned at high order.
    """
    mags = max_mag * rng.uniform(0.05, 1.0, order) / (1.0 + 0.08 * np.arange(order))
    if complex_ok:
        phases = rng.uniform(0, 2 * np.pi, order)
        alpha = mags * np.exp(1j * phases)
    else:
        alpha = mags * rng.choice([-1.0, 1.0], order)
    gamma0 = float(rng.uniform(0.2, 5.0))
    v = VerblunskySeq(gamma0=gamma0, alpha=alpha)
    return moments_from_verblunsky(v, order)


def measure_pd_moments(rng, order):
    """PD moments generated from an actual random measure (independent of the
    reflection-coefficient machinery): small trig-polynomial density plus a
    few atoms."""
    K = int(rng.integers(1, 4))
    a = np.zeros(K + 1)
    b = np.zeros(K + 1)
    a[1:] = rng.uniform(-0.3, 0.3, K)
    b[1:] = rng.uniform(-0.3, 0.3, K)
    a[0] = 1.0 + np.sum(np.abs(a[1:])) + np.sum(np.abs(b[1:]))
    atoms = []
    for _ in range(int(rng.integers(0, 3))):
        atoms.append((float(rng.uniform(-np.pi, np.pi - 1e-6)),
                      float(rng.uniform(0.1, 1.0))))
    spec = MeasureSpec(density=TrigPoly(a=tuple(a), b=tuple(b)), atoms=tuple(atoms))
    return trig_moments(periodize(spec, np.pi), order)


def moments_1pcos(n):
    return trig_moments(
        periodize(MeasureSpec(density=TrigPoly(a=(1.0, 1.0))), np.pi), n
    )


def moments_1mcos(n):
    return trig_moments(
        periodize(MeasureSpec(density=TrigPoly(a=(1.0, -1.0))), np.pi), n
    )


def moments_1psin(n):
    return trig_moments(
        periodize(MeasureSpec(density=TrigPoly(a=(1.0,), b=(0.0, 1.0))), np.pi), n
    )


def moments_1msin(n):
    return trig_moments(
        periodize(MeasureSpec(density=TrigPoly(a=(1.0,), b=(0.0, -1.0))), np.pi), n
    )
