import numpy as np
import pytest
from hypothesis import strategies as st

from cvrep.gaussian import GaussianState, omega


# Hypothesis building blocks shared across test modules.

finite_floats = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)
small_gains = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)
squeeze_params = st.floats(min_value=-1.5, max_value=1.5, allow_nan=False)
nonzero_factors = st.floats(min_value=0.2, max_value=4.0).flatmap(
    lambda m: st.sampled_from([m, -m])
)


def random_gaussian_state(rng: np.random.Generator, n_modes: int) -> GaussianState:
    """A generic valid Gaussian state: random symplectic-ish squeeze/rotate mix."""
    from cvrep import gaussian as g

    state = g.vacuum(n_modes)
    for mode in range(n_modes):
        state = g.squeeze(state, mode, float(rng.uniform(-0.8, 0.8)))
        state = g.phase_shift(state, mode, float(rng.uniform(0, 2 * np.pi)))
        state = g.displace(state, mode, complex(rng.normal(), rng.normal()))
    for _ in range(n_modes):
        a, b = rng.choice(n_modes, size=2, replace=False)
        state = g.qnd(state, int(a), int(b), float(rng.uniform(-1, 1)))
    return state


def assert_valid_state(state: GaussianState):
    n = state.n_modes
    np.testing.assert_allclose(state.cov, state.cov.T, atol=1e-12)
    J = omega(n)
    eigs = np.linalg.eigvals(state.cov + 0.5j * J)
    assert np.min(eigs.real) >= -1e-9


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)
