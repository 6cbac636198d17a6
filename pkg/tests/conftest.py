import pytest

from hystlab import baseline_params


@pytest.fixture(scope="session")
def params():
    return baseline_params()


@pytest.fixture(scope="session")
def portrait(params):
    from hystlab import stable_manifold
    return stable_manifold(params)


@pytest.fixture(scope="session")
def golden_profile(params):
    from hystlab import stationary as st
    return st.solve_for_gamma(3.7331132, 1.0 / 0.100044, params)[0]
