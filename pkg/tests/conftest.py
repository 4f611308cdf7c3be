import numpy as np
import pytest
from hypothesis import settings, strategies as st

from carnot_cut.algebra import GroupPoint
from carnot_cut.geodesics import ExtremalParams

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

coord = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)
vec3 = st.tuples(coord, coord, coord).map(np.array)
points = st.builds(GroupPoint, vec3, vec3)


@st.composite
def rotations(draw):
    q = np.array(draw(st.tuples(*[st.floats(-1, 1)] * 4)))
    n = np.linalg.norm(q)
    if n < 1e-3:
        return np.eye(3)
    w, x, y, z = q / n
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


@st.composite
def admissible_params(draw, phi_min=0.05, phi_max=4.0, mu_max=3.0):
    """Admissible (a, b, z, phi) in a random orthonormal frame."""
    M = draw(rotations())
    na = draw(st.floats(0.2, 2.0))
    mu = draw(st.floats(0.0, mu_max))
    phi = draw(st.floats(phi_min, phi_max))
    return ExtremalParams.from_vectors(na * M[:, 0], na * M[:, 1], mu * na * M[:, 2], phi)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)
