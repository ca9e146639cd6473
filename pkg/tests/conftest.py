import hypothesis
from hypothesis import strategies as st

from ultrapreserve.generators import random_ultrametric

hypothesis.settings.register_profile(
    "det", derandomize=True, deadline=None, max_examples=60
)
hypothesis.settings.load_profile("det")


@st.composite
def ultrametric_spaces(draw, min_points=1, max_points=8):
    """Random dendrogram-based ultrametric spaces, keyed by (n, seed)."""
    n = draw(st.integers(min_points, max_points))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_ultrametric(n, seed)
