import numpy as np
import pytest

from rootreg.tracking import an_distance


def multiset_close(a, b, tol):
    """Distance between unordered tuples in the permutation-minimizing metric."""
    return an_distance(np.asarray(a), np.asarray(b)) <= tol


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)
