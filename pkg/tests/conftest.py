import pytest
from helpers.metric import make_instance, metric_from_matrix
from strategies import Z2, far_pairs


@pytest.fixture
def z2_four_points():
    return make_instance(far_pairs(4), Z2, [(1,), (1,), (1,), (1,)])


@pytest.fixture
def triangle_metric():
    # d(0,1) = 2, d(0,2) = 1, d(1,2) = 2
    return metric_from_matrix([[0, 2, 1], [2, 0, 2], [1, 2, 0]])
