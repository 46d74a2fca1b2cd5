import pytest

from cmbayes import validate_cm


@pytest.fixture
def small_cm():
    """34-sample matrix with a strong positive class and a weak negative one."""
    return validate_cm(26, 0, 2, 6)


@pytest.fixture
def single_obs_cm():
    """The most extreme small-sample case: one correct positive prediction."""
    return validate_cm(1, 0, 0, 0)
