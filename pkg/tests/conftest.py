import pytest

from sixbox.model import BoxModel, uniform_prior


@pytest.fixture
def model():
    return BoxModel()


@pytest.fixture
def uniform(model):
    return uniform_prior(model)
