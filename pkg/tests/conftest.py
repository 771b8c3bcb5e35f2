import math

import pytest

from weilneg.special_fn import QuadratureSpec
from weilneg.test_fn import FejerTestFunction


@pytest.fixture
def tf():
    return FejerTestFunction()


@pytest.fixture
def spec():
    return QuadratureSpec(tolerance=1e-8)


@pytest.fixture
def kappa2():
    return (1 - math.log(2)) / (math.pi * math.sqrt(2))
