import math

import pytest
from hypothesis import settings

from infogain import validate_problem
from infogain.instances import SUBCASE_INSTANCES

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

INSTANCE_PARAMS = [pytest.param(sub, args, id=f"{sub}-{i}")
                   for sub, rows in SUBCASE_INSTANCES.items() for i, args in enumerate(rows)]

SQRT02 = math.sqrt(0.2)


@pytest.fixture
def b3_problem():
    return validate_problem(-1.0, 0.2, 0.05, 0.0, 5.0)
