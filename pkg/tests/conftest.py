import random

import pytest

from invclosed.field import GF

SMALL_FIELDS = [(2, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (2, 5), (7, 2), (2, 6)]


@pytest.fixture(params=SMALL_FIELDS, ids=lambda pf: f"GF({pf[0]}^{pf[1]})")
def small_field(request):
    return GF(*request.param)


@pytest.fixture
def rng():
    return random.Random(20061019)
