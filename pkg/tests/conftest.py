import math

import numpy as np
import pytest

from latgeo.core import GramMatrix, as_gram

HEX_SYSTOLE_SQ = 2.0 / math.sqrt(3.0)


@pytest.fixture
def hex_gram():
    a = HEX_SYSTOLE_SQ
    return GramMatrix([[a, a / 2.0], [a / 2.0, a]])


@pytest.fixture
def product_square_hex(hex_gram):
    q = np.zeros((4, 4))
    q[:2, :2] = np.eye(2)
    q[2:, 2:] = hex_gram.entries
    return as_gram(q)
