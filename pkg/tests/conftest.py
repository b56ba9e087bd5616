import numpy as np
import pytest

from fieldtopo.conditions import locate_limit_cycle
from fieldtopo.fieldlang import parse_field, parse_scalar
from fieldtopo.levelset import extract_level_set

VDP_SOURCE = "x2, (1 - x1^2)*x2 - x1"
TORUS_V_SOURCE = "(sqrt(x1^2 + x2^2) - 1)^2 + x3^2"


@pytest.fixture(scope="session")
def vdp_field():
    return parse_field(VDP_SOURCE, 2)


@pytest.fixture(scope="session")
def vdp_cycle(vdp_field):
    return locate_limit_cycle(vdp_field, [2.0, 0.0])


@pytest.fixture(scope="session")
def torus_level_mesh():
    V = parse_scalar(TORUS_V_SOURCE, 3)
    box = [[-1.6, 1.6], [-1.6, 1.6], [-0.6, 0.6]]
    return V, extract_level_set(V, 0.04, box, 24)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260809)
