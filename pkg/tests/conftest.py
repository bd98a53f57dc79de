import math
from fractions import Fraction

import pytest

from abcdwaves.families import ParameterSet

F = Fraction


@pytest.fixture(scope="session")
def reference_cases():
    """The published illustration parameter sets, one per family branch."""
    return {
        "s411_a": dict(p=ParameterSet.make(F(-5, 6), 1, F(-5, 6), 1),
                       m=F(3, 4), tau1=1, tau2=1),
        "s411_b": dict(p=ParameterSet.make(-7, 2, F(4, 3), 4),
                       m=F(1, 4), tau1=-1, tau2=1),
        "s412_a": dict(p=ParameterSet.make(1, F(-8, 3), 1, 1),
                       lam=1, sigma=1, m=math.sqrt(0.5), sign="top"),
        "s412_b": dict(p=ParameterSet.make(0, -1, F(-2, 3), 2),
                       lam=F(1, 2), sigma=F(-1, 3), m=F(1, 4), sign="bottom"),
        "s421_a": dict(p=ParameterSet.make(1, -1, 0, F(1, 3)),
                       lam=F(1, 2), sigma=-2, m=F(1, 2)),
        "s421_b": dict(p=ParameterSet.make(0, F(1, 6), 0, F(1, 6)),
                       lam=1, sigma=1, m=F(9, 10)),
        "s422_a": dict(p=ParameterSet.make(F(-11, 3), 2, 0, 2),
                       lam=1, sigma=-1, m=math.sqrt(0.5)),
        "s422_b": dict(p=ParameterSet.make(0, F(-5, 3), 0, 2),
                       lam=2, sigma=F(1, 8), m=F(3, 4)),
        "s43": dict(d=2, lam=2, sigma=F(1, 8), m=F(3, 4)),
    }
