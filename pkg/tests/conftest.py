import math

import pytest

from spinotto import ChainParams, critical_coupling_cached

P_VALUES = (1.0, 2.0, 3.0, math.inf)


@pytest.fixture(scope="session")
def gc_n10():
    """Critical couplings at N=10 (open chain), one grid scan per exponent."""
    return {
        p: critical_coupling_cached(ChainParams(10, p, 0.0)) for p in P_VALUES
    }


@pytest.fixture(scope="session")
def gc_n10_periodic():
    return {
        p: critical_coupling_cached(ChainParams(10, p, 0.0, boundary="periodic"))
        for p in P_VALUES
    }


@pytest.fixture(scope="session")
def gc_n8():
    return critical_coupling_cached(ChainParams(8, math.inf, 0.0))
