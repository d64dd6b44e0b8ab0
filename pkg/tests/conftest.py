import pytest

from growth_forge import bzfn, holefn, langgrowth


@pytest.fixture(scope="session")
def bz_13():
    return bzfn.BZSchedule((3, 13))


@pytest.fixture(scope="session")
def bz_13_fn(bz_13):
    """Materialized table to 24576: covers the generic sweeps to 16384 and
    the stage-1 condition probe, which reads up to 2N + 2m = 24576."""
    return bzfn.growth_fn(bz_13, 24576)


@pytest.fixture(scope="session")
def default_hole():
    return holefn.HoleFn(holefn.default_schedule())


@pytest.fixture(scope="session")
def lang_family():
    """All reduced forbidden sets over two letters, <= 2 words of length <= 3."""
    return langgrowth.enumerate_reduced_specs(2, 2, 3)
