import pytest

from nextpage import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile the active kernels up front so timed tests measure work,
    # not jit compilation
    _kernels.warmup()
