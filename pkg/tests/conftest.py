import numpy as np
import pytest

from app.analysis import diagonal_operator, jordan_block, random_tr
from app.utils import NumericContext


@pytest.fixture(autouse=True)
def numeric_context():
    """
    Run every test with the smallest sweep grid and a short power scan,
    and put the defaults back afterwards.
    """
    NumericContext.override(grid=64, n_max=2000)
    yield NumericContext.get()
    NumericContext.finalize()


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20_240_601)


@pytest.fixture(scope="session")
def diag_example():
    return diagonal_operator([0.9, 0.5])


@pytest.fixture(scope="session")
def jordan_example():
    return jordan_block(0.5, 4)


@pytest.fixture(scope="session")
def random_example():
    return random_tr(8, np.pi / 4, 20.0, seed=3)
