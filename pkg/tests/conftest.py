import pytest

from weighwright.core import Semantics
from weighwright.strategies import packaged_tree


@pytest.fixture(scope="session")
def alg1_sort():
    return packaged_tree("alg1", semantics=Semantics.SORT_CLASSES)


@pytest.fixture(scope="session")
def alg1_exact():
    return packaged_tree("alg1", semantics=Semantics.EXACT)
