import pytest
from hypothesis import settings

from prodrep.ff import Field

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SMALL_Q = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49)


@pytest.fixture(scope="session")
def fields():
    from prodrep.acceptance import field_of

    return {q: field_of(q) for q in SMALL_Q}


@pytest.fixture(scope="session")
def F7():
    return Field(7)
