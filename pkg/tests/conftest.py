import pytest

import symforms as sf


@pytest.fixture(scope="session")
def gf2():
    return sf.make_field(2)


@pytest.fixture(scope="session")
def gf3():
    return sf.make_field(3)


@pytest.fixture(scope="session")
def gf4():
    return sf.make_field(2, 2)


@pytest.fixture(scope="session")
def gf5():
    return sf.make_field(5)


@pytest.fixture(scope="session")
def gf8():
    return sf.make_field(2, 3)


@pytest.fixture(scope="session")
def gf9():
    return sf.make_field(3, 2)


@pytest.fixture(scope="session")
def theorem6_space(gf4):
    """The 9-dimensional two-rank space on GF(4)^6; reused because the
    full enumeration is the priciest fixture in the suite."""
    return sf.trace_form_space(gf4, 3)


@pytest.fixture(scope="session")
def theorem6_ku(theorem6_space):
    return sf.kernel_at_point(theorem6_space, [1, 0, 0, 0, 0, 0])


def form(field, rows):
    return sf.SymForm.from_rows(field, rows)
