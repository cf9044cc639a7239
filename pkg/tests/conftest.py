import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from trcycles import compute_omega_table, validate_local_curve

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def airy_curve():
    return validate_local_curve([("1", 2, {3: 1})])


@pytest.fixture(scope="session")
def airy_table(airy_curve):
    return compute_omega_table(airy_curve, 4)


@pytest.fixture(scope="session")
def two_point_curve():
    return validate_local_curve([
        ("1", 2, {3: 2, 5: Fraction(1, 3)}),
        ("-1", 2, {3: 2}),
    ])


@pytest.fixture(scope="session")
def two_point_table(two_point_curve):
    return compute_omega_table(two_point_curve, 4)


@pytest.fixture(scope="session")
def r3_curve():
    return validate_local_curve([("0", 3, {4: 1})])


@pytest.fixture(scope="session")
def r3_table(r3_curve):
    return compute_omega_table(r3_curve, 4)


@pytest.fixture(scope="session")
def r3_mixed_curve():
    return validate_local_curve([("0", 3, {4: 1, 5: Fraction(1, 2)})])


@pytest.fixture(scope="session")
def r3_mixed_table(r3_mixed_curve):
    return compute_omega_table(r3_mixed_curve, 3)
