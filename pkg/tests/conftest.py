from pathlib import Path

import pytest

from dehntwist.category import load_category
from dehntwist.twistcomplex import TwistTower

ROOT = Path(__file__).resolve().parent.parent
CATEGORIES = ROOT / "categories"
FIXTURES = Path(__file__).resolve().parent / "fixtures"


def category_path(name: str) -> Path:
    return CATEGORIES / f"{name}.afc"


@pytest.fixture(scope="session")
def sphere2():
    return load_category(category_path("sphere2"))


@pytest.fixture(scope="session")
def a2chain():
    return load_category(category_path("a2chain"))


@pytest.fixture(scope="session")
def a3chain():
    return load_category(category_path("a3chain"))


@pytest.fixture(scope="session")
def tower_sphere(sphere2):
    return TwistTower(sphere2, ["L"])


@pytest.fixture(scope="session")
def tower_a2(a2chain):
    return TwistTower(a2chain, ["L1", "L2"])


@pytest.fixture(scope="session")
def tower_a2_n1(a2chain):
    return TwistTower(a2chain, ["L1"])


@pytest.fixture(scope="session")
def tower_a3(a3chain):
    return TwistTower(a3chain, ["L1", "L2", "L3"], check_bound=3)
