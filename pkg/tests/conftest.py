"""
Shared fixtures: the seeded corpus of small algebras used across the suite.
"""

import itertools
import random
import sys
from pathlib import Path

import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.algebra.fpalg import make_algebra  # noqa: E402

CORPUS_DIR = project_root / "tests" / "corpus"


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False, help="also run tests marked slow")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: multi-second Groebner computations, run with --run-slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def cusp():
    """k[w,x]/(x^2 - w^3) with ideal of definition (w)."""
    return make_algebra(["w", "x"], ["x^2 - w^3"], name="A")


@pytest.fixture
def plane():
    """k[w,x] with ideal of definition (w, x)."""
    return make_algebra(["w", "x"], [], ["w", "x"], name="P")


@pytest.fixture
def line():
    """k[w,x] with the w-adic topology."""
    return make_algebra(["w", "x"], name="L")


@pytest.fixture
def node():
    """k[w,u]/(u^2 - w^2), not normal: u/w is integral."""
    return make_algebra(["w", "u"], ["u^2 - w^2"], name="N")


@pytest.fixture
def crossing():
    """k[w,x]/(x^2 - w*x): the blow-up in (x, x - w) has disjoint charts."""
    return make_algebra(["w", "x"], ["x^2 - w*x"], name="C")


@pytest.fixture
def space():
    """k[w,x,y] with the w-adic topology."""
    return make_algebra(["w", "x", "y"], name="S")


@pytest.fixture
def corpus_files():
    return sorted(CORPUS_DIR.glob("*.session"))


# (variables, relations, blow-up ideal) pairs checked chart by chart
BLOWUP_CORPUS = [
    (["w", "x"], ["x^2 - w^3"], ["x", "w"]),
    (["w", "x"], [], ["x", "w"]),
    (["w", "x"], [], ["x^2", "w"]),
    (["w", "x"], ["x^2 - w*x"], ["x", "w"]),
    (["w", "u"], ["u^2 - w^2"], ["u", "w"]),
    (["w", "x"], ["x^3 - w^4"], ["x", "w"]),
    (["w", "x", "y"], [], ["x", "y", "w"]),
    (["w", "x", "y"], ["x*y - w"], ["x", "w"]),
    (["w", "x", "y"], [], ["x*y", "w"]),
    (["w", "x"], ["x^2 - w^3"], ["x", "w^2"]),
]


def random_elements(variables, count, seed, max_degree=3):
    """`count` random polynomials of degree <= max_degree with small integer coefficients."""
    rng = random.Random(seed)
    exponents = [m for m in itertools.product(range(max_degree + 1), repeat=len(variables)) if sum(m) <= max_degree]
    elements = []
    for _ in range(count):
        terms = []
        for m in rng.sample(exponents, 3):
            factors = [str(rng.choice([-3, -2, -1, 1, 2, 3]))]
            factors += [f"{name}^{k}" for name, k in zip(variables, m) if k]
            terms.append("*".join(factors))
        elements.append(" + ".join(terms))
    return elements
