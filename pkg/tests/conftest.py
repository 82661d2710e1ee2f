import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from sqalg import ContextBuilder

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def spinless_ctx(n_orbitals=4):
    b = ContextBuilder()
    b.fermion("c")
    b.boson("a")
    b.majorana("g")
    b.declare_param("eps")
    b.declare_param("t")
    b.declare_param("V", "complex")
    b.declare_param("z", "grassmann-constant")
    b.orbitals([("c", (i,)) for i in range(1, n_orbitals + 1)])
    return b.freeze()


def spinful_ctx(n_sites=2, *params):
    b = ContextBuilder()
    b.fermion("c", spin=Fraction(1, 2))
    for p in ("t", "U", "J", "B") + params:
        b.declare_param(p)
    b.sites([("c", i) for i in range(1, n_sites + 1)])
    return b.freeze()


def fermisea_ctx():
    b = ContextBuilder()
    b.fermion("d", vacuum="fermi-sea")
    b.orbitals([("d", (k,)) for k in (-2, -1, 1, 2)])
    return b.freeze()


@pytest.fixture
def ctx():
    return spinless_ctx()


@pytest.fixture
def sctx():
    return spinful_ctx()


@pytest.fixture
def fctx():
    return fermisea_ctx()


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line[1])
