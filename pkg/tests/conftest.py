import random
import sys

import pytest

from cubicsep.polynomial import IntPolynomial


def random_cubic(rng: random.Random, bound: int) -> IntPolynomial:
    while True:
        cs = [rng.randint(-bound, bound) for _ in range(4)]
        if cs[3] != 0:
            return IntPolynomial(tuple(cs))


@pytest.fixture
def rng():
    return random.Random(20240601)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
