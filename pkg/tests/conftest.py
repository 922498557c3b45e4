from fractions import Fraction as F

import pytest

from graphchaos import corpus
from graphchaos.chaos_stats import GraphSystem
from graphchaos.entropy_horseshoe import detect_horseshoe


@pytest.fixture(scope="session")
def maps():
    return {e.name: e.map for e in corpus.builtin_corpus()}


@pytest.fixture(scope="session")
def tent():
    return corpus.tent()


@pytest.fixture(scope="session")
def tent_cert(tent):
    return detect_horseshoe(tent, 6)


@pytest.fixture(scope="session")
def tent_system(tent):
    return GraphSystem(tent)


def frac(p, q=1):
    return F(p, q)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
