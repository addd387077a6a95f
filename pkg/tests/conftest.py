import pathlib

import pytest

from cubical_sc import load_presentation

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"


def corpus(name):
    return load_presentation(CORPUS / f"{name}.scp")


@pytest.fixture(scope="session")
def surf2():
    return corpus("surf2")


@pytest.fixture(scope="session")
def surf3():
    return corpus("surf3")


@pytest.fixture(scope="session")
def torus():
    return corpus("torus")


@pytest.fixture(scope="session")
def free():
    return corpus("free")


@pytest.fixture(scope="session")
def torus_squares():
    return corpus("torus_squares")


@pytest.fixture(scope="session")
def torus_cone():
    return corpus("torus_square_cone")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
