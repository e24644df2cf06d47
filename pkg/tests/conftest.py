import functools

import pytest

from wavedrift import VorticitySpec, WaveParameters, continue_branch, derive_frame, find_bifurcation

G = 9.81
P0 = -1.0

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def branch(coeffs=(), nq=128, np_=64, frac=0.01, step=0.005):
    """Branch from the bifurcation point to a = frac * d (d = bifurcation depth)."""
    gamma = VorticitySpec(coeffs, -P0)
    params = WaveParameters(g=G, p0=P0, nq=nq, np_=np_)
    bif = find_bifurcation(gamma, P0, G, np_=np_)
    return continue_branch(gamma, params, frac * bif.depth, step * bif.depth, bifurcation=bif)


@functools.lru_cache(maxsize=None)
def wave(coeffs=(), nq=128, np_=64):
    sol = branch(coeffs, nq, np_).last
    return sol, derive_frame(sol)


@pytest.fixture(scope="session")
def irrot():
    return wave(())


@pytest.fixture(scope="session")
def shear():
    return wave((-0.1,))


def record(line):
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
