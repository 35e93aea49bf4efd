import math

import numpy as np
import pytest
from hypothesis import strategies as st

from hom_twinbeam.spectral import GaussianSourceParams, SpectralAmplitude, default_grid, gaussian_from_width

ACCEPTANCE_LINES = []


def gaussian_source(delta, peak_r, count=2049, theta=None):
    flux = peak_r**2 * delta / math.sqrt(2 * math.pi)
    src = gaussian_from_width(delta, flux, grid=default_grid(delta, count))
    if theta is not None:
        src = SpectralAmplitude(src.grid, src.r, theta(src.detunings / delta))
    return src


@st.composite
def gaussian_sources(draw, peak_r=(0.01, 0.8), chirp=False, count=1025):
    delta = draw(st.floats(0.05, 0.5))
    r0 = draw(st.floats(*peak_r))
    theta = None
    if chirp:
        a, b, c = draw(st.floats(-2, 2)), draw(st.floats(-1, 1)), draw(st.floats(0, 2 * math.pi))
        theta = lambda x: a * x + b * x**2 + c  # noqa: E731
    return gaussian_source(delta, r0, count, theta)


@pytest.fixture(scope="session")
def reference_params():
    return GaussianSourceParams(1550.0, 0.5, 0.007)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
