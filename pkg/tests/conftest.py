"""Shared fixtures: the fibre designs exercised throughout the suite."""

import warnings

import pytest

from pcffwm.pcf import DispersionModel, FibreGeometry

# One line per acceptance criterion, echoed at the end of the run.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def model_fig1():
    """Design with a 794 nm-class ZDW (pitch 1.39 um, d/pitch 0.55)."""
    return DispersionModel(FibreGeometry(1.39, 0.55))


@pytest.fixture(scope="session")
def model_sym():
    """Symmetric broadband design (pitch 1.78 um, d/pitch 0.437)."""
    return DispersionModel(FibreGeometry(1.78, 0.437))


@pytest.fixture(scope="session")
def model_typ():
    """Typical narrowband design (pitch 2.35 um, d/pitch 0.5)."""
    return DispersionModel(FibreGeometry(2.35, 0.5))


@pytest.fixture(autouse=True)
def _quiet_multi_root_warning():
    """These designs have a genuine second long-wavelength ZDW; the
    multi-root warning is asserted explicitly in one dedicated test."""
    with warnings.catch_warnings():
        warnings.filterwarnings(
            "ignore", message=".*zero-dispersion roots in window.*"
        )
        yield
