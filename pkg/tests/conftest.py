"""Shared fixtures and the acceptance-line reporter.

The acceptance suite appends one PASS/FAIL line per criterion to
ACCEPTANCE_LINES; the terminal-summary hook prints them as a block at the
end of the run so the verdict table survives pytest's output capture.
"""
import numpy as np
import pytest

import torusfront as tf

ACCEPTANCE_LINES: list[str] = []

SEED = 20260822


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture(scope="session")
def base_window():
    """The reference scan window used throughout: plateau 0.05, support 0.25."""
    return tf.bump_window((0.5,), 0.05, 0.25)


@pytest.fixture(scope="session")
def edge_windowed_256():
    """Windowed 2-D edge coefficients at the on-edge probe (expensive; shared)."""
    edge = tf.TestDistribution(kind="halfplane_edge_2d", location=(0.5, 0.5), direction=(1.0, 0.0))
    w = tf.bump_window((0.5, 0.5), 0.05, 0.25)
    return tf.analytic_coeffs(edge, w, 256)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
