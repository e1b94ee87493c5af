"""
Shared fixtures for all test modules.

Settings are cached per process, so every test that changes the environment goes through
`fresh_settings`, which clears the cache before and after the test.
"""
import logging

import pytest
from click.testing import CliRunner

from besselturan.utils.config import get_settings
from besselturan.utils.grids import linear_grid, log_grid


@pytest.fixture
def fresh_settings():
    """Clear the cached Settings around a test."""
    get_settings.cache_clear()
    yield get_settings
    get_settings.cache_clear()


@pytest.fixture
def small_nu_grid():
    """A coarse order grid across (-1, 20]."""
    return [-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.5, 7.0, 12.0, 20.0]


@pytest.fixture
def small_u_grid():
    """Two points per decade across [1e-3, 500]."""
    return log_grid(1e-3, 500.0, 2)


@pytest.fixture
def quarter_grid():
    """Orders 0.25, 0.5, ..., 5."""
    return linear_grid(0.25, 5.0, 0.25)


@pytest.fixture
def cli_runner():
    """A click test runner; the CLI's stderr log handler is detached afterwards."""
    yield CliRunner()
    package_logger = logging.getLogger("besselturan")
    for handler in list(package_logger.handlers):
        package_logger.removeHandler(handler)
