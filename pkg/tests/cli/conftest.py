"""Fixtures for CLI tests."""

from __future__ import annotations

import pytest
from loguru import logger
from typer.testing import CliRunner


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture(autouse=True)
def _drop_log_sinks():
    """The CLI callback binds a sink to the runner's stderr; remove it once the test ends."""
    yield
    logger.remove()
