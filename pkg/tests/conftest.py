"""Shared test fixtures for the popuc test suite.

The _isolate_popuc_config fixture (autouse) prevents PopucConfig from reading
the user's real ~/.popuc/config.json during tests, and keeps the CLI from
writing log files into the user's home directory.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from popuc.config.schema import PopucConfig


@pytest.fixture(autouse=True)
def _isolate_popuc_config(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    """Point PopucConfig's json_file at an empty temp file for every test."""
    empty_config = tmp_path / "popuc_test_config.json"
    empty_config.write_text("{}", encoding="utf-8")
    monkeypatch.setitem(PopucConfig.model_config, "json_file", empty_config)
    monkeypatch.setattr(
        "popuc.config.loader._DEFAULT_CONFIG_FILE", tmp_path / "home" / "config.json"
    )
    monkeypatch.setenv("POPUC_LOGGING__FILE_LOGGING", "false")


def random_circle_points(
    rng: np.random.Generator, n: int, min_gap: float = 0.05
) -> np.ndarray:
    """n points on the unit circle with pairwise angular gaps of at least min_gap."""
    while True:
        theta = np.sort(rng.uniform(0.0, 2.0 * np.pi, n))
        gaps = np.diff(np.concatenate([theta, [theta[0] + 2.0 * np.pi]]))
        if gaps.min() >= min_gap:
            return np.exp(1j * theta)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def circle_points():
    return random_circle_points


@pytest.fixture
def points_file(tmp_path: Path) -> Path:
    """Five well separated points on the circle, written as [[re, im], ...]."""
    theta = np.array([0.3, 1.4, 2.2, 3.9, 5.1])
    pairs = [[float(np.cos(t)), float(np.sin(t))] for t in theta]
    path = tmp_path / "points.json"
    path.write_text(json.dumps(pairs), encoding="utf-8")
    return path
