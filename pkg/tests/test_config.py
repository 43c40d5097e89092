"""
Unit tests for settings.
"""
import configparser
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from unittest.mock import patch

import pytest

from latcirc.core.config import Settings

ROOT = Path(__file__).resolve().parent.parent


class TestSettings:
    """Test cases for Settings."""

    def test_defaults(self, test_settings):
        """Test the documented defaults."""
        assert test_settings.ENUMERATION_CAP_QUBIT == 24
        assert test_settings.ENUMERATION_CAP_QUTRIT == 15
        assert test_settings.TRACE_CAP == 14
        assert test_settings.DEFAULT_EPSILON == 1e-3

    @pytest.mark.parametrize("q,cap", [(2, 24), (3, 15), (4, 15)])
    def test_enumeration_cap(self, test_settings, q, cap):
        """Test the per-dimension enumeration cap."""
        assert test_settings.enumeration_cap(q) == cap

    @pytest.mark.parametrize("threads,tasks,expected", [(1, 8, 1), (4, 8, 4), (4, 2, 2), (4, 0, 1)])
    def test_worker_count(self, threads, tasks, expected):
        """Test that the pool never exceeds the task count or the thread cap."""
        assert Settings(LATCIRC_THREADS=threads).worker_count(tasks) == expected

    def test_environment_override(self):
        """Test that environment variables override defaults."""
        with patch.dict("os.environ", {"LATCIRC_THREADS": "3", "SHOT_BLOCK": "128"}):
            configured = Settings()
        assert configured.LATCIRC_THREADS == 3
        assert configured.SHOT_BLOCK == 128


class TestToolConfiguration:
    """Test cases for the formatter, linter and coverage settings."""

    def test_line_lengths_agree(self):
        """Test that black, isort and flake8 use one line length."""
        project = tomllib.loads((ROOT / "pyproject.toml").read_text())
        flake8 = configparser.ConfigParser()
        flake8.read(ROOT / ".flake8")
        length = project["tool"]["black"]["line-length"]
        assert project["tool"]["isort"]["line_length"] == length
        assert flake8.getint("flake8", "max-line-length") == length

    def test_coverage_and_hooks(self):
        """Test that coverage measures the package and the hooks run the linters."""
        project = tomllib.loads((ROOT / "pyproject.toml").read_text())
        assert project["tool"]["coverage"]["run"]["source"] == ["latcirc"]
        hooks = (ROOT / ".pre-commit-config.yaml").read_text()
        for hook in ("id: black", "id: isort", "id: flake8"):
            assert hook in hooks
