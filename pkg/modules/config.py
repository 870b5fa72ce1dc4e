"""
Configuration loader for suite and CLI settings.

This module defines a configuration class that loads check tolerances,
worker counts and report settings from environment variables using `dotenv`.
It provides a single place to read them for the CLI, the suite runner and
the tests, and a health check that verifies the numerical stack on startup.
"""

import os
import logging
from dataclasses import dataclass, fields, replace
from typing import Dict, Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

DEFAULT_LOG_LEVEL = "WARNING"


@dataclass(frozen=True)
class SuiteTolerances:
    """Pass thresholds for every check the suites run."""
    routes: float = 1e-10
    restricted_large: float = 1e-8   # det vs product at N = 7, 8
    korepin: float = 1e-9
    second_recursion: float = 1e-6
    symmetry: float = 1e-11
    degree: float = 1e-8
    homogeneous: float = 1e-8
    toda: float = 1e-8
    twist: float = 1e-10
    bethe_recursion: float = 1e-9
    partition: float = 1e-9
    spectrum: float = 1e-8

    def override(self, values: Dict[str, float]) -> "SuiteTolerances":
        """Copy with some thresholds replaced; unknown names raise ValueError."""
        known = {f.name for f in fields(self)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ValueError(f"unknown tolerance name(s): {', '.join(unknown)}")
        for name, value in values.items():
            if not value > 0:
                raise ValueError(f"tolerance {name} must be positive, got {value}")
        return replace(self, **values)


_TOLERANCE_VARS = {f.name: f"DWPF_TOL_{f.name.upper()}" for f in fields(SuiteTolerances)}


def _positive_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}")
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


class AppConfig:
    """
    A container for all run configuration parameters.

    Reads tolerances, the default worker count, the report directory and the
    timing switch from the environment and stores them as instance attributes.
    """

    def __init__(self):
        """
        Initializes the configuration object by loading environment variables.
        """
        load_dotenv()

        self.log_level = (os.getenv("LOG_LEVEL") or DEFAULT_LOG_LEVEL).upper()
        raw_threads = os.getenv("DWPF_THREADS", "1")
        try:
            self.threads = int(raw_threads)
        except ValueError:
            raise ValueError(f"DWPF_THREADS must be an integer, got {raw_threads!r}")
        if self.threads < 1:
            raise ValueError(f"DWPF_THREADS must be at least 1, got {self.threads}")
        self.report_dir = os.getenv("DWPF_REPORT_DIR", "reports")
        self.record_timings = os.getenv("DWPF_RECORD_TIMINGS", "false").strip().lower() in ("1", "true", "yes", "on")

        defaults = SuiteTolerances()
        self._tolerances = SuiteTolerances(**{
            name: _positive_float(var, getattr(defaults, name))
            for name, var in _TOLERANCE_VARS.items()
        })

        self._log_loaded_variables()

    def _log_loaded_variables(self):
        """Logs the loaded configuration variables for verification."""
        logger.info("--- Configuration Variables Loaded ---")
        logger.info(f"LOG_LEVEL: {self.log_level}")
        logger.info(f"DWPF_THREADS: {self.threads}")
        logger.info(f"DWPF_REPORT_DIR: {self.report_dir}")
        logger.info(f"DWPF_RECORD_TIMINGS: {self.record_timings}")
        for name, var in _TOLERANCE_VARS.items():
            logger.info(f"{var}: {getattr(self._tolerances, name):.1e}")
        logger.info("------------------------------------")

    def tolerances(self, overrides: Optional[Dict[str, float]] = None) -> SuiteTolerances:
        """Suite thresholds, optionally with command-line overrides applied."""
        if overrides:
            return self._tolerances.override(overrides)
        return self._tolerances

    def health_check(self) -> bool:
        """
        Verifies that the numerical stack imports and the settings are usable.
        Returns True if all checks pass, False otherwise.
        """
        logger.info("--- Performing Health Checks ---")
        ok = True

        for package in ("numpy", "scipy", "pydantic"):
            try:
                module = __import__(package)
                logger.info(f"✅ {package} {getattr(module, '__version__', '')} available.")
            except ImportError:
                logger.error(f"❌ '{package}' is not installed. Please run 'pip install {package}'.")
                ok = False

        if os.path.exists(self.report_dir) and not os.path.isdir(self.report_dir):
            logger.error(f"❌ DWPF_REPORT_DIR {self.report_dir} exists and is not a directory.")
            ok = False
        else:
            logger.info(f"✅ Report directory {self.report_dir} usable.")

        logger.info("--------------------------------")
        if not ok:
            logger.critical("🚨 One or more health checks failed. Suites may not run. Check your .env file and installed packages.")
        return ok


# Global instance, created on first use
config = None


def get_config() -> AppConfig:
    """Get the global AppConfig instance, creating it if necessary."""
    global config
    if config is None:
        config = AppConfig()
    return config


def reset_config() -> None:
    """Drops the global instance so the next get_config() rereads the environment."""
    global config
    config = None
