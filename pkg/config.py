"""
Configuration and environment setup for the PU(2,1) quadrangle toolkit.

Centralizes paths, numerical tolerances, scan defaults, logging
configuration, and startup validation so that problems are caught early
and reported clearly.
"""

import logging
import logging.handlers
import math
import os
import sys
from pathlib import Path
from typing import List

from dotenv import load_dotenv

load_dotenv()

# ── Paths ─────────────────────────────────────────────────
BASE_DIR = Path(__file__).resolve().parent
DATA_DIR = BASE_DIR / "data"
OUTPUT_DIR = BASE_DIR / "output"
LOG_DIR = BASE_DIR / "logs"
FIXTURE_PATH = Path(os.getenv("PENTAGON_FIXTURE", str(DATA_DIR / "paper_example.json")))

# ── Tolerances ────────────────────────────────────────────
# Two to four orders above the f64 residuals of the worked example.
EQ_TOL_RAW = os.getenv("EQ_TOL", "1e-9")
RESIDUAL_TOL_RAW = os.getenv("RESIDUAL_TOL", "1e-10")
ISO_TOL_RAW = os.getenv("ISO_TOL", "1e-8")


def _as_float(raw: str, fallback: float) -> float:
    try:
        return float(raw)
    except ValueError:
        return fallback


def _as_int(raw: str, fallback: int) -> int:
    try:
        return int(raw)
    except ValueError:
        return fallback


EQ_TOL = _as_float(EQ_TOL_RAW, 1e-9)
RESIDUAL_TOL = _as_float(RESIDUAL_TOL_RAW, 1e-10)
ISO_TOL = _as_float(ISO_TOL_RAW, 1e-8)

# Coincidence of boundary points never loosens with EQ_TOL.
COINCIDENCE_TOL = 1e-9

# ── Toledo snapping ───────────────────────────────────────
TOLEDO_MAX_DENOMINATOR = 12
TOLEDO_SNAP_TOL = 1e-6

# ── Bending scans ─────────────────────────────────────────
SCAN_DTHETA_RAW = os.getenv("SCAN_DTHETA", "0.02")
SCAN_STEPS_RAW = os.getenv("SCAN_STEPS", "250")
SCAN_DTHETA = _as_float(SCAN_DTHETA_RAW, 0.02)
SCAN_STEPS = _as_int(SCAN_STEPS_RAW, 250)
RESIDUAL_BLOWUP_FACTOR = 10.0

# ── Logging ───────────────────────────────────────────────
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
LOG_TO_FILE = os.getenv("LOG_TO_FILE", "false").lower() == "true"
LOG_FILE_MAX_BYTES = 10 * 1024 * 1024   # 10 MB
LOG_FILE_BACKUP_COUNT = 5


def setup_logging(level: int = logging.INFO) -> None:
    """
    Configure root logger with console output and optional file rotation.

    Set LOG_TO_FILE=true in .env to enable file logging to logs/pu21.log
    with automatic rotation at 10 MB (5 backups kept).
    """
    handlers = [logging.StreamHandler(sys.stdout)]

    if LOG_TO_FILE:
        LOG_DIR.mkdir(parents=True, exist_ok=True)
        file_handler = logging.handlers.RotatingFileHandler(
            LOG_DIR / "pu21.log",
            maxBytes=LOG_FILE_MAX_BYTES,
            backupCount=LOG_FILE_BACKUP_COUNT,
            encoding="utf-8",
        )
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=LOG_DATE_FORMAT))
        handlers.append(file_handler)

    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        datefmt=LOG_DATE_FORMAT,
        handlers=handlers,
        force=True,
    )


class ConfigurationError(Exception):
    """Raised when required configuration is missing or invalid."""


def validate_config() -> None:
    """
    Check that the fixture exists and every numeric knob is usable.

    Raises ConfigurationError with a clear message if anything is wrong,
    so a run fails fast instead of producing meaningless verdicts.
    """
    errors: List[str] = []

    if not FIXTURE_PATH.exists():
        errors.append(f"Pentagon fixture not found: {FIXTURE_PATH}")

    for name, raw in (("EQ_TOL", EQ_TOL_RAW), ("RESIDUAL_TOL", RESIDUAL_TOL_RAW),
                      ("ISO_TOL", ISO_TOL_RAW)):
        try:
            value = float(raw)
        except ValueError:
            errors.append(f"{name} is not a number: {raw!r}")
            continue
        if not value > 0:
            errors.append(f"{name} must be strictly positive (got {raw})")

    try:
        dtheta = float(SCAN_DTHETA_RAW)
        if dtheta == 0 or not math.isfinite(dtheta):
            errors.append(f"SCAN_DTHETA must be finite and non-zero (got {SCAN_DTHETA_RAW})")
    except ValueError:
        errors.append(f"SCAN_DTHETA is not a number: {SCAN_DTHETA_RAW!r}")
    try:
        if int(SCAN_STEPS_RAW) < 0:
            errors.append("SCAN_STEPS must be non-negative")
    except ValueError:
        errors.append(f"SCAN_STEPS is not an integer: {SCAN_STEPS_RAW!r}")

    if errors:
        raise ConfigurationError(
            "Configuration errors:\n  • " + "\n  • ".join(errors)
        )
