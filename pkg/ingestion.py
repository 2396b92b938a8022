"""
Data ingestion: load pentagon files and the worked-example fixture.

All file parsing lives here so the geometry modules stay pure. Complex
numbers are stored as [re, im] pairs; vectors as lists of three pairs.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np

from config import FIXTURE_PATH
from errors import GeometryError
from hermitian import HermitianSpace, ProjPoint
from pentagon import CubeRoot, Pentagon
from triple_variety import SignTriple, SurfaceCoords

logger = logging.getLogger(__name__)

SUPPORTED_VERSIONS = {1}
POINT_KEYS = ("p1", "p2", "p3", "p4", "p5")


@dataclass(eq=False)
class PentagonFile:
    """A parsed pentagon file: the pentagon plus whatever optional data it carries."""

    pentagon: Pentagon
    source: Optional[Path] = None
    coords: Optional[SurfaceCoords] = None
    t45: Optional[float] = None
    witness: Optional[ProjPoint] = None
    reference: Dict[str, ProjPoint] = field(default_factory=dict)
    reference_eigenvalue: Optional[complex] = None


# ── Scalars and vectors ───────────────────────────────────

def parse_complex(value, where: str) -> complex:
    """
    Accept a real number or an [re, im] pair.

    Raises:
        ValueError: If the value has any other shape.
    """
    if isinstance(value, bool):
        raise ValueError(f"{where}: expected a number, got a boolean")
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        re, im = value
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
            return complex(float(re), float(im))
    raise ValueError(f"{where}: expected a number or [re, im], got {value!r}")


def parse_vector(value, where: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != 3:
        raise ValueError(f"{where}: expected a list of 3 complex entries")
    vec = np.array([parse_complex(v, f"{where}[{k}]") for k, v in enumerate(value)], dtype=complex)
    if not np.all(np.isfinite(vec)):
        raise ValueError(f"{where}: entries must be finite")
    return vec


def parse_point_text(text: str, space: HermitianSpace) -> ProjPoint:
    """
    Parse an inline point such as "0.62+0.36j, 0, 0.69".

    Raises:
        ValueError: If the text does not hold three complex numbers or the
            point is zero.
    """
    parts = [part.strip().replace(" ", "") for part in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"inline point needs 3 comma-separated entries, got {len(parts)}")
    try:
        rep = np.array([complex(part) for part in parts], dtype=complex)
    except ValueError as exc:
        raise ValueError(f"inline point {text!r}: {exc}") from exc
    return ProjPoint(rep, space)


# ── Structure ─────────────────────────────────────────────

def _validate_pentagon_data(data: dict) -> None:
    """Ensure the pentagon JSON has the expected top-level structure."""
    if not isinstance(data, dict):
        raise ValueError("Pentagon data must be a JSON object")
    version = data.get("version", 1)
    if version not in SUPPORTED_VERSIONS:
        raise ValueError(f"Unsupported pentagon file version: {version!r}")
    for key in ("gram", "points"):
        if key not in data:
            raise ValueError(f"Pentagon data missing top-level '{key}' key")
    gram = data["gram"]
    if not isinstance(gram, list) or len(gram) != 3 or any(
            not isinstance(row, list) or len(row) != 3 for row in gram):
        raise ValueError("'gram' must be a 3×3 array of complex entries")
    points = data["points"]
    if not isinstance(points, dict):
        raise ValueError("'points' must be an object keyed p1..p5")
    missing = [key for key in POINT_KEYS if key not in points]
    if missing:
        raise ValueError(f"'points' missing required keys: {missing}")


def _parse_coords(raw: dict) -> SurfaceCoords:
    if not isinstance(raw, dict):
        raise ValueError("'coords' must be an object")
    for key in ("s1", "s2", "s", "sigma", "tau"):
        if key not in raw:
            raise ValueError(f"'coords' missing required key '{key}'")
    sigma = raw["sigma"]
    if not isinstance(sigma, list) or len(sigma) != 3:
        raise ValueError("'coords.sigma' must list three signs")
    return SurfaceCoords(
        s1=float(raw["s1"]),
        s2=float(raw["s2"]),
        s=float(raw["s"]),
        sigma=SignTriple(*(int(v) for v in sigma)),
        tau=parse_complex(raw["tau"], "coords.tau"),
    )


def pentagon_from_dict(data: dict, source: Optional[Path] = None) -> PentagonFile:
    """
    Build a PentagonFile from parsed JSON.

    Raises:
        ValueError: If the structure is wrong or the content is not a valid
            pentagon (bad signature, zero or isotropic points, bad delta).
    """
    _validate_pentagon_data(data)
    try:
        gram = np.array([[parse_complex(v, f"gram[{i}][{j}]") for j, v in enumerate(row)]
                         for i, row in enumerate(data["gram"])], dtype=complex)
        space = HermitianSpace(gram)
        points = tuple(ProjPoint(parse_vector(data["points"][key], f"points.{key}"), space)
                       for key in POINT_KEYS)
        delta = CubeRoot(data.get("delta", CubeRoot.OMEGA2.value))
        parsed = PentagonFile(pentagon=Pentagon(space, points, delta), source=source)

        if "coords" in data:
            parsed.coords = _parse_coords(data["coords"])
        if "t45" in data:
            parsed.t45 = float(data["t45"])
        if data.get("witness") is not None:
            parsed.witness = ProjPoint(parse_vector(data["witness"], "witness"), space)

        reference = data.get("reference") or {}
        for key, value in reference.items():
            if key.endswith("_eigenvalue"):
                parsed.reference_eigenvalue = parse_complex(value, f"reference.{key}")
            else:
                parsed.reference[key] = ProjPoint(parse_vector(value, f"reference.{key}"), space)
    except GeometryError as exc:
        raise ValueError(f"Invalid pentagon data: {type(exc).__name__}: {exc}") from exc
    except (TypeError, KeyError) as exc:
        raise ValueError(f"Malformed pentagon data: {exc}") from exc
    return parsed


# ── Files ─────────────────────────────────────────────────

def load_pentagon(path: Union[str, Path]) -> PentagonFile:
    """
    Load a pentagon JSON file.

    Raises:
        FileNotFoundError: If the file does not exist.
        ValueError: If the file is empty, not JSON, or not a valid pentagon.
    """
    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"Pentagon file not found: {file_path}")

    text = file_path.read_text(encoding="utf-8")
    if not text.strip():
        raise ValueError(f"Pentagon file is empty: {file_path}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"Pentagon file is not valid JSON: {exc}") from exc

    parsed = pentagon_from_dict(data, source=file_path)
    logger.info("Loaded pentagon from %s (delta = %s)", file_path, parsed.pentagon.delta.value)
    return parsed


def load_fixture(path: Optional[Union[str, Path]] = None) -> PentagonFile:
    """Load the worked-example fixture (FIXTURE_PATH unless overridden)."""
    return load_pentagon(path or FIXTURE_PATH)
