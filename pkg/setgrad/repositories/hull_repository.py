"""Hull import/export as CSV (one point per row) and JSON."""
import csv
import json
import logging
from pathlib import Path
from typing import Union

import numpy as np

from setgrad.exceptions import InputError
from setgrad.models.hull import HullSet, Provenance
from setgrad.utils.formatters import format_float

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def save_hull_csv(hull: HullSet, path: PathLike) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow([f"a{i}" for i in range(hull.dim)])
        for row in hull.points:
            writer.writerow([format_float(value) for value in row])


def load_hull_csv(path: PathLike) -> HullSet:
    """Read a hull CSV; a header row is optional."""
    rows = []
    with open(path, newline="") as handle:
        for line_number, row in enumerate(csv.reader(handle), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                rows.append([float(cell) for cell in row])
            except ValueError as exc:
                if line_number == 1:
                    continue
                raise InputError(f"{path}:{line_number}: non-numeric entry") from exc
    if not rows:
        raise InputError(f"{path} holds no points")
    if len({len(row) for row in rows}) != 1:
        raise InputError(f"{path}: rows differ in length")
    return HullSet(np.array(rows), Provenance.exact())


def hull_to_document(hull: HullSet) -> dict:
    return {
        "points": [[float(value) for value in row] for row in hull.points],
        "provenance": hull.provenance.to_dict(),
    }


def save_hull_json(hull: HullSet, path: PathLike) -> None:
    with open(path, "w") as handle:
        json.dump(hull_to_document(hull), handle, indent=2)


def load_hull_json(path: PathLike) -> HullSet:
    try:
        with open(path) as handle:
            document = json.load(handle)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(document, dict) or "points" not in document:
        raise InputError(f"{path} has no 'points' list")
    raw = document.get("provenance") or {}
    provenance = Provenance(raw.get("kind", "exact"), int(raw.get("samples", 0)), raw.get("seed"))
    return HullSet(np.asarray(document["points"], dtype=float), provenance)


def load_points(path: PathLike) -> HullSet:
    """Load a hull from .json, anything else is read as CSV."""
    try:
        if str(path).lower().endswith(".json"):
            return load_hull_json(path)
        return load_hull_csv(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def save_points(hull: HullSet, path: PathLike) -> None:
    if str(path).lower().endswith(".json"):
        save_hull_json(hull, path)
    else:
        save_hull_csv(hull, path)
    logger.info("wrote %s hull points to %s", len(hull), path)
