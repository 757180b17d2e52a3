"""File formats: two-column CSV datasets and canonical JSON result files.

Datasets are UTF-8 CSV with an ``x,y`` header; ``#`` starts a comment line.
Result documents are JSON with sorted keys so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import json
from importlib import metadata

import numpy as np

from .errors import InputFormatError
from .estimation import Dataset


def tool_version() -> str:
    try:
        return metadata.version("bentcable")
    except metadata.PackageNotFoundError:  # pragma: no cover
        return "unknown"


def read_xy_csv(path) -> Dataset:
    """Parse an ``x,y`` CSV into a dataset, reporting bad lines by number."""
    xs, ys = [], []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        saw_header = False
        for lineno, row in enumerate(csv.reader(handle), start=1):
            if not row or (row[0].lstrip().startswith("#")):
                continue
            cells = [c.strip() for c in row]
            if not saw_header:
                if [c.lower() for c in cells[:2]] != ["x", "y"]:
                    raise InputFormatError("expected header 'x,y'", line=lineno)
                saw_header = True
                continue
            if len(cells) < 2:
                raise InputFormatError("expected two columns", line=lineno)
            try:
                xs.append(float(cells[0]))
                ys.append(float(cells[1]))
            except ValueError as exc:
                raise InputFormatError(str(exc), line=lineno) from None
        if not saw_header:
            raise InputFormatError("file has no 'x,y' header")
    if not xs:
        raise InputFormatError("file has no data rows")
    return Dataset(np.asarray(xs), np.asarray(ys))


def write_xy_csv(path, data: Dataset, comments=()) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        for comment in comments:
            handle.write(f"# {comment}\n")
        writer = csv.writer(handle)
        writer.writerow(["x", "y"])
        for x, y in zip(data.xs, data.ys):
            writer.writerow([repr(float(x)), repr(float(y))])


def write_json(path, document: dict) -> None:
    """Canonical JSON: sorted keys, fixed layout, newline-terminated."""
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(document, handle, sort_keys=True, indent=2, allow_nan=False)
        handle.write("\n")


def json_ready(value):
    """Recursively convert numpy scalars/arrays for JSON serialisation."""
    if isinstance(value, dict):
        return {k: json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_ready(v) for v in value]
    if isinstance(value, np.ndarray):
        return [json_ready(v) for v in value.tolist()]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, float) and (np.isnan(value) or np.isinf(value)):
        return None if np.isnan(value) else ("inf" if value > 0 else "-inf")
    return value
