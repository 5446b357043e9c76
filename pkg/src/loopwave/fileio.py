"""Versioned JSON file formats for filter systems and loops.

Filter file (version 1):

    {"version": 1, "n": 2,
     "filters": [{"offset": 0, "coeffs": [[0.5, 0.0], [0.5, 0.0]]}, ...]}

Loop file (version 1):

    {"version": 1, "n": 2,
     "entries": [[{"offset": 0, "coeffs": [[re, im], ...]}, ...], ...]}

Coefficients are [re, im] pairs so that Laurent polynomials with negative
offsets round-trip losslessly.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .laurent import LaurentPoly, MatrixLaurent
from .loopgroup import FilterSystem


class FileFormatError(ValueError):
    """Raised on malformed or out-of-contract input files."""


def _poly_to_json(p: LaurentPoly) -> dict[str, Any]:
    return {"offset": p.offset, "coeffs": [[c.real, c.imag] for c in p.coeffs]}


def _poly_from_json(obj: Any, where: str) -> LaurentPoly:
    if not isinstance(obj, dict) or "offset" not in obj or "coeffs" not in obj:
        raise FileFormatError(f"{where}: expected an object with 'offset' and 'coeffs'")
    offset = obj["offset"]
    if not isinstance(offset, int):
        raise FileFormatError(f"{where}: offset must be an integer")
    coeffs = []
    for idx, pair in enumerate(obj["coeffs"]):
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) for v in pair)
        ):
            raise FileFormatError(f"{where}: coefficient {idx} must be a [re, im] pair")
        re, im = float(pair[0]), float(pair[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise FileFormatError(f"{where}: coefficient {idx} is not finite")
        coeffs.append(complex(re, im))
    return LaurentPoly(offset, coeffs)


def _load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON: {exc}") from exc


def _check_header(doc: Any, path: str | Path) -> int:
    if not isinstance(doc, dict):
        raise FileFormatError(f"{path}: top level must be an object")
    if doc.get("version") != 1:
        raise FileFormatError(f"{path}: unsupported version {doc.get('version')!r}")
    n = doc.get("n")
    if not isinstance(n, int) or n < 2:
        raise FileFormatError(f"{path}: 'n' must be an integer >= 2")
    return n


def load_filter_file(path: str | Path, allow_partial: bool = False) -> FilterSystem | tuple[int, list[LaurentPoly]]:
    """Load a filter file; with allow_partial, fewer than n filters are
    accepted and (n, polys) is returned instead of a FilterSystem."""
    doc = _load_json(path)
    n = _check_header(doc, path)
    records = doc.get("filters")
    if not isinstance(records, list):
        raise FileFormatError(f"{path}: 'filters' must be a list")
    polys = [_poly_from_json(rec, f"{path}: filter {i}") for i, rec in enumerate(records)]
    if allow_partial:
        if not 1 <= len(polys) <= n:
            raise FileFormatError(f"{path}: expected between 1 and {n} filters, got {len(polys)}")
        return n, polys
    if len(polys) != n:
        raise FileFormatError(f"{path}: expected exactly {n} filters, got {len(polys)}")
    return FilterSystem(n, polys)


def save_filter_file(path: str | Path, system: FilterSystem) -> None:
    doc = {
        "version": 1,
        "n": system.n,
        "filters": [_poly_to_json(f) for f in system.filters],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_loop_file(path: str | Path) -> MatrixLaurent:
    doc = _load_json(path)
    n = _check_header(doc, path)
    grid = doc.get("entries")
    if not isinstance(grid, list) or len(grid) != n or any(not isinstance(row, list) or len(row) != n for row in grid):
        raise FileFormatError(f"{path}: 'entries' must be an {n} x {n} grid")
    rows = [
        [_poly_from_json(grid[i][j], f"{path}: entry ({i},{j})") for j in range(n)]
        for i in range(n)
    ]
    return MatrixLaurent(rows)


def save_loop_file(path: str | Path, mat: MatrixLaurent) -> None:
    doc = {
        "version": 1,
        "n": mat.n,
        "entries": [[_poly_to_json(mat[i, j]) for j in range(mat.n)] for i in range(mat.n)],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def detect_kind(path: str | Path) -> str:
    """'filters' or 'loop', judged by which payload key the file carries."""
    doc = _load_json(path)
    if isinstance(doc, dict):
        if "filters" in doc:
            return "filters"
        if "entries" in doc:
            return "loop"
    raise FileFormatError(f"{path}: neither a filter file nor a loop file")
