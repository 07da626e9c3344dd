"""CSV ingestion, sequence ordering, and deterministic serialization.

Numbers are written with `repr`, the shortest representation that
parses back to the same float, so round-trips and reruns are
byte-identical.
"""

import csv
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ParseError
from .geometry import Window
from .model import PointSequence


@dataclass
class PlotRecord:
    id: str
    points: np.ndarray  # (n, 2), meters
    dbh: Optional[np.ndarray]  # cm
    window: Window


def parse_window_spec(spec):
    try:
        parts = [float(v) for v in spec.split(",")]
        if len(parts) != 4:
            raise ValueError
        return Window(*parts)
    except ValueError as exc:
        raise ParseError(f"bad window spec {spec!r}, expected 'xmin,ymin,xmax,ymax'") from exc


def fmt(value):
    """Shortest round-trip decimal representation."""
    return repr(float(value))


def ingest_csv(path, window_spec=None, record_id=None):
    """Read a plot CSV with header x,y,dbh (or index,x,y from `simulate` output).

    Without a window spec the bounding box of the points is used;
    passing an explicit spec is strongly recommended.
    """
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        header = [h.strip().lower() for h in header]
        if header[:3] == ["x", "y", "dbh"]:
            cols = {"x": 0, "y": 1, "dbh": 2}
        elif header[:3] == ["index", "x", "y"]:
            cols = {"x": 1, "y": 2, "dbh": None}
        elif header[:2] == ["x", "y"]:
            cols = {"x": 0, "y": 1, "dbh": None}
        else:
            raise ParseError(
                f"{path}: expected header 'x,y,dbh' or 'index,x,y', got {','.join(header)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not field.strip() for field in row):
                continue
            try:
                x = float(row[cols["x"]])
                y = float(row[cols["y"]])
                dbh = float(row[cols["dbh"]]) if cols["dbh"] is not None else None
            except (ValueError, IndexError) as exc:
                raise ParseError(f"{path}: row {lineno}: non-numeric or missing field") from exc
            if dbh is not None and dbh <= 0:
                raise ParseError(f"{path}: row {lineno}: dbh must be positive, got {dbh}")
            rows.append((lineno, x, y, dbh))

    if not rows:
        raise ParseError(f"{path}: no data rows")

    seen = {}
    for lineno, x, y, _ in rows:
        key = (x, y)
        if key in seen:
            raise ParseError(
                f"{path}: duplicate point {key} at rows {seen[key]} and {lineno}"
            )
        seen[key] = lineno

    pts = np.array([(x, y) for _, x, y, _ in rows])
    dbh_vals = [d for _, _, _, d in rows]
    dbh = np.array(dbh_vals) if all(d is not None for d in dbh_vals) else None

    if window_spec is not None:
        window = parse_window_spec(window_spec) if isinstance(window_spec, str) else window_spec
    else:
        window = Window(
            float(pts[:, 0].min()), float(pts[:, 1].min()),
            float(pts[:, 0].max()), float(pts[:, 1].max()),
        )
    for (lineno, x, y, _) in rows:
        if not window.contains(x, y):
            raise ParseError(f"{path}: row {lineno}: point ({x}, {y}) outside the window")

    return PlotRecord(id=record_id or str(path), points=pts, dbh=dbh, window=window)


def order_sequence(record, rule="descending_mark"):
    """Turn a plot record into an ordered sequence.

    descending_mark puts the largest mark first (the convention for
    DBH-ordered stands); ties break by (x, y) ascending for
    determinism.
    """
    if rule == "given":
        return PointSequence(record.points, record.window, marks=record.dbh)
    if record.dbh is None:
        raise ParseError(f"ordering rule {rule!r} needs marks, but none are present")
    if rule not in ("descending_mark", "ascending_mark"):
        raise ParseError(f"unknown ordering rule {rule!r}")
    sign = -1.0 if rule == "descending_mark" else 1.0
    order = np.lexsort((record.points[:, 1], record.points[:, 0], sign * record.dbh))
    return PointSequence(record.points[order], record.window, marks=record.dbh[order])


def write_sequence_csv(path, seq):
    """Write a sequence as index,x,y rows (1-based index)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "x", "y"])
        for i, (x, y) in enumerate(seq.points, start=1):
            writer.writerow([i, fmt(x), fmt(y)])


def write_curve_csv(path, curve):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "value"])
        for i, v in zip(curve.index, curve.values):
            writer.writerow([int(i), fmt(v)])


def write_band_csv(path, band):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "value", "lower", "upper"])
        for i, v, lo, hi in zip(band.index, band.data_curve.values, band.lower, band.upper):
            writer.writerow([int(i), fmt(v), fmt(lo), fmt(hi)])


def write_surface_csv(path, surface):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["theta", "r", "loglik"])
        for theta, r, ll in surface:
            writer.writerow([fmt(theta), fmt(r), fmt(ll)])


def write_lcurve_csv(path, result):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["r", "value", "lower", "upper"])
        for r, v, lo, hi in zip(
            result.data_curve.r_grid, result.data_curve.values, result.lower, result.upper
        ):
            writer.writerow([fmt(r), fmt(v), fmt(lo), fmt(hi)])


def curve_metadata(curve):
    return {
        "kind": curve.statistic_kind,
        "cumulative": bool(curve.cumulative),
        "r": curve.r_used,
        "cell_size": curve.cell_size,
        "first_index": int(curve.index[0]) if len(curve.index) else None,
    }


def band_metadata(band, seed):
    meta = curve_metadata(band.data_curve)
    meta.update(
        {
            "level": band.level,
            "replicates": band.n_replicates,
            "seed": seed,
            "n_outside": band.n_outside,
        }
    )
    return meta


def write_json(path, payload):
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
