"""Reading spaces and Cayley graphs from CSV files, and generator shorthands."""

from __future__ import annotations

import csv
from pathlib import Path

from .metric import (
    DEFAULT_EPS,
    FiniteMetricSpace,
    circle,
    from_distance_matrix,
    lattice_box,
    parse_value,
    point_cloud,
    sphere_poles_equator,
)


def _rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return [row for row in csv.reader(fh) if row and not row[0].lstrip().startswith("#")]


def _is_number(text) -> bool:
    try:
        parse_value(text)
    except (ValueError, ZeroDivisionError):
        return False
    return True


def read_point_cloud(path, exact=None, eps=DEFAULT_EPS) -> FiniteMetricSpace:
    """CSV rows ``x0,...,xk[,label]``; a non-numeric first row is a header."""
    rows = _rows(path)
    if rows and not all(_is_number(c) for c in rows[0][:-1] or rows[0]):
        rows = rows[1:]
    if not rows:
        raise ValueError(f"{path}: no points")
    has_label = not _is_number(rows[0][-1])
    coords, labels = [], []
    for i, row in enumerate(rows):
        vals = row[:-1] if has_label else row
        try:
            coords.append([float(parse_value(v)) for v in vals])
        except ValueError:
            raise ValueError(f"{path}: row {i + 1} is not numeric") from None
        labels.append(row[-1].strip() if has_label else f"x{i}")
    if len({len(c) for c in coords}) != 1:
        raise ValueError(f"{path}: rows have different dimensions")
    space = point_cloud(coords, labels, exact, eps)
    space.provenance["source"] = str(Path(path).name)
    return space


def read_distance_matrix(path, eps=None) -> FiniteMetricSpace:
    """Square CSV table; an optional first row of labels.  ``"1/3"`` parses exactly."""
    rows = _rows(path)
    labels = None
    if rows and not all(_is_number(c) for c in rows[0]):
        labels = [c.strip() for c in rows[0]]
        rows = rows[1:]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError(f"{path}: distance matrix must be square")
    labels = labels or [f"x{i}" for i in range(n)]
    if len(labels) != n:
        raise ValueError(f"{path}: {len(labels)} labels for {n} rows")
    space = from_distance_matrix(labels, [[c.strip() for c in r] for r in rows], eps=eps)
    space.provenance["source"] = str(Path(path).name)
    return space


def _node(text):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        return text


def read_cayley_edges(path) -> tuple:
    """CSV rows ``u,v,generator``; a header row ``u,v,generator`` is skipped."""
    out = []
    for row in _rows(path):
        if len(row) != 3:
            raise ValueError(f"{path}: expected u,v,generator rows")
        if [c.strip().lower() for c in row] == ["u", "v", "generator"]:
            continue
        out.append((_node(row[0]), _node(row[1]), row[2].strip()))
    if not out:
        raise ValueError(f"{path}: no edges")
    return tuple(out)


def parse_generator(text: str) -> FiniteMetricSpace:
    """``circle:12``, ``lattice:2:15`` or ``sphere:2`` (poles plus equator points)."""
    name, *args = text.strip().split(":")
    try:
        if name == "circle" and len(args) == 1:
            return circle(int(args[0]))
        if name in ("lattice", "lattice_box") and len(args) == 2:
            return lattice_box(int(args[0]), int(args[1]))
        if name == "sphere" and len(args) <= 1:
            return sphere_poles_equator(int(args[0]) if args else 2)
    except ValueError as exc:
        raise ValueError(f"bad generator {text!r}: {exc}") from None
    raise ValueError(f"unknown generator {text!r} (try circle:12, lattice:2:15, sphere:2)")
