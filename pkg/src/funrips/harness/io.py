"""File formats: point clouds, distance matrices, barcodes, Betti grades,
curves, and report JSON."""

from __future__ import annotations

import csv
import json
import math

import numpy as np

from ..geometry import SampledSpace

__all__ = ["read_point_cloud", "read_distance_matrix", "load_space",
           "write_barcode_csv", "read_barcode_csv", "write_betti_csv",
           "write_curve_csv", "write_report_json"]


def read_point_cloud(path):
    """CSV with header `x1..xd` (optional ambient coordinates) and `f1..fn`
    (required function values)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [row for row in reader if row]
    header = [h.strip() for h in header]
    xcols = [i for i, h in enumerate(header) if h.startswith("x")]
    fcols = [i for i, h in enumerate(header) if h.startswith("f")]
    if not fcols:
        raise ValueError("point-cloud file needs at least one f column")
    data = np.asarray([[float(v) for v in row] for row in rows])
    coords = data[:, xcols] if xcols else None
    values = data[:, fcols]
    return coords, values


def read_distance_matrix(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        rows = [[float(tok) for tok in line.split()]
                for line in fh if line.strip()]
    mat = np.asarray(rows, dtype=np.float64)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("distance matrix must be square")
    return mat


def load_space(cloud_path, dist_path=None) -> SampledSpace:
    coords, values = read_point_cloud(cloud_path)
    if dist_path is not None:
        dist = read_distance_matrix(dist_path)
        return SampledSpace(dist, values, coords=coords)
    if coords is None:
        raise ValueError("need ambient coordinates or a distance matrix")
    return SampledSpace.from_coords(coords, values)


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf"
    return repr(float(x))


def write_barcode_csv(bars, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("birth,death\n")
        for b, d in bars:
            fh.write(f"{_fmt(b)},{_fmt(d)}\n")


def read_barcode_csv(path) -> list:
    bars = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("birth"):
            raise ValueError("not a barcode CSV")
        for line in fh:
            if not line.strip():
                continue
            b, d = line.split(",")
            bars.append((float(b), float(d)))
    return bars


def write_betti_csv(betti, path, params=None) -> None:
    """betti: tuple/list of per-degree grade multisets."""
    with open(path, "w", encoding="utf-8") as fh:
        m = params or max((len(g) for grades in betti for g in grades), default=1)
        fh.write("degree," + ",".join(f"g{i+1}" for i in range(m)) + "\n")
        for deg, grades in enumerate(betti):
            for g in grades:
                fh.write(f"{deg}," + ",".join(_fmt(x) for x in g) + "\n")


def write_curve_csv(deltas, dims, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("delta,dim\n")
        for t, v in zip(deltas, dims):
            fh.write(f"{_fmt(t)},{v}\n")


def write_report_json(report: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _flat(v):
    if isinstance(v, (list, tuple)):
        return ";".join(str(x) for x in v)
    if isinstance(v, float):
        return _fmt(v)
    return str(v)


def write_rows_csv(rows, path) -> None:
    """Flat CSV view of experiment rows (list values joined with ';')."""
    keys = sorted({k for row in rows for k in row})
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(keys) + "\n")
        for row in rows:
            fh.write(",".join(_flat(row.get(k, "")) for k in keys) + "\n")
