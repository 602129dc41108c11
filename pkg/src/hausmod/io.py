"""Loading and saving sampled functions.

A saved function is a pair of files sharing a stem: ``<stem>.json`` holds the
header {n, n_grid, half_extent, domain}, and ``<stem>.csv`` holds one row per
sample, ``index,re,im``, in C order.  The format round-trips values exactly
(floats are written with repr precision).
"""

from __future__ import annotations

import json
import os

import numpy as np

from .grid import GridFunction, GridSpec

__all__ = ["save_gridfunction", "load_gridfunction"]

_HEADER_KEYS = {"n", "n_grid", "half_extent", "domain"}


def save_gridfunction(f: GridFunction, stem: str) -> tuple[str, str]:
    """Write ``f`` to ``<stem>.json`` + ``<stem>.csv``; returns both paths."""
    header = {
        "n": f.spec.n,
        "n_grid": f.spec.n_grid,
        "half_extent": f.spec.half_extent,
        "domain": f.domain,
    }
    json_path, csv_path = stem + ".json", stem + ".csv"
    with open(json_path, "w") as fh:
        json.dump(header, fh, indent=1, sort_keys=True)
        fh.write("\n")
    flat = f.values.ravel()
    with open(csv_path, "w") as fh:
        fh.write("index,re,im\n")
        for i, z in enumerate(flat):
            fh.write(f"{i},{float(z.real)!r},{float(z.imag)!r}\n")
    return json_path, csv_path


def load_gridfunction(stem: str) -> GridFunction:
    """Reload a function written by :func:`save_gridfunction`.

    ``stem`` may also be the path of the header file itself.  Raises
    ValueError on malformed headers, wrong sample counts, or non-finite data.
    """
    if stem.endswith(".json"):
        stem = stem[: -len(".json")]
    json_path, csv_path = stem + ".json", stem + ".csv"
    for path in (json_path, csv_path):
        if not os.path.exists(path):
            raise ValueError(f"missing file: {path}")
    with open(json_path) as fh:
        header = json.load(fh)
    if not isinstance(header, dict) or set(header) != _HEADER_KEYS:
        raise ValueError(f"malformed header in {json_path}: keys {sorted(header)}")
    spec = GridSpec(int(header["n"]), int(header["n_grid"]), float(header["half_extent"]))
    raw = np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2)
    expected = spec.n_grid**spec.n
    if raw.shape != (expected, 3):
        raise ValueError(f"sample table in {csv_path} has shape {raw.shape}, expected ({expected}, 3)")
    if not np.array_equal(raw[:, 0], np.arange(expected)):
        raise ValueError(f"sample indices in {csv_path} are not 0..{expected - 1}")
    values = (raw[:, 1] + 1j * raw[:, 2]).reshape(spec.shape)
    return GridFunction(spec, values, str(header["domain"]))
