"""Plain-text exporters: PGM (P2) rasters and CSV tables.

All numbers are written in shortest round-trip form (``repr``) so that
identical inputs give byte-identical files.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = [
    "pgm_text",
    "read_pgm",
    "write_gridset_pgm",
    "write_gridset_csv",
    "write_sampled_csv",
    "write_residuals_csv",
    "write_surface",
]


def pgm_text(image, maxval: int = 255) -> str:
    """P2 graymap of an integer array with shape ``(rows, cols)``."""
    image = np.asarray(image, dtype=np.int64)
    rows, cols = image.shape
    body = "\n".join(" ".join(str(v) for v in row) for row in image.tolist())
    return f"P2\n{cols} {rows}\n{maxval}\n{body}\n"


def read_pgm(path) -> np.ndarray:
    """Parse a P2 file written by :func:`pgm_text` (comments not supported)."""
    tokens = Path(path).read_text().split()
    if tokens[0] != "P2":
        raise ValueError("not a P2 graymap")
    cols, rows = int(tokens[1]), int(tokens[2])
    return np.array(tokens[4 : 4 + rows * cols], dtype=np.int64).reshape(rows, cols)


def _image(grid) -> np.ndarray:
    # mask[i, j] is cell (x_i, y_j); image rows run from the top (largest y)
    return np.where(grid.mask.T[::-1], 255, 0)


def write_gridset_pgm(path, grid) -> None:
    """One pixel per cell, 255 present and 0 absent, top row = largest ``y``."""
    Path(path).write_text(pgm_text(_image(grid)))


def write_gridset_csv(path, grid) -> None:
    """Cell centers as ``x,y`` rows in lexicographic cell order."""
    with open(path, "w") as fh:
        for x, y in grid.centers.tolist():
            fh.write(f"{x!r},{y!r}\n")


def write_sampled_csv(path, f) -> None:
    with open(path, "w") as fh:
        f.to_csv(fh)


def write_residuals_csv(path, residuals) -> None:
    with open(path, "w") as fh:
        for k, r in enumerate(residuals, start=1):
            fh.write(f"{k},{float(r)!r}\n")


def write_surface(directory, surface, stem: str = "surface") -> dict:
    """Write ``<stem>.csv``, ``<stem>.pgm`` and the sidecar ``<stem>_pgm.txt``.

    The CSV has one row per ``x`` grid point.  The heightmap maps values
    affinely onto ``0..255`` (rows from largest ``y`` down, columns along
    ``x``); the sidecar records the mapping.
    """
    directory = Path(directory)
    v = surface.values
    paths = {k: directory / f"{stem}{suffix}" for k, suffix in (("csv", ".csv"), ("pgm", ".pgm"), ("sidecar", "_pgm.txt"))}
    with open(paths["csv"], "w") as fh:
        for row in v.tolist():
            fh.write(",".join(repr(x) for x in row) + "\n")
    lo, hi = float(v.min()), float(v.max())
    scale = 255.0 / (hi - lo) if hi > lo else 0.0
    gray = np.rint((v - lo) * scale).astype(np.int64)
    paths["pgm"].write_text(pgm_text(gray.T[::-1]))
    paths["sidecar"].write_text(
        f"min = {lo!r}\nmax = {hi!r}\nscale = {scale!r}\n"
        "gray = round((value - min) * scale)\n"
        "rows = y descending\ncolumns = x ascending\n"
    )
    return paths
