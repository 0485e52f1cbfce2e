"""File formats: raw binary64 grids with JSON sidecars, 16-bit PGM previews,
and phantom/geometry JSON.

Binary grids are little-endian IEEE-754 float64, row-major, with the angular
index (tau or sigma) as rows.  Each binary ``<path>`` is paired with a sidecar
``<path>.json`` describing the grid; write-then-read round trips are
bit-exact.  PGM output is binary P5 with maxval 65535 (big-endian sample
order, as the format requires), windowed by an explicit [lo, hi] that is
recorded in the image sidecar.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .forward import FanSinogram, ParallelSinogram
from .geometry import FanGeometry
from .image import Image

_F8LE = np.dtype("<f8")


def sidecar_path(path) -> Path:
    return Path(str(path) + ".json")


def _write_grid(path: Path, values: np.ndarray, sidecar: dict):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.ascontiguousarray(values, dtype=_F8LE).tofile(path)
    sidecar = dict(sidecar, rows=values.shape[0], cols=values.shape[1],
                   dtype="<f8", order="C")
    sidecar_path(path).write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")


def _read_grid(path: Path) -> tuple[np.ndarray, dict]:
    path = Path(path)
    meta = json.loads(sidecar_path(path).read_text())
    values = np.fromfile(path, dtype=_F8LE).astype(np.float64)
    expected = meta["rows"] * meta["cols"]
    if values.size != expected:
        raise ValueError(f"{path}: payload has {values.size} samples, sidecar says {expected}")
    return values.reshape(meta["rows"], meta["cols"]), meta


def save_sinogram(path, sino: FanSinogram | ParallelSinogram):
    """Write a sinogram as <path> (binary) + <path>.json (sidecar)."""
    if isinstance(sino, FanSinogram):
        _write_grid(Path(path), sino.values,
                    {"kind": "fan", "geometry": sino.geom.to_dict()})
    elif isinstance(sino, ParallelSinogram):
        _write_grid(Path(path), sino.values, {"kind": "parallel", "R": sino.R})
    else:
        raise TypeError(f"not a sinogram: {type(sino).__name__}")


def load_sinogram(path) -> FanSinogram | ParallelSinogram:
    values, meta = _read_grid(Path(path))
    kind = meta.get("kind")
    if kind == "fan":
        return FanSinogram(geom=FanGeometry.from_dict(meta["geometry"]), values=values)
    if kind == "parallel":
        return ParallelSinogram(R=float(meta["R"]), values=values)
    raise ValueError(f"{path}: unknown sinogram kind {kind!r}")


def save_image(path, image: Image, window: tuple[float, float] | None = None):
    """Write an image as <path> (binary) + <path>.json; records the PGM window."""
    sidecar = {"kind": "image", "R": image.R}
    if window is not None:
        sidecar["window"] = [float(window[0]), float(window[1])]
    _write_grid(Path(path), image.values, sidecar)


def load_image(path) -> Image:
    values, meta = _read_grid(Path(path))
    if meta.get("kind") != "image":
        raise ValueError(f"{path}: not an image (kind={meta.get('kind')!r})")
    return Image(values=values, R=float(meta["R"]),
                 meta={"window": meta.get("window")} if "window" in meta else {})


def write_pgm16(path, image: Image, window: tuple[float, float] | None = None
                ) -> tuple[float, float]:
    """Write a 16-bit binary PGM preview; returns the window actually used.

    The default window is [0, max value].  Rows are flipped so the top of the
    file is +y.  The raw binary64 grid stays authoritative; this is for eyes.
    """
    if window is None:
        window = (0.0, float(image.values.max()))
    lo, hi = float(window[0]), float(window[1])
    if not hi > lo:
        hi = lo + 1.0
    scaled = np.clip((image.values - lo) / (hi - lo), 0.0, 1.0)
    pixels = np.flipud(np.round(scaled * 65535.0).astype(">u2"))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{image.n} {image.n}\n65535\n".encode("ascii"))
        fh.write(pixels.tobytes())
    return (lo, hi)


def save_phantom(path, ph):
    Path(path).write_text(json.dumps(ph.to_dict(), indent=2, sort_keys=True) + "\n")


def load_phantom(path):
    from .phantom import Phantom
    return Phantom.from_dict(json.loads(Path(path).read_text()))


def save_geometry(path, geom: FanGeometry):
    Path(path).write_text(json.dumps(geom.to_dict(), indent=2, sort_keys=True) + "\n")


def load_geometry(path) -> FanGeometry:
    return FanGeometry.from_dict(json.loads(Path(path).read_text()))
