"""Command-line front end.

Subcommands: ``phantom`` (validate/normalize a phantom spec), ``project``
(fan or parallel forward projection), ``reconstruct`` (fan / parallel /
rebin-parallel inversion), ``validate`` (numerical identity suites) and
``evaluate`` (image metrics).

Exit codes: 0 success, 1 validation-suite failure, 2 usage or input error,
3 internal invariant breach (non-finite output).  Every failure prints a
single machine-parsable line ``error: ...`` (or ``internal-error: ...``).
Each file-producing run writes one ``<output>.manifest.json`` next to its
outputs; the manifest is reproducible except for its wall-clock duration.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import formats
from .forward import (DEFAULT_INTENSITY_FLOOR, FanSinogram, ParallelSinogram,
                      count_floor_clamps, project_fan, project_parallel,
                      rebin_to_parallel)
from .image import evaluate_metrics
from .phantom import DiskPrimitive, Phantom
from .recon import ReconConfig, reconstruct_fan, reconstruct_parallel
from .validate import (run_fourier_slice_suite, run_lemma_suite,
                       run_uniform_phi_suite)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


@dataclass
class RunManifest:
    """Provenance record written next to every command's outputs."""

    command: str
    inputs: list[str]
    outputs: list[str]
    config: dict
    duration_s: float = 0.0
    warnings: list[str] = field(default_factory=list)

    def write(self, anchor_path):
        path = Path(str(anchor_path) + ".manifest.json")
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")
        return path


def _onoff(value: str) -> bool:
    if value not in ("on", "off"):
        raise argparse.ArgumentTypeError(f"expected on|off, got {value!r}")
    return value == "on"


def _window(value: str) -> tuple[float, float]:
    try:
        lo, hi = (float(part) for part in value.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected lo,hi got {value!r}") from exc
    return (lo, hi)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fanct",
        description="Fan-beam tomography: analytic phantoms, sinogram "
                    "simulation, principal-value reconstruction, and "
                    "numerical identity checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phantom", help="validate and normalize a phantom JSON")
    p.add_argument("spec", help="input phantom JSON")
    p.add_argument("out", help="output normalized phantom JSON")

    p = sub.add_parser("project", help="forward-project a phantom")
    p.add_argument("phantom", help="phantom JSON")
    p.add_argument("geometry", help="geometry JSON")
    p.add_argument("out", help="output sinogram binary (sidecar: <out>.json)")
    p.add_argument("--mode", choices=("fan", "parallel"), default="fan")
    p.add_argument("--n-eta", type=int, default=513, help="parallel mode: eta samples")
    p.add_argument("--n-sigma", type=int, default=720, help="parallel mode: sigma samples")

    p = sub.add_parser("reconstruct", help="invert a sinogram to an image")
    p.add_argument("sinogram", help="input sinogram binary")
    p.add_argument("out", help="output image binary (also writes <out>.pgm)")
    p.add_argument("--method", choices=("fan", "parallel", "rebin-parallel"),
                   required=True)
    p.add_argument("--grid", type=int, default=101, help="output image resolution")
    p.add_argument("--epsilon", type=float, default=None,
                   help="pole exclusion half-width (default: one inner grid step)")
    p.add_argument("--pole-correction", type=_onoff, default=True, metavar="on|off")
    p.add_argument("--jacobian-correction", type=_onoff, default=False, metavar="on|off")
    p.add_argument("--n-eta", type=int, default=513, help="rebin-parallel: eta samples")
    p.add_argument("--n-sigma", type=int, default=720, help="rebin-parallel: sigma samples")
    p.add_argument("--window", type=_window, default=None,
                   help="PGM display window lo,hi (default 0,max)")

    p = sub.add_parser("validate", help="run the numerical identity suites")
    p.add_argument("--suite", choices=("fourier-slice", "lemma", "uniform-phi", "all"),
                   default="all")
    p.add_argument("--out", default=None, help="also write the JSON report here")

    p = sub.add_parser("evaluate", help="compare an image against a reference")
    p.add_argument("image", help="image binary")
    p.add_argument("reference", help="reference image binary")
    p.add_argument("out", help="output metrics JSON")
    p.add_argument("--interior-fraction", type=float, default=0.7)
    return parser


def cmd_phantom(args) -> int:
    ph = formats.load_phantom(args.spec)
    formats.save_phantom(args.out, ph)
    return EXIT_OK


def cmd_project(args, started: float) -> int:
    ph = formats.load_phantom(args.phantom)
    geom = formats.load_geometry(args.geometry)
    if geom.D <= geom.R:
        raise ValueError("source inside support: D <= R")
    if args.mode == "fan":
        sino = project_fan(ph, geom)
    else:
        sino = project_parallel(ph, args.n_eta, args.n_sigma)
    formats.save_sinogram(args.out, sino)
    RunManifest(
        command="project",
        inputs=[args.phantom, args.geometry],
        outputs=[args.out, str(formats.sidecar_path(args.out))],
        config={"mode": args.mode, "geometry": geom.to_dict(),
                "n_eta": args.n_eta, "n_sigma": args.n_sigma},
        duration_s=time.time() - started,
    ).write(args.out)
    return EXIT_OK


def cmd_reconstruct(args, started: float) -> int:
    sino = formats.load_sinogram(args.sinogram)
    cfg = ReconConfig(grid_n=args.grid, epsilon=args.epsilon,
                      pole_correction=args.pole_correction,
                      jacobian_correction=args.jacobian_correction)
    warnings: list[str] = []
    if args.method == "parallel":
        if not isinstance(sino, ParallelSinogram):
            raise ValueError("method parallel needs a parallel sinogram")
        image = reconstruct_parallel(sino, cfg)
    elif args.method == "fan":
        if not isinstance(sino, FanSinogram):
            raise ValueError("method fan needs a fan sinogram")
        image = reconstruct_fan(sino, cfg)
    else:
        if not isinstance(sino, FanSinogram):
            raise ValueError("method rebin-parallel needs a fan sinogram")
        clamped = count_floor_clamps(sino, DEFAULT_INTENSITY_FLOOR)
        if clamped:
            warnings.append(f"intensity floor clamped {clamped} samples")
        image = reconstruct_parallel(
            rebin_to_parallel(sino, args.n_eta, args.n_sigma), cfg)
    if not np.all(np.isfinite(image.values)):
        raise FloatingPointError("non-finite pixels in reconstruction output")
    window = formats.write_pgm16(str(args.out) + ".pgm", image, args.window)
    formats.save_image(args.out, image, window=window)
    for key in ("one_sided_poles", "out_of_range_poles"):
        if image.meta.get(key):
            warnings.append(f"{key}: {image.meta[key]}")
    RunManifest(
        command="reconstruct",
        inputs=[args.sinogram],
        outputs=[args.out, str(formats.sidecar_path(args.out)), str(args.out) + ".pgm"],
        config={"method": args.method, "grid_n": args.grid,
                "epsilon": args.epsilon, "pole_correction": args.pole_correction,
                "jacobian_correction": args.jacobian_correction,
                "n_eta": args.n_eta, "n_sigma": args.n_sigma,
                "window": list(window)},
        duration_s=time.time() - started,
        warnings=warnings,
    ).write(args.out)
    return EXIT_OK


def _validation_fixture():
    """Canonical disk used by the fourier-slice suite."""
    ph = Phantom(primitives=(DiskPrimitive(0.0, 0.0, 0.5, 1.0),), R=1.0)
    return ph.raster(1001), project_parallel(ph, 513, 720)


def cmd_validate(args, started: float) -> int:
    records: list[dict] = []
    if args.suite in ("uniform-phi", "all"):
        records += run_uniform_phi_suite()
    if args.suite in ("lemma", "all"):
        records += run_lemma_suite()
    if args.suite in ("fourier-slice", "all"):
        img, sino = _validation_fixture()
        records += run_fourier_slice_suite(img, sino)
    report = {"suite": args.suite, "all_pass": all(r["pass"] for r in records),
              "records": records}
    print(json.dumps(report, indent=2, sort_keys=True))
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        RunManifest(command="validate", inputs=[], outputs=[args.out],
                    config={"suite": args.suite},
                    duration_s=time.time() - started).write(args.out)
    return EXIT_OK if report["all_pass"] else EXIT_VALIDATION


def cmd_evaluate(args, started: float) -> int:
    image = formats.load_image(args.image)
    reference = formats.load_image(args.reference)
    metrics = evaluate_metrics(image, reference, args.interior_fraction)
    Path(args.out).write_text(json.dumps(metrics, indent=2, sort_keys=True) + "\n")
    RunManifest(command="evaluate", inputs=[args.image, args.reference],
                outputs=[args.out],
                config={"interior_fraction": args.interior_fraction},
                duration_s=time.time() - started).write(args.out)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.time()
    try:
        if args.command == "phantom":
            return cmd_phantom(args)
        if args.command == "project":
            return cmd_project(args, started)
        if args.command == "reconstruct":
            return cmd_reconstruct(args, started)
        if args.command == "validate":
            return cmd_validate(args, started)
        if args.command == "evaluate":
            return cmd_evaluate(args, started)
        raise ValueError(f"unknown command {args.command!r}")
    except FloatingPointError as exc:
        print(f"internal-error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, TypeError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
