"""Fan-beam tomography toolkit: analytic disk phantoms, intensity-sinogram
simulation, fan/parallel inversion by principal-value quadrature, and
numerical verification of the underlying identities."""

from .forward import (FanSinogram, ParallelSinogram, count_floor_clamps,
                      log_transform, project_fan, project_parallel,
                      rebin_to_parallel)
from .geometry import (FanGeometry, LineCoords, RayCoords, fan_to_line,
                       line_to_fan, normalize_angle, ray_entry_exit, ray_point,
                       rotate_to_object_frame)
from .image import Image, evaluate_metrics
from .phantom import DiskPrimitive, Phantom
from .recon import (ReconConfig, central_difference, pv_inner_integral,
                    reconstruct_fan, reconstruct_parallel)
from .validate import (FourierSample, TEST_FUNCTIONS, TestFunction,
                       fourier_slice_lhs, fourier_slice_rhs, lemma_lhs,
                       lemma_rhs, run_fourier_slice_suite, run_lemma_suite,
                       run_uniform_phi_suite, uniform_phi_reference,
                       uniform_phi_sigma_integral)

__version__ = "0.1.0"

__all__ = [
    "DiskPrimitive", "FanGeometry", "FanSinogram", "FourierSample", "Image",
    "LineCoords", "ParallelSinogram", "Phantom", "RayCoords", "ReconConfig",
    "TEST_FUNCTIONS", "TestFunction", "central_difference",
    "count_floor_clamps", "evaluate_metrics", "fan_to_line",
    "fourier_slice_lhs", "fourier_slice_rhs", "lemma_lhs", "lemma_rhs",
    "line_to_fan", "log_transform", "normalize_angle", "project_fan",
    "project_parallel", "pv_inner_integral", "ray_entry_exit", "ray_point",
    "rebin_to_parallel", "reconstruct_fan", "reconstruct_parallel",
    "rotate_to_object_frame", "run_fourier_slice_suite", "run_lemma_suite",
    "run_uniform_phi_suite", "uniform_phi_reference",
    "uniform_phi_sigma_integral",
]
