"""Explicit Fourier-analytic upper bounds on Wasserstein distances over the
torus, sphere, and generic compact manifolds, validated against exact
optimal-transport oracles.
"""

from ._kernels import BACKEND as kernel_backend
from .bounds import (BoundParams, BoundReport, ManifoldConstants,
                     bound_manifold_heat_p_gt2, bound_manifold_heat_p_le2,
                     bound_sphere_heat, bound_sphere_projection,
                     bound_sphere_winf, bound_torus_heat, bound_torus_jackson,
                     bound_torus_winf, c2_factor, design_bound,
                     heat_lower_delta, optimize_bound, winf_c2_factor)
from .designs import DesignReport, corollary_verify, design_check, known_design
from .measures import (DiscreteMeasure, GenericSpectrumDiff, HeatRule,
                       JacksonWindow, ProjectionWindow, SphereEnergySeq,
                       TorusSpectrumDiff, UniformVol, WinfRule,
                       generic_diff_from_torus, measure_from_json,
                       measure_to_json, sphere_energy, sphere_energy_seq,
                       torus_diff_table, torus_fourier)
from .oracle import (CostMetric, OtResult, circle_w1, circle_wp, discrete_winf,
                     discrete_wp, quantize_vol, wp_vs_vol_enclosure)
from .spectral import (LatticeShellIter, SphereEigen, gegenbauer_eval,
                       jacobi_eval, lattice_shells, log_gamma_ratio,
                       sphere_eigen, zonal_eval)

__version__ = "0.1.0"

__all__ = [
    "BoundParams", "BoundReport", "ManifoldConstants", "DesignReport",
    "DiscreteMeasure", "UniformVol", "GenericSpectrumDiff", "SphereEnergySeq",
    "TorusSpectrumDiff", "HeatRule", "WinfRule", "JacksonWindow",
    "ProjectionWindow", "CostMetric", "OtResult", "SphereEigen",
    "LatticeShellIter",
    "bound_torus_jackson", "bound_torus_heat", "bound_torus_winf",
    "bound_sphere_heat", "bound_sphere_projection", "bound_sphere_winf",
    "bound_manifold_heat_p_le2", "bound_manifold_heat_p_gt2",
    "c2_factor", "winf_c2_factor", "heat_lower_delta", "design_bound",
    "optimize_bound",
    "circle_w1", "circle_wp", "discrete_wp", "discrete_winf", "quantize_vol",
    "wp_vs_vol_enclosure",
    "design_check", "corollary_verify", "known_design",
    "torus_fourier", "torus_diff_table", "sphere_energy", "sphere_energy_seq",
    "generic_diff_from_torus", "measure_from_json", "measure_to_json",
    "gegenbauer_eval", "jacobi_eval", "sphere_eigen", "zonal_eval",
    "log_gamma_ratio", "lattice_shells",
    "kernel_backend",
]
