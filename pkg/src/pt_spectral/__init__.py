"""Eigenvalues of -u'' - [(iz)^m + P(iz)] u = lambda u by complex-ray shooting."""

from .criteria import (check_exactly_solvable, check_extensions, check_main, cubic_to_spec,
                       hypothesis_report, qes_quartic)
from .integrator import RaySpec, origin_data, shoot, wkb_seed
from .potential import (PotentialSpec, K_const, asymptotic_eigenvalue, expand_b, F_eval,
                        omega, r_and_nu, rotate_frame)
from .spectral import (associated_spectrum, eigencondition, find_eigenvalues, product_residual,
                       spectral_determinant, stokes_multipliers, sweep_coefficient)

__all__ = [
    "PotentialSpec", "RaySpec", "K_const", "F_eval", "asymptotic_eigenvalue", "expand_b", "omega",
    "r_and_nu", "rotate_frame", "origin_data", "shoot", "wkb_seed", "associated_spectrum",
    "eigencondition", "find_eigenvalues", "product_residual", "spectral_determinant",
    "stokes_multipliers", "sweep_coefficient", "check_exactly_solvable", "check_extensions",
    "check_main", "cubic_to_spec", "hypothesis_report", "qes_quartic",
]
