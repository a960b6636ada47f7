"""Magnetic trajectories of left-invariant Lorentz forces on the Heisenberg group H3."""

from .algebra import E1, E2, E3, IDENTITY, AlgebraVector, GroupElement, LorentzForce, bracket, group_mul
from .errors import ClassificationError, DomainError, NumericalError
from .oracle import IntegrationConfig, geodesic_magnetic_classifier, integrate_full, integrate_reduced, monitor_invariants
from .quartic import Case, QuarticAnalysis, classify, discriminant, quartic_roots, reduced_params
from .solver import period_and_image, reconstruct_yz, solve, solve_canonical, solve_exact, solve_x
from .specfun import ellip_F, ellip_K, inv_cn, inv_sn, jacobi_sncndn
from .symmetry import IsometryScaling, Isotropy, act_on_curve, act_on_force, canonicalize, isotropy_description, orbit_equal
from .trajectory import InitialVelocity, Interval, Trajectory
from .variational import LagrangianSpec, OneForm, default_theta, el_residual, explicit_theta, lagrangian_eval, theta_check

__version__ = "0.1.0"

__all__ = [
    "E1",
    "E2",
    "E3",
    "IDENTITY",
    "AlgebraVector",
    "GroupElement",
    "LorentzForce",
    "bracket",
    "group_mul",
    "ClassificationError",
    "DomainError",
    "NumericalError",
    "IntegrationConfig",
    "geodesic_magnetic_classifier",
    "integrate_full",
    "integrate_reduced",
    "monitor_invariants",
    "Case",
    "QuarticAnalysis",
    "classify",
    "discriminant",
    "quartic_roots",
    "reduced_params",
    "period_and_image",
    "reconstruct_yz",
    "solve",
    "solve_canonical",
    "solve_exact",
    "solve_x",
    "ellip_F",
    "ellip_K",
    "inv_cn",
    "inv_sn",
    "jacobi_sncndn",
    "IsometryScaling",
    "Isotropy",
    "act_on_curve",
    "act_on_force",
    "canonicalize",
    "isotropy_description",
    "orbit_equal",
    "InitialVelocity",
    "Interval",
    "Trajectory",
    "LagrangianSpec",
    "OneForm",
    "default_theta",
    "el_residual",
    "explicit_theta",
    "lagrangian_eval",
    "theta_check",
]
