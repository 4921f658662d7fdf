"""Radial semilinear elliptic problems -Delta_g u = lambda f(u) on geodesic
balls of Riemannian models: minimal-branch continuation, extremal parameters,
semistability certification, and weighted Hardy inequalities."""

from ._gelfand import (  # noqa: F401
    Branch,
    BranchPoint,
    DomainError,
    EvalOverflowError,
    GeometryError,
    HypothesisError,
    NoConvergence,
    Nonlinearity,
    NonlinearityKind,
    RiemannianModel,
    SingularJacobian,
    SpaceForm,
    ValidityError,
    closed_form_extremal,
    continue_branch,
    critical_radii,
    delta_psi,
    hardy_constant,
    hardy_verify,
    make_custom_model,
    make_exp_model,
    make_gelfand_classic,
    make_power_classic,
    make_power_model,
    make_space_form,
    phi,
    power_semistability_conditions,
    principal_eigenvalue,
    regularity_exponents,
    sphere_area,
    sup_phi_over_psi,
    verify_extremal,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
