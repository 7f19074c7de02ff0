"""Mixed-mode family built from a semi-vortex profile when all lambdas agree.

f = cos(eta) (e^{im theta} phi+, e^{i(m+1) theta} phi-)
  + sin(eta) (-e^{-i(m+1) theta} conj phi-, e^{-im theta} conj phi+)

shares the pointwise density, all energy components, the mass and the
stationary equation (with the same omega) with the semi-vortex it is built
from; verify_mixed measures every one of those identities.
"""
from dataclasses import dataclass

import numpy as np

from .errors import UnequalLambdaError
from .functional import energy, mass
from .grid2d import FieldPair2D
from .radial import lift_to_2d, sample_profiles


def build_mixed(P, eta, grid, p):
    """Sample the mixed pair on the 2D grid; requires equal lambdas."""
    if not p.equal_lambdas:
        raise UnequalLambdaError(
            "mixed mode needs lambda_plus = lambda_minus = lambda_zero, got "
            f"({p.lambda_plus}, {p.lambda_minus}, {p.lambda_zero})")
    prof_p, prof_m, theta = sample_profiles(P, grid)
    m = P.m
    c, s = np.cos(eta), np.sin(eta)
    f_plus = (c * prof_p * np.exp(1j * m * theta)
              - s * np.conj(prof_m) * np.exp(-1j * (m + 1) * theta))
    f_minus = (c * prof_m * np.exp(1j * (m + 1) * theta)
               + s * np.conj(prof_p) * np.exp(-1j * m * theta))
    return FieldPair2D(grid, f_plus, f_minus, check=False)


@dataclass
class MixedReport:
    kinetic_rel: float
    vso_rel: float
    nonlinear_rel: float
    total_rel: float
    mass_rel: float
    residual_mixed: float
    residual_lifted: float
    ok: bool


def verify_mixed(F, P, omega, p, tol=1e-10, residual_slack=1e-8):
    """Compare the mixed pair against the lifted semi-vortex it came from."""
    from .groundstate import se_residual_2d

    lifted = lift_to_2d(P, F.grid)
    e_mixed = energy(F, p)
    e_lift = energy(lifted, p)
    m_mixed = mass(F)
    m_lift = mass(lifted)

    def rel(a, b):
        return abs(a - b) / max(abs(b), 1e-300)

    scale = max(abs(e_lift.total), abs(e_lift.kinetic), 1e-300)
    report = MixedReport(
        kinetic_rel=abs(e_mixed.kinetic - e_lift.kinetic) / scale,
        vso_rel=abs(e_mixed.vso - e_lift.vso) / scale,
        nonlinear_rel=abs(e_mixed.nonlinear - e_lift.nonlinear) / scale,
        total_rel=abs(e_mixed.total - e_lift.total) / scale,
        mass_rel=rel(m_mixed, m_lift),
        residual_mixed=se_residual_2d(F, omega, p),
        residual_lifted=se_residual_2d(lifted, omega, p),
        ok=False,
    )
    report.ok = (max(report.kinetic_rel, report.vso_rel, report.nonlinear_rel,
                     report.total_rel, report.mass_rel) <= tol
                 and report.residual_mixed <= report.residual_lifted + residual_slack)
    return report


def density_identity_error(F, P):
    """Max pointwise deviation of |f+|^2 + |f-|^2 from the profile density."""
    prof_p, prof_m, _ = sample_profiles(P, F.grid)
    target = np.abs(prof_p) ** 2 + np.abs(prof_m) ** 2
    dens = np.abs(F.psi_plus) ** 2 + np.abs(F.psi_minus) ** 2
    return float(np.abs(dens - target).max())
