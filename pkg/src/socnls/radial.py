"""Reduced radial problem for windings (m, m+1): energy, residual, solver.

Discretization: second-order finite differences on the half-shifted uniform
grid r_j = (j + 1/2) dr with Dirichlet truncation at r_max.  The 1/r terms
need no special casing (r_{-1/2} = 0 closes the flux form at the origin).
All operators are assembled as sparse matrices so the discrete energy, its
exact gradient and the equation residual share one discretization.
"""
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import IterationLimitError, StepControlError
from .functional import EnergyBreakdown
from .kernels import ksum


class RadialGrid:
    """Half-shifted uniform grid on (0, r_max] with weights w_j = r_j dr."""

    def __init__(self, r_max, n):
        if not r_max > 0 or n <= 0:
            raise ValueError("r_max and n must be positive")
        self.r_max = float(r_max)
        self.n = int(n)
        self.dr = self.r_max / self.n
        self.r = (np.arange(self.n) + 0.5) * self.dr
        self.w = self.r * self.dr

    def __eq__(self, other):
        return (isinstance(other, RadialGrid) and other.n == self.n
                and other.r_max == self.r_max)

    def __hash__(self):
        return hash((self.r_max, self.n))

    def __repr__(self):
        return f"RadialGrid(r_max={self.r_max}, n={self.n})"


class RadialPair:
    """Complex radial profiles (v_plus, v_minus) with windings (m, m+1)."""

    def __init__(self, grid, m, v_plus, v_minus):
        self.grid = grid
        self.m = int(m)
        self.v_plus = np.asarray(v_plus, dtype=np.complex128)
        self.v_minus = np.asarray(v_minus, dtype=np.complex128)
        if self.v_plus.shape != (grid.n,) or self.v_minus.shape != (grid.n,):
            raise ValueError("profile arrays do not conform to the radial grid")

    def copy(self):
        return RadialPair(self.grid, self.m, self.v_plus.copy(), self.v_minus.copy())


def inner_r(grid, a, b):
    """Real weighted pairing re sum w_j conj(a_j) b_j."""
    return ksum((np.conj(a) * b).real * grid.w)


def norm_r(grid, a):
    return ksum(np.abs(a) ** 2 * grid.w) ** 0.5


def radial_mass(P):
    dens = (np.abs(P.v_plus) ** 2 + np.abs(P.v_minus) ** 2) * P.grid.w
    return ksum(dens)


def _kinetic_matrix(grid, l):
    """Flux-form discretization of -(1/r)(r v')' + l^2/r^2, Dirichlet at r_max."""
    n, dr, r = grid.n, grid.dr, grid.r
    r_half_up = r + 0.5 * dr
    r_half_dn = r - 0.5 * dr
    r_half_dn[0] = 0.0  # origin closure
    diag = (r_half_up + r_half_dn) / (dr**2 * r) + (l / r) ** 2
    diag[-1] += r_half_up[-1] / (dr**2 * r[-1])  # ghost v_n = -v_{n-1}
    upper = -r_half_up[:-1] / (dr**2 * r[:-1])
    lower = -r_half_dn[1:] / (dr**2 * r[1:])
    return sp.diags([lower, diag, upper], [-1, 0, 1], format="csr")


def _weighted_d1_matrix(grid, exponent):
    """Central difference r^(-e) d/dr (r^e .) with parity/Dirichlet ghosts."""
    n, dr, r = grid.n, grid.dr, grid.r
    c = 1.0 / (2.0 * dr)
    ratio_up = (r[1:] / r[:-1]) ** exponent   # phi_{j+1}/phi_j
    ratio_dn = (r[:-1] / r[1:]) ** exponent   # phi_{j-1}/phi_j
    upper = c * ratio_up
    lower = -c * ratio_dn
    diag = np.zeros(n)
    diag[0] = -c                               # phi_{-1} v_{-1} = phi_0 v_0
    r_ghost = (n + 0.5) * dr
    diag[-1] = -c * (r_ghost / r[-1]) ** exponent  # v_n = -v_{n-1}
    return sp.diags([lower, diag, upper], [-1, 0, 1], format="csr")


def _weighted_adjoint(grid, mat):
    """Adjoint with respect to the weighted inner product."""
    w = grid.w
    return sp.diags(1.0 / w) @ mat.T.tocsr() @ sp.diags(w)


class RadialOperators:
    """Per-(grid, m) sparse operators shared by energy, gradient, residual."""

    _cache = {}

    def __new__(cls, grid, m):
        key = (grid, m)
        if key not in cls._cache:
            self = super().__new__(cls)
            self.grid = grid
            self.m = m
            self.k_plus = _kinetic_matrix(grid, abs(m))
            self.k_minus = _kinetic_matrix(grid, abs(m + 1))
            self.t_plus = _weighted_d1_matrix(grid, m + 1)   # acts on v_minus
            self.t_minus = _weighted_d1_matrix(grid, -m)     # acts on v_plus
            self.t_plus_adj = _weighted_adjoint(grid, self.t_plus).tocsr()
            self.t_minus_adj = _weighted_adjoint(grid, self.t_minus).tocsr()
            cls._cache[key] = self
        return cls._cache[key]


def energy_m(P, p):
    """Energy breakdown of the reduced functional (no 2 pi factor).

    The quartic cross term carries coefficient 2 lambda_zero, which is the
    convention under which the reduced energy of (v+, v-) equals 1/(2 pi)
    times the 2D energy of the lifted pair.
    """
    ops = RadialOperators(P.grid, P.m)
    vp, vm = P.v_plus, P.v_minus
    kinetic = 0.25 * (inner_r(P.grid, ops.k_plus @ vp, vp)
                      + inner_r(P.grid, ops.k_minus @ vm, vm))
    vso = 0.5 * p.nu * (inner_r(P.grid, ops.t_plus @ vm, vp)
                        - inner_r(P.grid, ops.t_minus @ vp, vm))
    ap = np.abs(vp) ** 2
    am = np.abs(vm) ** 2
    nonlinear = 0.25 * ksum(
        (p.lambda_plus * ap**2 + p.lambda_minus * am**2
         + 2.0 * p.lambda_zero * ap * am) * P.grid.w
    )
    elin = kinetic + vso
    total = elin - nonlinear
    return EnergyBreakdown(kinetic=kinetic, vso=vso, nonlinear=nonlinear,
                           total=total, elin=elin)


def gradient_m(P, p):
    """Exact discrete gradient pair of the reduced energy."""
    ops = RadialOperators(P.grid, P.m)
    vp, vm = P.v_plus, P.v_minus
    ap = np.abs(vp) ** 2
    am = np.abs(vm) ** 2
    gp = (0.5 * (ops.k_plus @ vp)
          + 0.5 * p.nu * (ops.t_plus @ vm - ops.t_minus_adj @ vm)
          - (p.lambda_plus * ap + p.lambda_zero * am) * vp)
    gm = (0.5 * (ops.k_minus @ vm)
          + 0.5 * p.nu * (ops.t_plus_adj @ vp - ops.t_minus @ vp)
          - (p.lambda_minus * am + p.lambda_zero * ap) * vm)
    return gp, gm


def se_residual_m(P, omega, p):
    """L2_r norm of both stationary-equation residuals (solver operators)."""
    if not np.isfinite(omega):
        raise ValueError("omega must be finite")
    gp, gm = gradient_m(P, p)
    rp = gp + omega * P.v_plus
    rm = gm + omega * P.v_minus
    dens = (np.abs(rp) ** 2 + np.abs(rm) ** 2) * P.grid.w
    return ksum(dens) ** 0.5


@dataclass
class SolveOptions:
    tol: float = 1e-8
    max_iter: int = 200000
    energy_plateau_tol: float = 1e-12
    plateau_window: int = 10
    precond_shift: float = 1.0
    tau_init: float = 0.5
    tau_max: float = 50.0
    record_every: int = 1
    seed: str = "gaussian"


@dataclass
class SolveResult:
    pair: object
    energy: EnergyBreakdown
    mass: float
    omega: float
    residual: float
    iterations: int
    trace: list = field(default_factory=list)
    warnings: list = field(default_factory=list)


def seed_profile(m, grid, kind="gaussian"):
    """Default seed with the correct vanishing orders at the origin."""
    r = grid.r
    if kind != "gaussian":
        raise ValueError(f"unknown seed kind {kind!r}")
    vp = r ** abs(m) * np.exp(-(r**2))
    vm = -(r ** abs(m + 1)) * np.exp(-(r**2))
    return RadialPair(grid, m, vp.astype(np.complex128), vm.astype(np.complex128))


def _project_mass(P, rho):
    m = radial_mass(P)
    s = (rho / m) ** 0.5
    P.v_plus *= s
    P.v_minus *= s
    return P


def solve_semivortex(m, rho, p, grid, opts=None, seed_pair=None):
    """Mass-constrained minimization of the reduced energy.

    Preconditioned projected gradient flow with Barzilai-Borwein steps and
    a monotone (backtracking) safeguard; the Lagrange multiplier is the
    least-squares omega and the returned residual is se_residual_m.
    """
    opts = opts or SolveOptions()
    if grid.dr > 1.0 / (10.0 * p.nu):
        warnings.warn("radial grid does not resolve the nu oscillation scale")
    if seed_pair is not None:
        P = RadialPair(grid, m, seed_pair.v_plus.copy(), seed_pair.v_minus.copy())
    else:
        P = seed_profile(m, grid, opts.seed)
    _project_mass(P, rho)

    ops = RadialOperators(grid, m)
    shift = opts.precond_shift
    prec_p = spla.factorized(
        (sp.identity(grid.n) + shift * 0.5 * ops.k_plus).tocsc().astype(np.complex128))
    prec_m = spla.factorized(
        (sp.identity(grid.n) + shift * 0.5 * ops.k_minus).tocsc().astype(np.complex128))

    def eval_state(P):
        e = energy_m(P, p)
        gp, gm = gradient_m(P, p)
        omega = -(inner_r(grid, gp, P.v_plus) + inner_r(grid, gm, P.v_minus)) / rho
        rp = gp + omega * P.v_plus
        rm = gm + omega * P.v_minus
        res = (ksum((np.abs(rp) ** 2 + np.abs(rm) ** 2) * grid.w)) ** 0.5
        dp = prec_p(rp)
        dm = prec_m(rm)
        return e, omega, res, (dp, dm)

    e, omega, res, d = eval_state(P)
    trace = [(0, e.total, res)]
    tau = opts.tau_init
    plateau = 0
    it = 0
    while it < opts.max_iter:
        it += 1
        accepted = False
        for _ in range(60):
            trial = RadialPair(grid, m, P.v_plus - tau * d[0], P.v_minus - tau * d[1])
            _project_mass(trial, rho)
            e_t = energy_m(trial, p)
            if e_t.total <= e.total + 1e-12 * max(1.0, abs(e.total)):
                accepted = True
                break
            tau *= 0.5
        if not accepted:
            raise StepControlError(
                f"no energy-decreasing step at iteration {it} (residual {res:.3e})"
            )
        sp_arr = trial.v_plus - P.v_plus
        sm_arr = trial.v_minus - P.v_minus
        P = trial
        e_prev = e.total
        e, omega, res, d_new = eval_state(P)
        if it % opts.record_every == 0:
            trace.append((it, e.total, res))
        yp = d_new[0] - d[0]
        ym = d_new[1] - d[1]
        ss = inner_r(grid, sp_arr, sp_arr) + inner_r(grid, sm_arr, sm_arr)
        sy = inner_r(grid, sp_arr, yp) + inner_r(grid, sm_arr, ym)
        if sy > 0:
            tau = min(max(ss / sy, 1e-6), opts.tau_max)
        else:
            tau = min(tau * 2.0, opts.tau_max)
        d = d_new
        if abs(e.total - e_prev) < opts.energy_plateau_tol * max(1.0, abs(e.total)):
            plateau += 1
        else:
            plateau = 0
        if res <= opts.tol and plateau >= opts.plateau_window:
            break
    else:
        raise IterationLimitError(
            f"semivortex solve m={m} rho={rho} did not converge "
            f"(residual {res:.3e} after {it} iterations)", trace)

    warns = []
    tail = grid.r > grid.r_max - min(10.0, 0.1 * grid.r_max)
    amp = max(np.abs(P.v_plus).max(), np.abs(P.v_minus).max())
    tail_amp = max(np.abs(P.v_plus[tail]).max(), np.abs(P.v_minus[tail]).max())
    if tail_amp > 1e-8 * amp:
        msg = (f"truncation warning: tail amplitude {tail_amp:.3e} exceeds "
               f"1e-8 of max amplitude {amp:.3e}")
        warnings.warn(msg)
        warns.append(msg)
    return SolveResult(pair=P, energy=e, mass=radial_mass(P), omega=omega,
                       residual=res, iterations=it, trace=trace, warnings=warns)


def subadditivity_probe_m(m, rho, eta, p, grid, opts=None):
    """Energies (E_m(rho), E_m(eta), E_m(rho - eta)) from three solves."""
    if not 0 < eta < rho:
        raise ValueError("eta must lie strictly between 0 and rho")
    e_rho = solve_semivortex(m, rho, p, grid, opts).energy.total
    e_eta = solve_semivortex(m, eta, p, grid, opts).energy.total
    e_rest = solve_semivortex(m, rho - eta, p, grid, opts).energy.total
    return e_rho, e_eta, e_rest


def sample_profiles(P, grid2d):
    """Cubic-spline samples of both radial profiles over a 2D grid.

    Returns (prof_plus, prof_minus, theta): profiles without angular phases
    (zero outside r_max and, for nonzero winding, at the origin) plus the
    polar angle array.
    """
    from scipy.interpolate import CubicSpline

    rad = np.hypot(grid2d.x, grid2d.y)
    theta = np.arctan2(grid2d.y, grid2d.x)
    out = []
    for v, l in ((P.v_plus, P.m), (P.v_minus, P.m + 1)):
        nodes = np.concatenate(([0.0], P.grid.r))
        origin = v[0] if l == 0 else 0.0
        vals = np.concatenate(([origin], v))
        spline_re = CubicSpline(nodes, vals.real)
        spline_im = CubicSpline(nodes, vals.imag)
        prof = np.where(rad <= P.grid.r_max,
                        spline_re(rad) + 1j * spline_im(rad), 0.0)
        if l != 0:
            prof = np.where(rad > 0, prof, 0.0)
        out.append(prof)
    return out[0], out[1], theta


def lift_to_2d(P, grid2d):
    """Sample (e^{im theta} v+, e^{i(m+1) theta} v-) on a 2D grid."""
    from .grid2d import FieldPair2D

    prof_p, prof_m, theta = sample_profiles(P, grid2d)
    return FieldPair2D(grid2d,
                       prof_p * np.exp(1j * P.m * theta),
                       prof_m * np.exp(1j * (P.m + 1) * theta), check=False)
