"""Cutoff-Bessel trial pair and its energy-deficit certificate.

The pair v_minus = a chi(r/R) J_{m+1}(nu r), v_plus = -(1/nu)((m+1)/r v_minus
+ v_minus') makes the first completed square of the linear energy vanish
identically, so the gap above -nu^2 rho / 4 reduces to one explicit residual
carrying chi' and chi''.  That residual is evaluated in closed form here; a
finite-difference evaluation would drown the O(1/R^2) gap in truncation
error at large R.
"""
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .besselj import bessel_j_signed
from .errors import GridTooSmallError
from .kernels import ksum
from .radial import RadialPair, radial_mass


class Smoothstep:
    """C^2 cutoff: 1 on [0,1], 0 on [2,inf), quintic 6u^5-15u^4+10u^3 between."""

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        u = np.clip(t - 1.0, 0.0, 1.0)
        return 1.0 - (u**3 * (6.0 * u**2 - 15.0 * u + 10.0))

    def deriv(self, t):
        t = np.asarray(t, dtype=np.float64)
        u = t - 1.0
        inside = (u > 0.0) & (u < 1.0)
        u = np.where(inside, u, 0.0)
        return np.where(inside, -(30.0 * u**4 - 60.0 * u**3 + 30.0 * u**2), 0.0)

    def deriv2(self, t):
        t = np.asarray(t, dtype=np.float64)
        u = t - 1.0
        inside = (u > 0.0) & (u < 1.0)
        u = np.where(inside, u, 0.0)
        return np.where(inside, -(120.0 * u**3 - 180.0 * u**2 + 60.0 * u), 0.0)


@dataclass
class WitnessConfig:
    m: int
    rho: float
    R: float
    nu: float = 1.0
    cutoff: object = field(default_factory=Smoothstep)

    def __post_init__(self):
        if not (self.rho > 0 and self.R > 0 and self.nu > 0):
            raise ValueError("rho, R and nu must be positive")


def _profiles(cfg, r, a):
    """All analytic ingredients at radii r for a given amplitude a."""
    chi = cfg.cutoff
    t = r / cfg.R
    x = cfg.nu * r
    jm = bessel_j_signed(cfg.m, x)
    jm1 = bessel_j_signed(cfg.m + 1, x)
    jm2 = bessel_j_signed(cfg.m + 2, x)
    c0 = chi(t)
    c1 = chi.deriv(t)
    c2 = chi.deriv2(t)
    vm = a * c0 * jm1
    vp = -a * c0 * jm - (a / (cfg.nu * cfg.R)) * c1 * jm1
    # v_minus' from chi'/R J_{m+1} + chi nu J_{m+1}' with 2J' = J_m - J_{m+2}
    vm_prime = a * (c1 / cfg.R * jm1 + c0 * cfg.nu * 0.5 * (jm - jm2))
    # second-square residual r^m (r^{-m} v_plus)' - nu v_minus, closed form
    resid = -(a / cfg.nu) * ((c2 / cfg.R**2 + c1 / (cfg.R * r)) * jm1
                             + (cfg.nu / cfg.R) * c1 * (jm - jm2))
    return vm, vp, vm_prime, resid


def witness_amplitude(cfg, grid):
    """Negative a with M(pair) = rho; exact since the mass scales as a^2."""
    vm, vp, _, _ = _profiles(cfg, grid.r, 1.0)
    m_unit = ksum((np.abs(vp) ** 2 + np.abs(vm) ** 2) * grid.w)
    return -((cfg.rho / m_unit) ** 0.5)


def witness_pair(cfg, grid):
    """Trial pair on the grid with mass rho (a < 0)."""
    if grid.r_max < 2.0 * cfg.R:
        raise GridTooSmallError(
            f"grid r_max {grid.r_max} < 2R = {2 * cfg.R}: cutoff tail truncated")
    a = witness_amplitude(cfg, grid)
    vm, vp, _, _ = _profiles(cfg, grid.r, a)
    return RadialPair(grid, cfg.m, vp, vm)


def first_square_norm(cfg, grid):
    """Discrete norm of r^{-(m+1)}(r^{m+1} v_minus)' + nu v_plus.

    Zero by construction; evaluated with the analytic v_minus' so only
    floating-point cancellation remains.
    """
    a = witness_amplitude(cfg, grid)
    vm, vp, vm_prime, _ = _profiles(cfg, grid.r, a)
    q = (cfg.m + 1) / grid.r * vm + vm_prime + cfg.nu * vp
    return ksum(q**2 * grid.w) ** 0.5


def elin_gap(cfg, grid):
    """E^lin + (nu^2/4) rho = (1/4) ||second-square residual||^2_{L2_r}."""
    a = witness_amplitude(cfg, grid)
    _, _, _, resid = _profiles(cfg, grid.r, a)
    return 0.25 * ksum(resid**2 * grid.w)


def witness_nonlinear(cfg, grid, p):
    """Quartic term N of the pair under parameters p (same quadrature)."""
    a = witness_amplitude(cfg, grid)
    vm, vp, _, _ = _profiles(cfg, grid.r, a)
    ap = vp**2
    am = vm**2
    return 0.25 * ksum((p.lambda_plus * ap**2 + p.lambda_minus * am**2
                        + 2.0 * p.lambda_zero * ap * am) * grid.w)


@dataclass
class WitnessReport:
    R: np.ndarray
    a: np.ndarray
    elin_gap: np.ndarray
    nonlinear: np.ndarray
    total_deficit: np.ndarray
    slope_elin_gap: float
    nonlinear_prefactor: np.ndarray   # nonlinear * R^2 / log R
    r_star: float
    r_star_is_extrapolated: bool


def _default_workers():
    try:
        return max(1, int(os.environ.get("SOCNLS_WORKERS", "4")))
    except ValueError:
        return 4


def witness_report(cfg_base, R_list, grid, p, workers=None):
    """Sweep the cutoff scale R and report the certificate quantities.

    Entries are computed concurrently but gathered in list order, so the
    report is independent of scheduling.
    """
    R_arr = np.asarray(sorted(R_list), dtype=np.float64)
    if grid.r_max < 2.0 * R_arr[-1]:
        raise GridTooSmallError(
            f"grid r_max {grid.r_max} < 2 max(R) = {2 * R_arr[-1]}")

    def one(R):
        cfg = WitnessConfig(cfg_base.m, cfg_base.rho, R, cfg_base.nu,
                            cfg_base.cutoff)
        a = witness_amplitude(cfg, grid)
        gap = elin_gap(cfg, grid)
        nl = witness_nonlinear(cfg, grid, p)
        return a, gap, nl

    with ThreadPoolExecutor(max_workers=workers or _default_workers()) as pool:
        rows = list(pool.map(one, R_arr))
    a = np.array([row[0] for row in rows])
    gap = np.array([row[1] for row in rows])
    nl = np.array([row[2] for row in rows])
    deficit = gap - nl

    slope = float(np.polyfit(np.log(R_arr), np.log(gap), 1)[0])
    prefactor = nl * R_arr**2 / np.log(R_arr)

    neg = np.nonzero(deficit < 0.0)[0]
    if neg.size:
        r_star = float(R_arr[neg[0]])
        extrapolated = False
    else:
        # deficit ~ (c1 - c2 log R)/R^2; changes sign near exp(c1/c2)
        c1 = float(np.mean(gap * R_arr**2))
        c2 = float(np.mean(prefactor))
        r_star = float(np.exp(c1 / c2))
        extrapolated = True
    return WitnessReport(R=R_arr, a=a, elin_gap=gap, nonlinear=nl,
                         total_deficit=deficit, slope_elin_gap=slope,
                         nonlinear_prefactor=prefactor, r_star=r_star,
                         r_star_is_extrapolated=extrapolated)
