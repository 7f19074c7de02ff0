"""Mass-constrained 2D minimization without symmetry assumptions.

Projected gradient flow on the mass sphere with a semi-implicit spectral
preconditioner (1 + c k^2 / 2)^{-1} applied in Fourier space, Barzilai-
Borwein steps and a monotone backtracking safeguard.  The Lagrange
multiplier omega is the least-squares value, so the reported residual is
exactly the stationary-equation defect.
"""
import warnings
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from .errors import InvalidFieldError, IterationLimitError, StepControlError
from .functional import energy, energy_gradient, mass, pair_inner, quad
from .grid2d import FieldPair2D
from .kernels import ksum
from .radial import SolveResult


@dataclass
class Solve2DOptions:
    tol: float = 1e-8
    max_iter: int = 100000
    energy_plateau_tol: float = 1e-12
    plateau_window: int = 10
    precond_shift: float = 1.0
    tau_init: float = 0.5
    tau_max: float = 50.0
    rng_seed: int = 7
    record_every: int = 1


def _project_mass(U, rho):
    s = (rho / mass(U)) ** 0.5
    return FieldPair2D(U.grid, s * U.psi_plus, s * U.psi_minus, check=False)


def _semivortex_profiles(grid, m, width=3.0):
    r = np.hypot(grid.x, grid.y)
    theta = np.arctan2(grid.y, grid.x)
    env = np.exp(-(r / width) ** 2)
    phi_p = r ** abs(m) * env
    phi_m = r ** abs(m + 1) * env
    return r, theta, phi_p, phi_m


def seed_field(grid, rho, kind, rng_seed=7):
    """Initial pair: 'gaussian', 'semivortex:m', 'mixedmode:m:eta', 'random'."""
    parts = str(kind).split(":")
    name = parts[0]
    if name == "gaussian":
        r = np.hypot(grid.x, grid.y)
        g = np.exp(-(r / 2.0) ** 2).astype(np.complex128)
        U = FieldPair2D(grid, g, -0.5 * g, check=False)
    elif name == "semivortex":
        m = int(parts[1]) if len(parts) > 1 else 0
        r, theta, phi_p, phi_m = _semivortex_profiles(grid, m)
        U = FieldPair2D(grid, phi_p * np.exp(1j * m * theta),
                        -phi_m * np.exp(1j * (m + 1) * theta), check=False)
    elif name == "mixedmode":
        m = int(parts[1]) if len(parts) > 1 else 0
        eta = float(parts[2]) if len(parts) > 2 else np.pi / 4.0
        r, theta, phi_p, phi_m = _semivortex_profiles(grid, m)
        c, s = np.cos(eta), np.sin(eta)
        fp = (c * phi_p * np.exp(1j * m * theta)
              - s * (-phi_m) * np.exp(-1j * (m + 1) * theta))
        fm = (c * (-phi_m) * np.exp(1j * (m + 1) * theta)
              + s * phi_p * np.exp(-1j * m * theta))
        U = FieldPair2D(grid, fp, fm, check=False)
    elif name == "random":
        rng = np.random.default_rng(rng_seed)
        shape = (grid.n, grid.n)
        fields = []
        for _ in range(2):
            noise = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
            smooth = np.fft.ifft2(np.exp(-grid.k2) * np.fft.fft2(noise))
            fields.append(smooth)
        U = FieldPair2D(grid, fields[0], fields[1], check=False)
    else:
        raise ValueError(f"unknown seed kind {kind!r}")
    return _project_mass(U, rho)


def se_residual_2d(U, omega, p):
    """L2 norm of the stationary-equation defect for both components."""
    U.validate()
    if not np.isfinite(omega):
        raise ValueError("omega must be finite")
    G = energy_gradient(U, p)
    rp = G.psi_plus + omega * U.psi_plus
    rm = G.psi_minus + omega * U.psi_minus
    return quad(U.grid, np.abs(rp) ** 2 + np.abs(rm) ** 2) ** 0.5


def solve_groundstate(rho, p, grid, seed="semivortex:0", opts=None, seed_pair=None):
    """Minimize the energy at mass rho; returns a SolveResult."""
    opts = opts or Solve2DOptions()
    if seed_pair is not None:
        U = _project_mass(seed_pair.copy(), rho)
    else:
        U = seed_field(grid, rho, seed, opts.rng_seed)

    prec = 1.0 / (1.0 + opts.precond_shift * 0.5 * grid.k2)

    def precondition(field):
        return np.fft.ifft2(prec * np.fft.fft2(field))

    def eval_state(U):
        e = energy(U, p)
        G = energy_gradient(U, p)
        omega = -pair_inner(G, U) / rho
        R = FieldPair2D(grid, G.psi_plus + omega * U.psi_plus,
                        G.psi_minus + omega * U.psi_minus, check=False)
        res = quad(grid, np.abs(R.psi_plus) ** 2 + np.abs(R.psi_minus) ** 2) ** 0.5
        D = FieldPair2D(grid, precondition(R.psi_plus),
                        precondition(R.psi_minus), check=False)
        return e, omega, res, D

    e, omega, res, D = eval_state(U)
    trace = [(0, e.total, res)]
    tau = opts.tau_init
    plateau = 0
    it = 0
    while it < opts.max_iter:
        it += 1
        accepted = False
        for _ in range(60):
            trial = _project_mass(U - tau * D, rho)
            e_t = energy(trial, p)
            if e_t.total <= e.total + 1e-12 * max(1.0, abs(e.total)):
                accepted = True
                break
            tau *= 0.5
        if not accepted:
            raise StepControlError(
                f"no energy-decreasing step at iteration {it} (residual {res:.3e})")
        S = trial - U
        U = trial
        e_prev = e.total
        e, omega, res, D_new = eval_state(U)
        if it % opts.record_every == 0:
            trace.append((it, e.total, res))
        Y = D_new - D
        ss = pair_inner(S, S)
        sy = pair_inner(S, Y)
        if sy > 0:
            tau = min(max(ss / sy, 1e-6), opts.tau_max)
        else:
            tau = min(tau * 2.0, opts.tau_max)
        D = D_new
        if abs(e.total - e_prev) < opts.energy_plateau_tol * max(1.0, abs(e.total)):
            plateau += 1
        else:
            plateau = 0
        if res <= opts.tol and plateau >= opts.plateau_window:
            break
    else:
        raise IterationLimitError(
            f"2D solve rho={rho} did not converge "
            f"(residual {res:.3e} after {it} iterations)", trace)

    warns = []
    ring = (np.abs(U.psi_plus) ** 2 + np.abs(U.psi_minus) ** 2)
    boundary_mass = grid.cell_area * (
        ksum(ring[0, :]) + ksum(ring[-1, :])
        + ksum(ring[1:-1, 0]) + ksum(ring[1:-1, -1]))
    if boundary_mass > 1e-10:
        msg = f"truncation warning: boundary mass {boundary_mass:.3e} > 1e-10"
        warnings.warn(msg)
        warns.append(msg)
    return SolveResult(pair=U, energy=e, mass=mass(U), omega=omega,
                       residual=res, iterations=it, trace=trace, warnings=warns)


def best_over_seeds(rho, p, grid, seeds=None, opts=None):
    """Run the seed protocol and keep the lowest-energy converged result."""
    seeds = seeds or ["semivortex:0", "semivortex:-1", "mixedmode:0:0.785398",
                      "gaussian"]
    best = None
    for s in seeds:
        result = solve_groundstate(rho, p, grid, seed=s, opts=opts)
        if best is None or result.energy.total < best.energy.total:
            best = result
    return best


Structure = namedtuple("Structure", ["kind", "m"])

N_RAYS = 64


def _bilinear(field, grid, px, py):
    """Periodic bilinear sampling of a complex field at points (px, py)."""
    n, h, L = grid.n, grid.spacing, grid.half_length
    fx = (px + L) / h
    fy = (py + L) / h
    ix = np.floor(fx).astype(int)
    iy = np.floor(fy).astype(int)
    tx = fx - ix
    ty = fy - iy
    ix0 = np.mod(ix, n)
    iy0 = np.mod(iy, n)
    ix1 = np.mod(ix + 1, n)
    iy1 = np.mod(iy + 1, n)
    return ((1 - tx) * (1 - ty) * field[ix0, iy0]
            + tx * (1 - ty) * field[ix1, iy0]
            + (1 - tx) * ty * field[ix0, iy1]
            + tx * ty * field[ix1, iy1])


def angular_spectrum(U, n_radii=None):
    """Mass per angular harmonic for each component, about the density centroid.

    Returns (orders, mass_plus, mass_minus): orders are the harmonic indices
    k of e^{ik theta} resolvable on the ray set.
    """
    g = U.grid
    dens = np.abs(U.psi_plus) ** 2 + np.abs(U.psi_minus) ** 2
    total = dens.sum()
    if total == 0.0:
        raise InvalidFieldError("classifier called on the zero pair")
    cx = (dens * g.x).sum() / total
    cy = (dens * g.y).sum() / total

    n_radii = n_radii or g.n // 2
    r_max = 0.9 * g.half_length
    radii = (np.arange(n_radii) + 0.5) * (r_max / n_radii)
    angles = 2.0 * np.pi * np.arange(N_RAYS) / N_RAYS
    px = cx + radii[:, None] * np.cos(angles)[None, :]
    py = cy + radii[:, None] * np.sin(angles)[None, :]

    out = []
    for field in (U.psi_plus, U.psi_minus):
        rays = _bilinear(field, g, px, py)
        coeffs = np.fft.fft(rays, axis=1) / N_RAYS
        out.append((np.abs(coeffs) ** 2 * radii[:, None]).sum(axis=0))
    orders = np.fft.fftfreq(N_RAYS, d=1.0 / N_RAYS).astype(int)
    return orders, out[0], out[1]


def structure_classifier(U):
    """Classify a pair as semivortex_like(m), mixed_like or other.

    A single winding pair (m, m+1) carrying > 99% of the sampled mass gives
    semivortex_like; the union with its conjugate pair (-(m+1), -m) gives
    mixed_like; anything broader is other.
    """
    orders, mp, mm = angular_spectrum(U)
    total = mp.sum() + mm.sum()
    index = {int(k): i for i, k in enumerate(orders)}
    half = N_RAYS // 2

    def pair_mass(m):
        if m not in index or (m + 1) not in index:
            return 0.0
        return mp[index[m]] + mm[index[m + 1]]

    best_m, best_val = None, -1.0
    for m in range(-half, half - 1):
        v = pair_mass(m)
        if v > best_val:
            best_m, best_val = m, v
    if best_val > 0.99 * total:
        return Structure("semivortex_like", best_m)

    best_m2, best_val2 = None, -1.0
    for m in range(-half + 1, half - 1):
        v = pair_mass(m) + pair_mass(-(m + 1))
        if v > best_val2:
            best_m2, best_val2 = m, v
    if best_val2 > 0.99 * total:
        return Structure("mixed_like", best_m2)
    return Structure("other", None)
