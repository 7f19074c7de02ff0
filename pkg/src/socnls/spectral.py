"""Fourier symbol of the linear operator, its diagonalization and resonances.

The operator pairs -Laplacian/2 on the diagonal with the off-diagonal
spin-orbit coupling nu D-+; its symbol L(xi) is a Hermitian 2x2 matrix with
branches |xi|^2/2 +- nu |xi|, minimized at |xi| = nu where the lower branch
touches -nu^2/2 (the resonance circle).
"""
from dataclasses import dataclass

import numpy as np

from .besselj import bessel_j_signed
from .errors import DegenerateFrequencyError, DomainError, OffLatticeError
from .functional import apply_dpm, laplacian
from .grid2d import FieldPair2D

SCAN_POINTS = 10000


@dataclass
class SymbolEval:
    xi: tuple
    matrix: np.ndarray
    branches: tuple
    unitary: np.ndarray


def symbol(xi, nu):
    """Symbol matrix, branch eigenvalues and diagonalizing unitary at xi != 0.

    Columns of the unitary are orthonormal eigenvectors, (phase, 1)/sqrt(2)
    for the upper branch and (-phase, 1)/sqrt(2) for the lower one, where
    phase = i (xi_x - i xi_y)/|xi| is the off-diagonal direction.
    """
    xi_x, xi_y = float(xi[0]), float(xi[1])
    k = np.hypot(xi_x, xi_y)
    if k == 0.0:
        raise DegenerateFrequencyError(
            "diagonalization undefined at xi = 0 (symbol vanishes)")
    b = nu * 1j * (xi_x - 1j * xi_y)
    mat = np.array([[0.5 * k**2, b], [np.conj(b), 0.5 * k**2]])
    upper = 0.5 * k**2 + nu * k
    lower = 0.5 * k**2 - nu * k
    phase = 1j * (xi_x - 1j * xi_y) / k
    unitary = np.array([[phase, -phase], [1.0, 1.0]]) / np.sqrt(2.0)
    return SymbolEval(xi=(xi_x, xi_y), matrix=mat, branches=(upper, lower),
                      unitary=unitary)


def branch_values(k_abs, nu):
    """Both dispersion branches as arrays over |xi| values."""
    k_abs = np.asarray(k_abs, dtype=np.float64)
    return 0.5 * k_abs**2 + nu * k_abs, 0.5 * k_abs**2 - nu * k_abs


def scan_radii(nu, points=SCAN_POINTS):
    return (np.arange(1, points + 1) / points) * 4.0 * nu


def spectrum_bottom(nu):
    """-nu^2/2, cross-checked against a dense scan of the lower branch."""
    if not nu > 0:
        raise ValueError(f"nu must be positive, got {nu}")
    exact = -0.5 * nu**2
    radii = scan_radii(nu)
    _, lower = branch_values(radii, nu)
    if abs(lower.min() - exact) > 1e-12 * max(1.0, abs(exact)):
        raise AssertionError("lower-branch scan disagrees with -nu^2/2")
    return exact


def scan_minimum_location(nu):
    radii = scan_radii(nu)
    _, lower = branch_values(radii, nu)
    return radii[int(np.argmin(lower))]


def apply_linear(U, nu):
    """Discrete operator pair (-Lap/2 psi+ + nu D- psi-, -Lap/2 psi- - nu D+ psi+)."""
    g = U.grid
    out_p = -0.5 * laplacian(U.psi_plus, g) + nu * apply_dpm(U.psi_minus, "-", g)
    out_m = -0.5 * laplacian(U.psi_minus, g) - nu * apply_dpm(U.psi_plus, "+", g)
    return FieldPair2D(g, out_p, out_m, check=False)


def _lattice_check(k, grid):
    base = np.pi / grid.half_length
    for comp in k:
        ratio = comp / base
        if abs(ratio - round(ratio)) > 1e-9:
            raise OffLatticeError(
                f"frequency {k} is not an integer multiple of pi/L = {base}")


def resonance_wave(k, branch, grid):
    """Planar-wave eigenpair (1, +-|k|/(i k1 + k2)) e^{i k.z} on the grid."""
    k1, k2 = float(k[0]), float(k[1])
    kk = np.hypot(k1, k2)
    if kk == 0.0:
        raise OffLatticeError("k must be nonzero")
    _lattice_check((k1, k2), grid)
    if branch not in ("+", "-"):
        raise ValueError(f"branch must be '+' or '-', got {branch!r}")
    sign = 1.0 if branch == "+" else -1.0
    wave = np.exp(1j * (k1 * grid.x + k2 * grid.y))
    ratio = sign * kk / (1j * k1 + k2)
    return FieldPair2D(grid, wave, ratio * wave, check=False)


def resonance_eigenvalue(k, branch, nu):
    kk = np.hypot(float(k[0]), float(k[1]))
    return 0.5 * kk**2 + (nu if branch == "+" else -nu) * kk


def eigenrelation_residual(k, branch, nu, grid):
    """Relative residual of (L - E) on the planar wave (should be ~ 1e-15)."""
    W = resonance_wave(k, branch, grid)
    LW = apply_linear(W, nu)
    ev = resonance_eigenvalue(k, branch, nu)
    num = np.abs(LW.psi_plus - ev * W.psi_plus).max()
    num = max(num, np.abs(LW.psi_minus - ev * W.psi_minus).max())
    den = max(np.abs(W.psi_plus).max(), np.abs(W.psi_minus).max()) * max(abs(ev), 1.0)
    return num / den


def eigenvalue_absence_probe(nu, mu_values, tol=1e-8):
    """True when no mu makes a branch vanish on an open interval of the scan.

    Operational form of the no-point-spectrum statement: each branch minus mu
    can only have isolated zeros, never a plateau.
    """
    radii = scan_radii(nu)
    upper, lower = branch_values(radii, nu)
    for mu in mu_values:
        for branch in (upper, lower):
            small = np.abs(branch - mu) <= tol
            if np.any(small[:-1] & small[1:]):
                return False
    return True


def jacobi_anger_check(nu, phi, r_max, terms):
    """Truncated expansion of e^{i nu r cos(theta - phi)} in Bessel harmonics.

    Returns (max pointwise error of the scalar identity, max componentwise
    error of the regrouped semi-vortex form of the resonance plane wave) over
    a polar sample set.
    """
    if terms < nu * r_max + 20:
        raise DomainError(
            f"terms = {terms} too small for nu r_max = {nu * r_max} (tail control)")
    r = np.linspace(0.0, r_max, 81)
    theta = np.linspace(0.0, 2.0 * np.pi, 33, endpoint=False)
    rr, tt = np.meshgrid(r, theta, indexing="ij")
    target = np.exp(1j * nu * rr * np.cos(tt - phi))

    orders = np.arange(-terms, terms + 1)
    j_vals = {int(l): bessel_j_signed(int(l), nu * r) for l in
              range(-terms, terms + 2)}
    acc = np.zeros_like(target)
    comp_plus = np.zeros_like(target)
    comp_minus = np.zeros_like(target)
    for m in orders:
        jm = j_vals[int(m)][:, None]
        acc += (1j**m) * np.exp(1j * m * (tt - phi)) * jm
        phase = (1j**m) * np.exp(-1j * m * phi)
        comp_plus += phase * np.exp(1j * m * tt) * jm
        comp_minus += phase * (-np.exp(1j * (m + 1) * tt)) * j_vals[int(m) + 1][:, None]
    scalar_err = np.abs(acc - target).max()
    # plane-wave eigenvector (1, i e^{i phi}) e^{i k.z} with |k| = nu
    vec_err = max(np.abs(comp_plus - target).max(),
                  np.abs(comp_minus - 1j * np.exp(1j * phi) * target).max())
    return scalar_err, vec_err
