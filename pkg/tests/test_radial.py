"""Radial operators, energy consistency with 2D, and the semi-vortex solver."""
import numpy as np
import pytest

from socnls.errors import IterationLimitError
from socnls.functional import energy, mass, nonlinear_term
from socnls.grid2d import Grid2D
from socnls.params import Parameters
from socnls.radial import (
    RadialGrid,
    RadialOperators,
    RadialPair,
    SolveOptions,
    energy_m,
    gradient_m,
    inner_r,
    lift_to_2d,
    radial_mass,
    se_residual_m,
    seed_profile,
    solve_semivortex,
    subadditivity_probe_m,
)

P_UNIT = Parameters()


def smooth_pair(grid, m, scale=1.0):
    r = grid.r
    vp = scale * r ** abs(m) * np.exp(-(r**2)) * (1.0 + 0.2j)
    vm = -scale * r ** abs(m + 1) * np.exp(-(r**2)) * (0.8 - 0.3j)
    return RadialPair(grid, m, vp, vm)


def random_pair(grid, m, seed=0):
    rng = np.random.default_rng(seed)
    env = np.exp(-((grid.r - 3.0) ** 2))
    vp = env * (rng.standard_normal(grid.n) + 1j * rng.standard_normal(grid.n))
    vm = env * (rng.standard_normal(grid.n) + 1j * rng.standard_normal(grid.n))
    return RadialPair(grid, m, vp, vm)


def test_kinetic_self_adjoint_and_nonnegative():
    grid = RadialGrid(20.0, 400)
    ops = RadialOperators(grid, 1)
    a = random_pair(grid, 1, 1)
    b = random_pair(grid, 1, 2)
    lhs = inner_r(grid, ops.k_plus @ a.v_plus, b.v_plus)
    rhs = inner_r(grid, a.v_plus, ops.k_plus @ b.v_plus)
    assert abs(lhs - rhs) < 1e-10 * max(abs(lhs), 1.0)
    quad_form = inner_r(grid, ops.k_plus @ a.v_plus, a.v_plus)
    assert quad_form >= 0.0


def test_weighted_adjoint_exact():
    grid = RadialGrid(20.0, 400)
    for m in (-2, 0, 3):
        ops = RadialOperators(grid, m)
        a = random_pair(grid, m, 3)
        b = random_pair(grid, m, 4)
        lhs = inner_r(grid, ops.t_plus @ a.v_minus, b.v_plus)
        rhs = inner_r(grid, a.v_minus, ops.t_plus_adj @ b.v_plus)
        assert abs(lhs - rhs) < 1e-11 * max(1.0, abs(lhs))


def test_nonlinear_cross_coefficient_matches_2d():
    # the reduced quartic term must equal the 2D one divided by 2 pi; this
    # pins the cross coefficient at 2 lambda_zero in the reduced functional
    p = Parameters(lambda_plus=0.9, lambda_minus=1.3, lambda_zero=0.7)
    grid_r = RadialGrid(12.0, 4800)
    P = smooth_pair(grid_r, 0)
    grid2 = Grid2D(12.0, 256)
    U = lift_to_2d(P, grid2)
    n_radial = energy_m(P, p).nonlinear
    n_2d = nonlinear_term(U, p)
    # tolerance limited by the spline transfer, still far below the factor
    # two that separates the conventions
    assert abs(n_2d / (2.0 * np.pi) - n_radial) < 1e-5 * max(n_radial, 1e-10)


@pytest.mark.parametrize("m", [0, 1, -1])
def test_energy_matches_2d_lift(m):
    # E(e^{im th} v+, e^{i(m+1) th} v-) = 2 pi E_m(v+, v-) componentwise
    p = Parameters(nu=1.2, lambda_plus=1.0, lambda_minus=0.8, lambda_zero=1.1)
    grid_r = RadialGrid(12.0, 4800)
    P = smooth_pair(grid_r, m)
    grid2 = Grid2D(12.0, 256)
    U = lift_to_2d(P, grid2)
    e_r = energy_m(P, p)
    e_2 = energy(U, p)
    scale = max(abs(e_2.total), 1.0)
    assert abs(e_2.kinetic - 2 * np.pi * e_r.kinetic) < 2e-4 * scale
    assert abs(e_2.vso - 2 * np.pi * e_r.vso) < 2e-4 * scale
    assert abs(e_2.nonlinear - 2 * np.pi * e_r.nonlinear) < 1e-5 * scale
    assert abs(mass(U) - 2 * np.pi * radial_mass(P)) < 1e-5


def test_gradient_matches_finite_differences():
    p = Parameters(nu=0.9, lambda_plus=1.1, lambda_minus=0.7, lambda_zero=1.4)
    grid = RadialGrid(15.0, 300)
    P = smooth_pair(grid, 0, scale=1.3)
    gp, gm = gradient_m(P, p)
    rng = np.random.default_rng(5)
    for _ in range(3):
        dp = np.exp(-grid.r) * (rng.standard_normal(grid.n)
                                + 1j * rng.standard_normal(grid.n))
        dm = np.exp(-grid.r) * (rng.standard_normal(grid.n)
                                + 1j * rng.standard_normal(grid.n))
        h = 1e-6
        plus = RadialPair(grid, 0, P.v_plus + h * dp, P.v_minus + h * dm)
        minus = RadialPair(grid, 0, P.v_plus - h * dp, P.v_minus - h * dm)
        d_fd = (energy_m(plus, p).total - energy_m(minus, p).total) / (2 * h)
        d_an = inner_r(grid, gp, dp) + inner_r(grid, gm, dm)
        assert abs(d_fd - d_an) < 1e-6 * max(abs(d_fd), 1e-8)


def test_residual_zero_pair_and_affine_omega():
    grid = RadialGrid(15.0, 300)
    zero = RadialPair(grid, 0, np.zeros(grid.n, complex), np.zeros(grid.n, complex))
    assert se_residual_m(zero, 1.0, P_UNIT) == 0.0


def test_solver_converges_and_certifies():
    rho = 0.5
    grid = RadialGrid(120.0, 2400)
    result = solve_semivortex(0, rho, P_UNIT, grid)
    assert result.residual < 1e-8
    assert result.omega > 0.0
    assert result.energy.total + 0.25 * rho < 0.0
    assert abs(result.mass - rho) < 1e-12 * rho
    # energy trace non-increasing up to line-search slack
    energies = [e for _, e, _ in result.trace]
    diffs = np.diff(energies)
    assert diffs.max() <= 1e-12 * max(1.0, abs(energies[-1]))
    # residual affine in the omega error
    res_shift = se_residual_m(result.pair, result.omega + 0.1, P_UNIT)
    assert abs(res_shift - 0.1 * rho**0.5) < 0.01 * 0.1 * rho**0.5


def test_solver_mirror_symmetry():
    # windings (m, m+1) and (-(m+1), -m) are mirror images for equal lambdas
    rho = 0.5
    grid = RadialGrid(120.0, 2400)
    e0 = solve_semivortex(0, rho, P_UNIT, grid).energy.total
    e1 = solve_semivortex(-1, rho, P_UNIT, grid).energy.total
    assert abs(e0 - e1) <= 1e-6


def test_iteration_limit_error_carries_trace():
    grid = RadialGrid(60.0, 600)
    with pytest.raises(IterationLimitError) as err:
        solve_semivortex(0, 0.5, P_UNIT, grid, SolveOptions(max_iter=3))
    assert len(err.value.trace) >= 2


def test_truncation_warning_on_small_domain():
    grid = RadialGrid(12.0, 240)
    with pytest.warns(UserWarning, match="truncation"):
        solve_semivortex(0, 0.5, P_UNIT, grid)


def test_subadditivity():
    rho = 0.5
    grid = RadialGrid(120.0, 2400)
    e_rho, e_half, e_half2 = subadditivity_probe_m(0, rho, rho / 2, P_UNIT, grid)
    assert e_rho <= e_half + e_half2 + 1e-8
    e_rho, e_quarter, e_rest = subadditivity_probe_m(0, rho, rho / 4, P_UNIT, grid)
    assert e_rho <= e_quarter + e_rest + 1e-8


def test_seed_vanishing_orders():
    grid = RadialGrid(10.0, 200)
    for m in (-2, -1, 0, 2):
        P = seed_profile(m, grid)
        r0 = grid.r[0]
        assert abs(P.v_plus[0]) == pytest.approx(r0 ** abs(m) * np.exp(-r0**2))
        assert abs(P.v_minus[0]) == pytest.approx(r0 ** abs(m + 1) * np.exp(-r0**2))


def test_lift_windings():
    grid_r = RadialGrid(10.0, 1000)
    P = smooth_pair(grid_r, 1)
    grid2 = Grid2D(10.0, 128)
    U = lift_to_2d(P, grid2)
    # quarter rotation multiplies components by i^m and i^(m+1)
    idx = grid2.n // 2 + 10
    c = grid2.n // 2
    val = U.psi_plus[idx, c]
    rot = U.psi_plus[c, idx]
    assert abs(rot - 1j * val) < 1e-12 * abs(val)
