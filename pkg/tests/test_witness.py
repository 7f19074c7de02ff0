"""Cutoff-Bessel trial pair: exact first square, gap scaling, certificate."""
import numpy as np
import pytest

from socnls.errors import GridTooSmallError
from socnls.params import Parameters
from socnls.radial import RadialGrid, energy_m, radial_mass, solve_semivortex
from socnls.witness import (
    Smoothstep,
    WitnessConfig,
    elin_gap,
    first_square_norm,
    witness_amplitude,
    witness_nonlinear,
    witness_pair,
    witness_report,
)

P_UNIT = Parameters()


def test_smoothstep_endpoints_and_derivatives():
    chi = Smoothstep()
    assert chi(0.5) == 1.0 and chi(1.0) == 1.0
    assert chi(2.0) == 0.0 and chi(3.0) == 0.0
    ts = np.linspace(0.81, 2.19, 47)  # avoid the exact junction points
    h = 1e-6
    d_fd = (chi(ts + h) - chi(ts - h)) / (2 * h)
    assert np.abs(d_fd - chi.deriv(ts)).max() < 1e-8
    d2_fd = (chi.deriv(ts + h) - chi.deriv(ts - h)) / (2 * h)
    assert np.abs(d2_fd - chi.deriv2(ts)).max() < 1e-7
    # continuity of chi'' at the junctions
    assert abs(chi.deriv2(1.0 + 1e-9)) < 1e-6
    assert abs(chi.deriv2(2.0 - 1e-9)) < 1e-6


@pytest.mark.parametrize("m", [-2, -1, 0, 1, 2])
def test_first_square_vanishes(m):
    grid = RadialGrid(100.0, 4000)
    cfg = WitnessConfig(m=m, rho=0.05, R=50.0)
    assert first_square_norm(cfg, grid) < 1e-12


def test_mass_normalization_exact():
    grid = RadialGrid(100.0, 4000)
    cfg = WitnessConfig(m=0, rho=0.05, R=50.0)
    P = witness_pair(cfg, grid)
    assert abs(radial_mass(P) - cfg.rho) < 1e-14
    assert witness_amplitude(cfg, grid) < 0.0


def test_grid_too_small():
    grid = RadialGrid(80.0, 1600)
    with pytest.raises(GridTooSmallError):
        witness_pair(WitnessConfig(m=0, rho=0.05, R=50.0), grid)
    with pytest.raises(GridTooSmallError):
        witness_report(WitnessConfig(m=0, rho=0.05, R=10.0), [20.0, 50.0],
                       grid, P_UNIT)


def test_gap_scales_like_inverse_square():
    # elin gap ~ c / R^2, slope of log gap vs log R close to -2
    grid = RadialGrid(480.0, 9600)
    cfg = WitnessConfig(m=0, rho=0.05, R=50.0)
    rep = witness_report(cfg, [60.0, 120.0, 240.0], grid, P_UNIT)
    assert abs(rep.slope_elin_gap + 2.0) < 0.1
    assert np.all(rep.elin_gap > 0.0)
    assert np.all(rep.nonlinear > 0.0)
    assert np.allclose(rep.total_deficit, rep.elin_gap - rep.nonlinear)


def test_gap_matches_discrete_energy():
    # at moderate R the discrete E^lin + nu^2 rho / 4 agrees with the
    # closed-form residual evaluation
    grid = RadialGrid(120.0, 24000)
    cfg = WitnessConfig(m=0, rho=0.5, R=30.0)
    P = witness_pair(cfg, grid)
    e = energy_m(P, P_UNIT)
    discrete = e.kinetic + e.vso + 0.25 * cfg.nu**2 * cfg.rho
    analytic = elin_gap(cfg, grid)
    assert abs(discrete - analytic) < 0.05 * analytic


def test_certificate_negative_deficit_at_demo_mass():
    # at rho = 0.5 the quartic gain overtakes the gap at reachable scales
    grid = RadialGrid(1700.0, 17000)
    cfg = WitnessConfig(m=0, rho=0.5, R=100.0)
    rep = witness_report(cfg, [100.0, 200.0, 400.0, 800.0], grid, P_UNIT)
    assert rep.total_deficit[-1] < 0.0
    assert not rep.r_star_is_extrapolated
    assert rep.r_star <= 800.0


def test_report_extrapolates_when_all_positive():
    grid = RadialGrid(500.0, 5000)
    cfg = WitnessConfig(m=0, rho=0.05, R=50.0)
    rep = witness_report(cfg, [60.0, 120.0, 240.0], grid, P_UNIT)
    assert np.all(rep.total_deficit > 0.0)
    assert rep.r_star_is_extrapolated
    assert rep.r_star > 240.0


def test_report_order_independent_of_workers():
    grid = RadialGrid(500.0, 5000)
    cfg = WitnessConfig(m=0, rho=0.05, R=50.0)
    r1 = witness_report(cfg, [240.0, 60.0, 120.0], grid, P_UNIT, workers=1)
    r4 = witness_report(cfg, [60.0, 240.0, 120.0], grid, P_UNIT, workers=4)
    assert np.array_equal(r1.R, r4.R)
    assert np.array_equal(r1.elin_gap, r4.elin_gap)


def test_solver_beats_witness():
    # gradient flow started anywhere reaches energy at or below the trial pair
    rho = 0.5
    grid = RadialGrid(120.0, 2400)
    cfg = WitnessConfig(m=0, rho=rho, R=30.0)
    e_witness = energy_m(witness_pair(cfg, grid), P_UNIT).total
    e_solver = solve_semivortex(0, rho, P_UNIT, grid).energy.total
    assert e_solver <= e_witness + 1e-10
