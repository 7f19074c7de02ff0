"""Split-step evolution: exactness, conservation, order, orbital stability."""
import numpy as np
import pytest

from socnls.dynamics import (
    EvolutionConfig,
    LinearPropagator,
    evolve,
    global_existence_monitor,
    orbit_distance,
    perturbation,
    stability_experiment,
)
from socnls.errors import BlowupSuspectedError, ConfigError
from socnls.functional import h1_seminorm_sq, mass
from socnls.grid2d import FieldPair2D, Grid2D
from socnls.groundstate import seed_field, solve_groundstate
from socnls.params import Parameters
from socnls.spectral import resonance_eigenvalue, resonance_wave

P_UNIT = Parameters()


@pytest.fixture(scope="module")
def grid():
    return Grid2D(4.0 * np.pi, 64)


@pytest.fixture(scope="module")
def groundstate_pair(grid):
    with pytest.warns(UserWarning, match="truncation"):
        res = solve_groundstate(3.0, P_UNIT, Grid2D(12.0, 64), seed="semivortex:0")
    return res.pair


def test_config_validation():
    with pytest.raises(ConfigError):
        EvolutionConfig(dt=-0.1, t_final=1.0)
    with pytest.raises(ConfigError):
        EvolutionConfig(dt=0.3, t_final=1.0)    # not an integer step count
    with pytest.raises(ConfigError):
        EvolutionConfig(dt=0.1, t_final=1.0, scheme="verlet")
    assert EvolutionConfig(dt=0.1, t_final=1.0).steps == 10


def test_time_step_guard(grid):
    U = seed_field(grid, 1.0, "gaussian")
    cfg = EvolutionConfig(dt=0.2, t_final=1.0)
    with pytest.raises(ConfigError):
        evolve(U, P_UNIT, cfg)


def test_linear_propagator_is_unitary(grid):
    prop = LinearPropagator(grid, 1.0, 0.01)
    U = seed_field(grid, 2.0, "random")
    V = prop.apply(U)
    assert mass(V) == pytest.approx(mass(U), rel=1e-13)


def test_resonance_wave_phase_rotation(grid):
    # a lower-branch plane wave with tiny amplitude evolves as e^{-i E t}
    # (the cubic phase is quadratically small in the amplitude)
    k, branch = (0.5, 0.0), "-"
    W = resonance_wave(k, branch, grid)
    amp = 1e-6
    U0 = amp * W
    ev = resonance_eigenvalue(k, branch, P_UNIT.nu)
    cfg = EvolutionConfig(dt=0.01, t_final=1.0, record_every=100)
    out = evolve(U0, P_UNIT, cfg)
    expect = np.exp(-1j * ev * cfg.t_final)
    err = max(np.abs(out.pair.psi_plus - expect * U0.psi_plus).max(),
              np.abs(out.pair.psi_minus - expect * U0.psi_minus).max())
    assert err < 1e-10 * amp


def test_mass_and_energy_conservation(groundstate_pair):
    U0 = perturbation(groundstate_pair, "noise", 1e-2)
    cfg = EvolutionConfig(dt=1e-3, t_final=1.0, record_every=100)
    out = evolve(U0, P_UNIT, cfg)
    m0, e0 = out.mass_series[0], out.energy_series[0]
    assert np.abs(out.mass_series - m0).max() < 1e-10 * m0
    assert np.abs(out.energy_series - e0).max() < 1e-6 * max(abs(e0), 1.0)


def _final_state(U0, dt, t_final, scheme):
    cfg = EvolutionConfig(dt=dt, t_final=t_final, record_every=10**9,
                          scheme=scheme)
    return evolve(U0, P_UNIT, cfg).pair


def _l2_diff(A, B):
    g = A.grid
    d2 = (np.abs(A.psi_plus - B.psi_plus) ** 2
          + np.abs(A.psi_minus - B.psi_minus) ** 2).sum() * g.cell_area
    return d2**0.5


def test_strang_is_second_order(groundstate_pair):
    U0 = perturbation(groundstate_pair, "noise", 0.1)
    ref = _final_state(U0, 0.0025, 0.4, "strang")
    err_coarse = _l2_diff(_final_state(U0, 0.04, 0.4, "strang"), ref)
    err_fine = _l2_diff(_final_state(U0, 0.02, 0.4, "strang"), ref)
    assert 3.5 <= err_coarse / err_fine <= 4.5


def test_lie_is_first_order(groundstate_pair):
    U0 = perturbation(groundstate_pair, "noise", 0.1)
    ref = _final_state(U0, 0.0025, 0.4, "strang")
    err_coarse = _l2_diff(_final_state(U0, 0.04, 0.4, "lie"), ref)
    err_fine = _l2_diff(_final_state(U0, 0.02, 0.4, "lie"), ref)
    assert 1.6 <= err_coarse / err_fine <= 2.4


def test_blowup_guard(grid):
    big = 1e6 * seed_field(grid, 1.0, "gaussian")
    cfg = EvolutionConfig(dt=0.01, t_final=0.1)
    with pytest.raises(BlowupSuspectedError):
        evolve(big, P_UNIT, cfg)


def test_orbit_distance_exact_recovery(groundstate_pair):
    Q = groundstate_pair
    g = Q.grid
    shifted = FieldPair2D(g, np.roll(Q.psi_plus, (5, -3), axis=(0, 1)),
                          np.roll(Q.psi_minus, (5, -3), axis=(0, 1)),
                          check=False)
    moved = np.exp(0.7j) * shifted
    d = orbit_distance(moved, Q)
    assert d.value < 1e-8
    assert d.best_shift == (5 * g.spacing, -3 * g.spacing)
    assert d.best_phase == pytest.approx(-0.7, abs=1e-9)


def test_orbit_distance_scales_with_perturbation(groundstate_pair):
    Q = groundstate_pair
    for delta in (1e-3, 1e-2):
        U = perturbation(Q, "noise", delta)
        d = orbit_distance(U, Q)
        assert d.value <= 1.5 * delta


def test_perturbation_size_and_shapes(groundstate_pair):
    Q = groundstate_pair
    for shape in ("amplitude", "phase_gradient", "noise"):
        U = perturbation(Q, shape, 1e-3)
        D = U - Q
        size = (mass(D) + h1_seminorm_sq(D)) ** 0.5
        assert size == pytest.approx(1e-3, rel=1e-10)
    with pytest.raises(ValueError):
        perturbation(Q, "square", 1e-3)


def test_global_existence_monitor(groundstate_pair):
    cfg = EvolutionConfig(dt=0.01, t_final=0.5, record_every=10)
    rep = global_existence_monitor(groundstate_pair, P_UNIT, cfg, cgn=0.0428)
    assert rep.ok
    assert rep.failure_kind == ""
    assert rep.sup_h1_sq <= rep.bound
    big = 3.0 * groundstate_pair   # mass scales by 9, past the bound range
    with pytest.raises(ConfigError):
        global_existence_monitor(big, P_UNIT, cfg, cgn=0.0428)


def test_stability_experiment_small_delta(groundstate_pair):
    reports = stability_experiment(groundstate_pair, P_UNIT, delta=1e-3,
                                   t_final=0.2, dt=2e-3, record_every=20)
    assert {r.shape for r in reports} == {"amplitude", "phase_gradient", "noise"}
    for r in reports:
        assert r.sup_distance < 1e-2
