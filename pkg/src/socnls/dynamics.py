"""Split-step spectral time integration, conservation and stability probes.

The linear substep is exact: the 2x2 symbol exponential e^{-i dt L(xi)} has
the closed form e^{-i dt k^2/2} [cos(nu k dt) I - i sin(nu k dt) B/(nu k)]
with B the off-diagonal coupling, so no per-mode diagonalization is needed.
The nonlinear substep is exact as well since the moduli are invariant under
it.  Strang composition is second order; Lie is first order.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import BlowupSuspectedError, ConfigError
from .functional import energy, h1_seminorm_sq, mass, quad
from .grid2d import FieldPair2D
from .kernels import nonlinear_phase

H1_BLOWUP_GUARD = 1.0e6


@dataclass
class EvolutionConfig:
    dt: float
    t_final: float
    record_every: int = 10
    scheme: str = "strang"

    def __post_init__(self):
        if not (self.dt > 0 and self.t_final > 0):
            raise ConfigError("dt and t_final must be positive")
        if self.scheme not in ("strang", "lie"):
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        steps = self.t_final / self.dt
        if abs(steps - round(steps)) > 1e-9:
            raise ConfigError("t_final must be an integer multiple of dt")
        self.steps = int(round(steps))


class LinearPropagator:
    """Precomputed exact linear-substep multipliers for one (grid, nu, dt)."""

    def __init__(self, grid, nu, dt):
        k = np.sqrt(grid.k2)
        phase = np.exp(-0.5j * dt * grid.k2)
        c = np.cos(nu * k * dt)
        s = np.sin(nu * k * dt)
        with np.errstate(invalid="ignore", divide="ignore"):
            unit = np.where(k > 0, (grid.xi_x - 1j * grid.xi_y) / np.where(k > 0, k, 1.0), 0.0)
        self.aa = phase * c
        self.ab = phase * s * unit          # acts on psi_minus-hat in row +
        self.ba = -phase * s * np.conj(unit)
        self.dt = dt

    def apply(self, U):
        fp = np.fft.fft2(U.psi_plus)
        fm = np.fft.fft2(U.psi_minus)
        gp = self.aa * fp + self.ab * fm
        gm = self.ba * fp + self.aa * fm
        return FieldPair2D(U.grid, np.fft.ifft2(gp), np.fft.ifft2(gm), check=False)


def _nonlinear_step(U, p, dt):
    np_plus, np_minus = nonlinear_phase(U.psi_plus, U.psi_minus, dt,
                                        p.lambda_plus, p.lambda_minus,
                                        p.lambda_zero)
    return FieldPair2D(U.grid, np_plus, np_minus, check=False)


@dataclass
class EvolveResult:
    pair: FieldPair2D
    times: np.ndarray
    mass_series: np.ndarray
    energy_series: np.ndarray
    h1_series: np.ndarray
    extra: list = field(default_factory=list)


def evolve(U0, p, cfg, callback=None):
    """Integrate to t_final recording (t, M, E, |U|_H1dot) every record step.

    Consecutive Strang half-steps are merged into full linear steps, so the
    cost per step is one linear and one nonlinear substep.  The optional
    callback(t, U) output is collected into the result's extra list; the
    field handed to it includes the trailing half-step correction.
    """
    U0.validate()
    if cfg.dt * p.nu**2 > 0.1 + 1e-12:
        raise ConfigError(f"dt nu^2 = {cfg.dt * p.nu**2:.3g} exceeds 0.1")
    g = U0.grid
    full = LinearPropagator(g, p.nu, cfg.dt)
    half = LinearPropagator(g, p.nu, 0.5 * cfg.dt)

    strang = cfg.scheme == "strang"
    times, masses, energies, h1s, extra = [], [], [], [], []

    def record(t, U):
        m = mass(U)
        e = energy(U, p).total
        h1 = h1_seminorm_sq(U) ** 0.5
        times.append(t)
        masses.append(m)
        energies.append(e)
        h1s.append(h1)
        if h1 > H1_BLOWUP_GUARD:
            raise BlowupSuspectedError(
                f"H1dot norm {h1:.3e} exceeded the blow-up guard at t = {t}",
                t, h1)
        if callback is not None:
            extra.append(callback(t, U))

    record(0.0, U0)
    U = half.apply(U0) if strang else U0
    for step in range(1, cfg.steps + 1):
        if strang:
            U = _nonlinear_step(U, p, cfg.dt)
            last = step == cfg.steps
            at_record = step % cfg.record_every == 0 or last
            if at_record:
                U = half.apply(U)
                record(step * cfg.dt, U)
                if not last:
                    U = half.apply(U)
            else:
                U = full.apply(U)
        else:
            U = _nonlinear_step(full.apply(U), p, cfg.dt)
            if step % cfg.record_every == 0 or step == cfg.steps:
                record(step * cfg.dt, U)
    return EvolveResult(pair=U, times=np.array(times),
                        mass_series=np.array(masses),
                        energy_series=np.array(energies),
                        h1_series=np.array(h1s), extra=extra)


@dataclass
class GlobalExistenceReport:
    bound: float
    sup_h1_sq: float
    margin: float
    ok: bool
    failure_kind: str   # "", "discretization", "threshold"


def global_existence_monitor(U0, p, cfg, cgn, eps=0.05):
    """A-priori bound |U(t)|^2_H1dot <= (E(0) + C_eps rho)/(1/4 - eps - C rho)."""
    from .weinstein import young_c_eps

    rho = mass(U0)
    denom = 0.25 - eps - cgn * rho
    if denom <= 0:
        raise ConfigError(
            f"mass {rho} too large for the coercivity bound (denominator {denom})")
    bound = (energy(U0, p).total + young_c_eps(p, eps) * rho) / denom
    result = evolve(U0, p, cfg)
    sup_h1_sq = float((result.h1_series**2).max())
    ok = sup_h1_sq <= bound
    if ok:
        kind = ""
    elif rho < 1.0 / (4.0 * cgn):
        kind = "discretization"
    else:
        kind = "threshold"
    return GlobalExistenceReport(bound=bound, sup_h1_sq=sup_h1_sq,
                                 margin=bound - sup_h1_sq, ok=ok,
                                 failure_kind=kind)


@dataclass
class OrbitDistance:
    value: float
    best_shift: tuple
    best_phase: float


def _h1_weighted_fft(U):
    return np.fft.fft2(U.psi_plus), np.fft.fft2(U.psi_minus)


def orbit_distance(U, Q):
    """H1 x H1 distance minimized over lattice translations and global phase.

    The translation scan is an inverse FFT of the (1 + |xi|^2)-weighted
    spectral correlation; the optimal phase is the argument of the best
    correlation.  This upper-bounds the distance to the full minimizer set.
    """
    if U.grid != Q.grid:
        raise ValueError("pairs must share a grid")
    g = U.grid
    weight = 1.0 + g.k2
    fu_p, fu_m = _h1_weighted_fft(U)
    fq_p, fq_m = _h1_weighted_fft(Q)
    norm_fac = g.cell_area / g.n**2
    nu2 = norm_fac * float(np.sum(weight * (np.abs(fu_p) ** 2 + np.abs(fu_m) ** 2)))
    nq2 = norm_fac * float(np.sum(weight * (np.abs(fq_p) ** 2 + np.abs(fq_m) ** 2)))
    corr = np.fft.ifft2(weight * (np.conj(fq_p) * fu_p + np.conj(fq_m) * fu_m))
    corr *= g.cell_area
    idx = np.unravel_index(np.argmax(np.abs(corr)), corr.shape)
    best = corr[idx]
    d2 = max(nu2 + nq2 - 2.0 * abs(best), 0.0)

    def to_shift(i):
        return i * g.spacing if i <= g.n // 2 else (i - g.n) * g.spacing

    return OrbitDistance(value=d2**0.5,
                         best_shift=(to_shift(idx[0]), to_shift(idx[1])),
                         best_phase=float(-np.angle(best)))


def perturbation(Q, shape, delta, rng_seed=11):
    """Q plus a delta-sized H1 perturbation of a named shape."""
    g = Q.grid
    if shape == "amplitude":
        P = FieldPair2D(g, Q.psi_plus.copy(), Q.psi_minus.copy(), check=False)
    elif shape == "phase_gradient":
        P = FieldPair2D(g, 1j * g.x * Q.psi_plus, 1j * g.x * Q.psi_minus,
                        check=False)
    elif shape == "noise":
        rng = np.random.default_rng(rng_seed)
        fields = []
        for _ in range(2):
            noise = rng.standard_normal((g.n, g.n)) + 1j * rng.standard_normal((g.n, g.n))
            fields.append(np.fft.ifft2(np.exp(-g.k2) * np.fft.fft2(noise)))
        P = FieldPair2D(g, fields[0], fields[1], check=False)
    else:
        raise ValueError(f"unknown perturbation shape {shape!r}")
    norm = (mass(P) + h1_seminorm_sq(P)) ** 0.5
    return Q + (delta / norm) * P


@dataclass
class StabilityReport:
    shape: str
    delta: float
    sup_distance: float
    ratio: float   # sup_distance / delta


def stability_experiment(Q, p, delta, t_final, dt=1e-3, record_every=100,
                         shapes=("amplitude", "phase_gradient", "noise")):
    """Evolve perturbed ground states, track the sup of the orbit distance."""
    cfg = EvolutionConfig(dt=dt, t_final=t_final, record_every=record_every)
    reports = []
    for shape in shapes:
        U0 = perturbation(Q, shape, delta) if delta > 0 else Q.copy()
        result = evolve(U0, p, cfg,
                        callback=lambda t, U: orbit_distance(U, Q).value)
        sup_d = float(np.max(result.extra))
        reports.append(StabilityReport(shape=shape, delta=delta,
                                       sup_distance=sup_d,
                                       ratio=sup_d / delta if delta > 0 else np.inf))
    return reports
