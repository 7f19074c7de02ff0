"""Command line front end: one subcommand per module, file emission, manifest.

Configuration precedence: command-line flag > config file (key=value lines,
keys named like the long flags) > built-in default.  Exit codes: 0 success,
1 failed assertion, 2 configuration error, 3 numerical failure.
"""
import argparse
import os
import sys

import numpy as np

from . import __version__, io
from .errors import (
    BlowupSuspectedError,
    ConfigError,
    EstimationFailedError,
    IterationLimitError,
    SocnlsError,
    StepControlError,
)
from .grid2d import Grid2D
from .params import Parameters


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="socnls",
        description="spin-orbit coupled NLS: profiles, certificates, evolution")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="key=value configuration file")
    parser.add_argument("--outdir", help="output directory (or SOCNLS_OUTDIR)")
    parser.add_argument("--workers", type=int,
                        help="worker count for sweeps (or SOCNLS_WORKERS)")
    sub = parser.add_subparsers(dest="command", required=True)

    common_phys = argparse.ArgumentParser(add_help=False)
    common_phys.add_argument("--nu", type=float)
    common_phys.add_argument("--lambda-plus", type=float, dest="lambda_plus")
    common_phys.add_argument("--lambda-minus", type=float, dest="lambda_minus")
    common_phys.add_argument("--lambda-zero", type=float, dest="lambda_zero")

    sv = sub.add_parser("semivortex", parents=[common_phys],
                        help="radial semi-vortex solve")
    sv.add_argument("--m", type=int)
    sv.add_argument("--rho", type=float)
    sv.add_argument("--rmax", type=float)
    sv.add_argument("--dr", type=float)
    sv.add_argument("--seed", choices=["gaussian", "witness"])
    sv.add_argument("--tol", type=float)

    gs = sub.add_parser("groundstate", parents=[common_phys],
                        help="2D mass-constrained minimization")
    gs.add_argument("--rho", type=float)
    gs.add_argument("--half-length", type=float, dest="half_length")
    gs.add_argument("--n", type=int)
    gs.add_argument("--seed")
    gs.add_argument("--tol", type=float)

    wt = sub.add_parser("witness", parents=[common_phys],
                        help="cutoff-Bessel certificate R-sweep")
    wt.add_argument("--m", type=int)
    wt.add_argument("--rho", type=float)
    wt.add_argument("--R", dest="r_list", help="comma-separated cutoff scales")

    spec = sub.add_parser("spectrum", parents=[common_phys],
                          help="dispersion surface and resonance data")
    spec.add_argument("--kmax", type=float)
    spec.add_argument("--points", type=int)

    ev = sub.add_parser("evolve", parents=[common_phys],
                        help="split-step time evolution")
    ev.add_argument("--input", help="binary field file (default: gaussian data)")
    ev.add_argument("--rho", type=float)
    ev.add_argument("--half-length", type=float, dest="half_length")
    ev.add_argument("--n", type=int)
    ev.add_argument("--dt", type=float)
    ev.add_argument("--t-final", type=float, dest="t_final")
    ev.add_argument("--scheme", choices=["strang", "lie"])
    ev.add_argument("--record-every", type=int, dest="record_every")

    st = sub.add_parser("stability", parents=[common_phys],
                        help="orbital stability experiment")
    st.add_argument("--rho", type=float)
    st.add_argument("--delta", type=float)
    st.add_argument("--t-final", type=float, dest="t_final")
    st.add_argument("--dt", type=float)
    st.add_argument("--half-length", type=float, dest="half_length")
    st.add_argument("--n", type=int)

    mm = sub.add_parser("mixedmode", parents=[common_phys],
                        help="mixed-mode construction and verification")
    mm.add_argument("--m", type=int)
    mm.add_argument("--rho", type=float)
    mm.add_argument("--eta", type=float)
    mm.add_argument("--half-length", type=float, dest="half_length")
    mm.add_argument("--n", type=int)

    cg = sub.add_parser("cgn", parents=[common_phys],
                        help="best-constant estimation")
    cg.add_argument("--half-length", type=float, dest="half_length")
    cg.add_argument("--n", type=int)

    sub.add_parser("selftest", parents=[common_phys],
                   help="fast invariant suite")
    return parser


class Options:
    """Flag > config > default resolution for one run."""

    def __init__(self, args, config):
        self.args = args
        self.config = config

    def get(self, key, default, cast=None):
        v = getattr(self.args, key, None)
        if v is None:
            v = self.config.get(key.replace("_", "-"), self.config.get(key))
            if v is not None and cast is not None:
                try:
                    v = cast(v)
                except ValueError as exc:
                    raise ConfigError(f"bad value for {key}: {v!r}") from exc
        if v is None:
            v = default
        return v

    def params(self):
        return Parameters(nu=self.get("nu", 1.0, float),
                          lambda_plus=self.get("lambda_plus", 1.0, float),
                          lambda_minus=self.get("lambda_minus", 1.0, float),
                          lambda_zero=self.get("lambda_zero", 1.0, float))


def _manifest(outdir, opts, extra):
    entries = {"command": opts.args.command}
    entries.update(extra)
    io.write_manifest(os.path.join(outdir, "manifest.txt"), entries)


def _cmd_semivortex(opts, outdir):
    from .radial import RadialGrid, SolveOptions, solve_semivortex
    from .witness import WitnessConfig, witness_pair

    p = opts.params()
    m = opts.get("m", 0, int)
    rho = opts.get("rho", 0.05, float)
    rmax = opts.get("rmax", 60.0, float)
    dr = opts.get("dr", 0.05, float)
    tol = opts.get("tol", 1e-8, float)
    seed = opts.get("seed", "gaussian")
    grid = RadialGrid(rmax, int(round(rmax / dr)))
    seed_pair = None
    if seed == "witness":
        seed_pair = witness_pair(WitnessConfig(m, rho, rmax / 4.0, p.nu), grid)
    result = solve_semivortex(m, rho, p, grid,
                              SolveOptions(tol=tol), seed_pair=seed_pair)
    io.write_radial_csv(os.path.join(outdir, "semivortex_profile.csv"),
                        result.pair)
    record = {
        "record": "semivortex", "m": m, "rho": rho, "nu": p.nu,
        "omega": result.omega, "residual": result.residual,
        "iterations": result.iterations, "energy_total": result.energy.total,
        "energy_kinetic": result.energy.kinetic, "energy_vso": result.energy.vso,
        "energy_nonlinear": result.energy.nonlinear, "mass": result.mass,
        "seed": seed,
    }
    io.append_record(os.path.join(outdir, "results.txt"), record)
    _manifest(outdir, opts, {"m": m, "rho": rho, "rmax": rmax, "dr": dr,
                             "seed": seed, "nu": p.nu, "tol": tol,
                             "files": "semivortex_profile.csv results.txt"})
    return 0


def _cmd_groundstate(opts, outdir):
    from .groundstate import (Solve2DOptions, solve_groundstate,
                              structure_classifier)

    p = opts.params()
    rho = opts.get("rho", 0.05, float)
    L = opts.get("half_length", 16.0, float)
    n = opts.get("n", 256, int)
    seed = opts.get("seed", "semivortex:0")
    tol = opts.get("tol", 1e-8, float)
    grid = Grid2D(L, n)
    result = solve_groundstate(rho, p, grid, seed=seed,
                               opts=Solve2DOptions(tol=tol))
    structure = structure_classifier(result.pair)
    io.write_field(os.path.join(outdir, "groundstate.sov2"), result.pair)
    record = {
        "record": "groundstate", "rho": rho, "nu": p.nu, "seed": seed,
        "omega": result.omega, "residual": result.residual,
        "iterations": result.iterations, "energy_total": result.energy.total,
        "energy_kinetic": result.energy.kinetic, "energy_vso": result.energy.vso,
        "energy_nonlinear": result.energy.nonlinear, "mass": result.mass,
        "structure": structure.kind,
        "structure_m": structure.m if structure.m is not None else "none",
    }
    io.append_record(os.path.join(outdir, "results.txt"), record)
    _manifest(outdir, opts, {"rho": rho, "half_length": L, "n": n,
                             "seed": seed, "nu": p.nu, "tol": tol,
                             "files": "groundstate.sov2 results.txt"})
    return 0


def _cmd_witness(opts, outdir):
    from .radial import RadialGrid
    from .witness import WitnessConfig, witness_report

    p = opts.params()
    m = opts.get("m", 0, int)
    rho = opts.get("rho", 0.05, float)
    r_spec = opts.get("r_list", "50,100,200,400,800")
    R_list = [float(v) for v in str(r_spec).split(",")]
    dr = min(0.05, 1.0 / (20.0 * p.nu))
    rmax = 2.0 * max(R_list)
    grid = RadialGrid(rmax, int(round(rmax / dr)))
    cfg = WitnessConfig(m, rho, R_list[0], p.nu)
    report = witness_report(cfg, R_list, grid, p,
                            workers=opts.get("workers", None, int))
    rows = zip(report.R, report.a, report.elin_gap, report.nonlinear,
               report.total_deficit)
    io.write_csv(os.path.join(outdir, "witness.csv"),
                 ["R", "a", "elin_gap", "nonlinear", "total_deficit"], rows)
    record = {
        "record": "witness", "m": m, "rho": rho, "nu": p.nu,
        "slope_elin_gap": report.slope_elin_gap,
        "nonlinear_prefactor_min": float(report.nonlinear_prefactor.min()),
        "r_star": report.r_star,
        "r_star_is_extrapolated": report.r_star_is_extrapolated,
        "deficit_negative": bool(np.any(report.total_deficit < 0)),
    }
    io.append_record(os.path.join(outdir, "results.txt"), record)
    _manifest(outdir, opts, {"m": m, "rho": rho, "nu": p.nu, "R": r_spec,
                             "dr": dr, "files": "witness.csv results.txt"})
    return 0 if np.any(report.total_deficit < 0) else 1


def _cmd_spectrum(opts, outdir):
    from .spectral import (branch_values, eigenrelation_residual,
                           scan_minimum_location, spectrum_bottom)

    p = opts.params()
    kmax = opts.get("kmax", 4.0 * p.nu, float)
    points = opts.get("points", 65, int)
    axis = np.linspace(-kmax, kmax, points)
    rows = []
    for kx in axis:
        for ky in axis:
            kk = np.hypot(kx, ky)
            rows.append((kx, ky, 0.5 * kk**2 + p.nu * kk,
                         0.5 * kk**2 - p.nu * kk))
    io.write_csv(os.path.join(outdir, "dispersion.csv"),
                 ["xi_x", "xi_y", "branch_plus", "branch_minus"], rows)
    bottom = spectrum_bottom(p.nu)
    grid = Grid2D(16.0, 64)
    k_lattice = (np.pi / 16.0 * max(1, round(p.nu * 16.0 / np.pi)), 0.0)
    resid = eigenrelation_residual(k_lattice, "-", p.nu, grid)
    record = {
        "record": "spectrum", "nu": p.nu, "bottom": bottom,
        "scan_min_location": scan_minimum_location(p.nu),
        "branch_minus_min": float(branch_values(
            np.linspace(1e-9, kmax, 10001), p.nu)[1].min()),
        "eigenrelation_residual": resid,
    }
    io.append_record(os.path.join(outdir, "results.txt"), record)
    _manifest(outdir, opts, {"nu": p.nu, "kmax": kmax, "points": points,
                             "files": "dispersion.csv results.txt"})
    return 0


def _cmd_evolve(opts, outdir):
    from .dynamics import EvolutionConfig, evolve, orbit_distance
    from .groundstate import seed_field

    p = opts.params()
    cfg = EvolutionConfig(dt=opts.get("dt", 1e-3, float),
                          t_final=opts.get("t_final", 1.0, float),
                          record_every=opts.get("record_every", 10, int),
                          scheme=opts.get("scheme", "strang"))
    input_path = opts.get("input", None)
    if input_path:
        U0, _, _ = io.read_field(input_path)
    else:
        grid = Grid2D(opts.get("half_length", 16.0, float),
                      opts.get("n", 256, int))
        U0 = seed_field(grid, opts.get("rho", 0.05, float), "gaussian")
    result = evolve(U0, p, cfg, callback=lambda t, U: orbit_distance(U, U0).value)
    rows = zip(result.times, result.mass_series, result.energy_series,
               result.h1_series, result.extra)
    io.write_csv(os.path.join(outdir, "evolution.csv"),
                 ["t", "mass", "energy", "h1_norm", "orbit_distance"], rows)
    io.write_field(os.path.join(outdir, "final_field.sov2"), result.pair)
    drift_m = abs(result.mass_series[-1] - result.mass_series[0]) / result.mass_series[0]
    drift_e = abs(result.energy_series[-1] - result.energy_series[0]) / max(
        abs(result.energy_series[0]), 1e-300)
    record = {"record": "evolve", "nu": p.nu, "dt": cfg.dt,
              "t_final": cfg.t_final, "scheme": cfg.scheme,
              "mass_drift_rel": drift_m, "energy_drift_rel": drift_e}
    io.append_record(os.path.join(outdir, "results.txt"), record)
    _manifest(outdir, opts, {"dt": cfg.dt, "t_final": cfg.t_final,
                             "scheme": cfg.scheme, "nu": p.nu,
                             "files": "evolution.csv final_field.sov2 results.txt"})
    return 0


def _cmd_stability(opts, outdir):
    from .dynamics import stability_experiment
    from .groundstate import Solve2DOptions, solve_groundstate

    p = opts.params()
    rho = opts.get("rho", 0.05, float)
    delta = opts.get("delta", 1e-3, float)
    t_final = opts.get("t_final", 20.0, float)
    dt = opts.get("dt", 1e-3, float)
    grid = Grid2D(opts.get("half_length", 16.0, float), opts.get("n", 256, int))
    gs = solve_groundstate(rho, p, grid, seed="semivortex:0",
                           opts=Solve2DOptions())
    reports = stability_experiment(gs.pair, p, delta, t_final, dt=dt)
    rows = [(r.shape, r.delta, r.sup_distance, r.ratio) for r in reports]
    io.write_csv(os.path.join(outdir, "stability.csv"),
                 ["shape", "delta", "sup_distance", "ratio"], rows)
    for r in reports:
        io.append_record(os.path.join(outdir, "results.txt"),
                         {"record": "stability", "shape": r.shape,
                          "delta": r.delta, "sup_distance": r.sup_distance,
                          "ratio": r.ratio, "rho": rho, "t_final": t_final})
    _manifest(outdir, opts, {"rho": rho, "delta": delta, "t_final": t_final,
                             "dt": dt, "nu": p.nu,
                             "files": "stability.csv results.txt"})
    return 0


def _cmd_mixedmode(opts, outdir):
    from .mixedmode import build_mixed, verify_mixed
    from .radial import RadialGrid, solve_semivortex

    p = opts.params()
    m = opts.get("m", 0, int)
    rho = opts.get("rho", 0.05, float)
    eta = opts.get("eta", np.pi / 4.0, float)
    grid_r = RadialGrid(60.0, 1200)
    sv = solve_semivortex(m, rho / (2.0 * np.pi), p, grid_r)
    grid = Grid2D(opts.get("half_length", 16.0, float), opts.get("n", 256, int))
    F = build_mixed(sv.pair, eta, grid, p)
    report = verify_mixed(F, sv.pair, sv.omega, p)
    io.write_field(os.path.join(outdir, "mixedmode.sov2"), F)
    io.append_record(os.path.join(outdir, "results.txt"), {
        "record": "mixedmode", "m": m, "rho": rho, "eta": eta,
        "kinetic_rel": report.kinetic_rel, "vso_rel": report.vso_rel,
        "nonlinear_rel": report.nonlinear_rel, "total_rel": report.total_rel,
        "mass_rel": report.mass_rel, "residual_mixed": report.residual_mixed,
        "residual_lifted": report.residual_lifted, "ok": report.ok,
    })
    _manifest(outdir, opts, {"m": m, "rho": rho, "eta": eta, "nu": p.nu,
                             "files": "mixedmode.sov2 results.txt"})
    return 0 if report.ok else 1


def _cmd_cgn(opts, outdir):
    from .weinstein import estimate_cgn

    p = opts.params()
    grid = Grid2D(opts.get("half_length", 16.0, float), opts.get("n", 64, int))
    value = estimate_cgn(p, grid)
    io.append_record(os.path.join(outdir, "results.txt"),
                     {"record": "cgn", "nu": p.nu, "cgn": value,
                      "mass_threshold": 1.0 / (4.0 * value)})
    _manifest(outdir, opts, {"nu": p.nu, "half_length": grid.half_length,
                             "n": grid.n, "files": "results.txt"})
    return 0


def _cmd_selftest(opts, outdir):
    from .besselj import bessel_j
    from .dynamics import EvolutionConfig, evolve
    from .functional import elin_square, energy
    from .groundstate import seed_field
    from .spectral import jacobi_anger_check, spectrum_bottom, symbol
    from .radial import RadialGrid
    from .witness import WitnessConfig, first_square_norm

    p = opts.params()
    checks = []

    def check(name, ok):
        checks.append((name, bool(ok)))

    for l in range(1, 9):
        for x in (0.5, 5.0, 50.0):
            lhs = (2 * l / x) * bessel_j(l, x)
            check(f"bessel-recurrence l={l} x={x}",
                  abs(lhs - bessel_j(l - 1, x) - bessel_j(l + 1, x)) < 1e-10)
    check("spectrum-bottom", spectrum_bottom(p.nu) == -0.5 * p.nu**2)
    s = symbol((0.3, -0.7), p.nu)
    diag = s.unitary.conj().T @ s.matrix @ s.unitary
    check("symbol-diagonalization",
          abs(diag[0, 0] - s.branches[0]) < 1e-12
          and abs(diag[1, 1] - s.branches[1]) < 1e-12
          and abs(diag[0, 1]) < 1e-12)
    scalar_err, vec_err = jacobi_anger_check(p.nu, 0.3, 10.0, 40)
    check("jacobi-anger", scalar_err < 1e-12 and vec_err < 1e-10)

    grid = Grid2D(12.0, 128)
    U = seed_field(grid, 0.05, "gaussian")
    e = energy(U, p)
    qm, qp, shift = elin_square(U, p)
    check("completed-square",
          abs(qm + qp + shift - e.elin) <= 1e-10 * max(1.0, abs(e.elin)))

    grid_r = RadialGrid(40.0, 800)
    check("witness-first-square",
          first_square_norm(WitnessConfig(0, 0.05, 20.0, p.nu), grid_r) < 1e-12)

    cfg = EvolutionConfig(dt=1e-3, t_final=0.1, record_every=10)
    result = evolve(U, p, cfg)
    drift = abs(result.mass_series[-1] - result.mass_series[0]) / result.mass_series[0]
    check("mass-conservation", drift < 1e-10)

    failed = [name for name, ok in checks if not ok]
    for name, ok in checks:
        io.append_record(os.path.join(outdir, "results.txt"),
                         {"record": "selftest", "check": name, "ok": ok})
    _manifest(outdir, opts, {"checks": len(checks), "failed": len(failed),
                             "nu": p.nu, "files": "results.txt"})
    if failed:
        print("failed checks: " + ", ".join(failed), file=sys.stderr)
        return 1
    print(f"all {len(checks)} checks passed")
    return 0


_COMMANDS = {
    "semivortex": _cmd_semivortex,
    "groundstate": _cmd_groundstate,
    "witness": _cmd_witness,
    "spectrum": _cmd_spectrum,
    "evolve": _cmd_evolve,
    "stability": _cmd_stability,
    "mixedmode": _cmd_mixedmode,
    "cgn": _cmd_cgn,
    "selftest": _cmd_selftest,
}


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = io.read_config(args.config) if args.config else {}
        opts = Options(args, config)
        workers = opts.get("workers", None, int)
        if workers is not None:
            os.environ["SOCNLS_WORKERS"] = str(workers)
        outdir = io.resolve_outdir(args.outdir)
        return _COMMANDS[args.command](opts, outdir)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (IterationLimitError, StepControlError, BlowupSuspectedError,
            EstimationFailedError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except SocnlsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
