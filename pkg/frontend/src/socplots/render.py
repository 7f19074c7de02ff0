"""One entry point per figure kind; pure presentation of the emitted data.

Annotated numbers (fitted slope, spectrum minimum) are echoed verbatim from
the input record strings; nothing is recomputed here.
"""
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import SocplotsError
from .formats import read_field, read_records, read_table


def _save(fig, output_path):
    fig.savefig(output_path, bbox_inches="tight")
    plt.close(fig)


def render_profiles(input_paths, output_path):
    """Radial component magnitudes |v+|, |v-| against r."""
    cols = read_table(input_paths[0], ["r", "re_v_plus", "im_v_plus",
                                       "re_v_minus", "im_v_minus"])
    vp = np.hypot(cols["re_v_plus"], cols["im_v_plus"])
    vm = np.hypot(cols["re_v_minus"], cols["im_v_minus"])
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(cols["r"], vp, label="|v+|")
    ax.plot(cols["r"], vm, label="|v-|")
    ax.set_xlabel("r")
    ax.set_ylabel("component magnitude")
    ax.legend()
    _save(fig, output_path)


def render_witness(input_paths, output_path):
    """Log-log scaling of the linear-energy gap and the quartic term vs R."""
    cols = read_table(input_paths[0], ["R", "elin_gap", "nonlinear",
                                       "total_deficit"])
    rec = read_records(input_paths[1], kind="witness")[-1]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(cols["R"], cols["elin_gap"], "o-", label="linear-energy gap")
    ax.loglog(cols["R"], cols["nonlinear"], "s-", label="quartic term")
    neg = cols["total_deficit"] < 0
    if np.any(neg):
        ax.loglog(cols["R"][neg], -cols["total_deficit"][neg], "v--",
                  label="-(total deficit)")
    slope = rec.get("slope_elin_gap")
    if slope is None:
        raise SocplotsError("witness record lacks slope_elin_gap")
    ax.set_title(f"fitted slope = {slope}")
    ax.set_xlabel("R")
    ax.set_ylabel("value")
    ax.legend()
    _save(fig, output_path)


def render_dispersion(input_paths, output_path):
    """Two dispersion branches along |xi| with the recorded minimum marked."""
    cols = read_table(input_paths[0], ["xi_x", "xi_y", "branch_plus",
                                       "branch_minus"])
    rec = read_records(input_paths[1], kind="spectrum")[-1]
    bottom = rec.get("bottom")
    if bottom is None:
        raise SocplotsError("spectrum record lacks bottom")
    k = np.hypot(cols["xi_x"], cols["xi_y"])
    order = np.argsort(k)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(k[order], cols["branch_plus"][order], ".", ms=2, label="upper branch")
    ax.plot(k[order], cols["branch_minus"][order], ".", ms=2, label="lower branch")
    ax.axhline(float(bottom), color="gray", ls="--",
               label=f"minimum = {bottom}")
    loc = rec.get("scan_min_location")
    if loc is not None:
        ax.plot([float(loc)], [float(bottom)], "k*", ms=10)
    ax.set_xlabel("|xi|")
    ax.set_ylabel("branch value")
    ax.legend()
    _save(fig, output_path)


def render_energy_curve(input_paths, output_path):
    """Energy against mass from accumulated radial solve records."""
    recs = read_records(input_paths[0], kind="semivortex")
    rho = np.array([float(r["rho"]) for r in recs])
    e = np.array([float(r["energy_total"]) for r in recs])
    m = [r.get("m", "?") for r in recs]
    order = np.argsort(rho)
    fig, ax = plt.subplots(figsize=(6, 4))
    for winding in sorted(set(m)):
        sel = np.array([mi == winding for mi in m])[order]
        ax.plot(rho[order][sel], e[order][sel], "o-", label=f"m = {winding}")
    ax.set_xlabel("mass")
    ax.set_ylabel("energy")
    ax.legend()
    _save(fig, output_path)


def render_stability(input_paths, output_path):
    """Evolution time series: orbit distance plus conservation drift."""
    cols = read_table(input_paths[0], ["t", "mass", "energy", "orbit_distance"])
    fig, axes = plt.subplots(3, 1, figsize=(6, 7), sharex=True)
    axes[0].plot(cols["t"], cols["orbit_distance"])
    axes[0].set_ylabel("orbit distance")
    axes[1].plot(cols["t"], cols["mass"] - cols["mass"][0])
    axes[1].set_ylabel("mass drift")
    axes[2].plot(cols["t"], cols["energy"] - cols["energy"][0])
    axes[2].set_ylabel("energy drift")
    axes[2].set_xlabel("t")
    _save(fig, output_path)


def render_density2d(input_paths, output_path):
    """Density and phase maps of both components of a stored field."""
    half_length, plus, minus = read_field(input_paths[0])
    extent = [-half_length, half_length, -half_length, half_length]
    fig, axes = plt.subplots(2, 2, figsize=(8, 7))
    panels = [(np.abs(plus) ** 2, "|psi+|^2", "viridis"),
              (np.abs(minus) ** 2, "|psi-|^2", "viridis"),
              (np.angle(plus), "arg psi+", "twilight"),
              (np.angle(minus), "arg psi-", "twilight")]
    for ax, (data, title, cmap) in zip(axes.ravel(), panels):
        im = ax.imshow(data.T, origin="lower", extent=extent, cmap=cmap)
        ax.set_title(title)
        fig.colorbar(im, ax=ax, shrink=0.8)
    _save(fig, output_path)


_RENDERERS = {
    "profiles": (render_profiles, 1),
    "witness": (render_witness, 2),
    "dispersion": (render_dispersion, 2),
    "energy_curve": (render_energy_curve, 1),
    "stability": (render_stability, 1),
    "density2d": (render_density2d, 1),
}

KINDS = tuple(sorted(_RENDERERS))


def render(kind, input_paths, output_path):
    """Render one figure kind from CLI output files to SVG/PNG.

    input_paths per kind:
      profiles:     [semivortex_profile.csv]
      witness:      [witness.csv, results.txt]
      dispersion:   [dispersion.csv, results.txt]
      energy_curve: [results.txt]
      stability:    [evolution.csv]
      density2d:    [field.sov2]
    """
    if kind not in _RENDERERS:
        raise SocplotsError(f"unknown figure kind {kind!r}; choose from {KINDS}")
    fn, n_inputs = _RENDERERS[kind]
    if len(input_paths) != n_inputs:
        raise SocplotsError(
            f"kind {kind!r} needs {n_inputs} input file(s), got {len(input_paths)}")
    fn(list(input_paths), output_path)
