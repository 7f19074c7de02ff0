"""Numerics for the cubic NLS system with Rashba spin-orbit coupling on R^2.

Semi-vortex profiles, mass-constrained 2D ground states, cutoff-Bessel
energy certificates, mixed modes, dispersion data and split-step time
evolution, with a CLI front end.
"""
__version__ = "0.1.0"

from .params import Parameters
from .grid2d import Grid2D, FieldPair2D
from .functional import (
    EnergyBreakdown,
    apply_dpm,
    elin_square,
    energy,
    energy_gradient,
    h1_seminorm_sq,
    mass,
    nonlinear_term,
    pair_inner,
)
from .weinstein import coercivity_check, estimate_cgn, gn_quotient, young_c_eps
from .besselj import asymptotic_gap, bessel_j, bessel_j_array
from .radial import (
    RadialGrid,
    RadialPair,
    energy_m,
    lift_to_2d,
    se_residual_m,
    solve_semivortex,
    subadditivity_probe_m,
)
from .witness import WitnessConfig, witness_pair, witness_report
from .spectral import jacobi_anger_check, resonance_wave, spectrum_bottom, symbol
from .groundstate import se_residual_2d, solve_groundstate, structure_classifier
from .mixedmode import build_mixed, verify_mixed
from .dynamics import (
    EvolutionConfig,
    evolve,
    global_existence_monitor,
    orbit_distance,
    stability_experiment,
)
from . import errors
