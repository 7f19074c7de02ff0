"""Bessel functions of the first kind J_l and their asymptotic gap.

Power series for x <= max(12, 2l), downward (Miller) recurrence normalized
by J_0 + 2 sum J_2k = 1 for larger x.  Supported range: 0 <= l <= 64,
0 <= x <= 1e4.
"""
import math

import numpy as np

from . import kernels
from .errors import DomainError

L_MAX = 64
X_MAX = 1.0e4


def _series_cut(l):
    # The alternating series loses ~ I_l(x)/|J_l(x)| digits to cancellation,
    # so it is only used where that ratio is harmless; the downward
    # recurrence covers everything beyond.
    return max(8.0, 0.6 * l)


def _validate(l, x):
    if not isinstance(l, (int, np.integer)) or l < 0 or l > L_MAX:
        raise DomainError(f"order l must be an integer in [0, {L_MAX}], got {l}")
    if np.any(x < 0) or np.any(x > X_MAX):
        raise DomainError(f"argument must lie in [0, {X_MAX}]")


def bessel_j(l, x):
    """J_l(x) for integer order 0 <= l <= 64 and 0 <= x <= 1e4."""
    _validate(l, x)
    if not math.isfinite(x):
        raise DomainError("argument must be finite")
    return kernels.bessel_scalar(int(l), float(x), _series_cut(l))


def bessel_j_array(l, x):
    """Vectorized J_l over a float array (same algorithm split as bessel_j)."""
    x = np.asarray(x, dtype=np.float64)
    _validate(l, x)
    return kernels.bessel_array(int(l), x, _series_cut(l))


def bessel_j_signed(l, x):
    """J_l for any integer order via J_{-l} = (-1)^l J_l."""
    if l >= 0:
        return bessel_j_array(l, x)
    return (-1.0) ** (-l) * bessel_j_array(-l, x)


def bessel_jprime_array(l, x):
    """dJ_l/dx from 2 J_l' = J_{l-1} - J_{l+1}."""
    return 0.5 * (bessel_j_signed(l - 1, x) - bessel_j_signed(l + 1, x))


def asymptotic_gap(l, x):
    """|J_l(x) - sqrt(2/(pi x)) cos(x - l pi/2 - pi/4)| for x >= 10."""
    if x < 10.0:
        raise DomainError(f"asymptotic gap needs x >= 10, got {x}")
    lead = math.sqrt(2.0 / (math.pi * x)) * math.cos(x - 0.5 * l * math.pi - 0.25 * math.pi)
    return abs(bessel_j(l, x) - lead)
