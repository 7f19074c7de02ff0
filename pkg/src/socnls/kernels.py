"""Hot numeric kernels: numba-compiled versions with a pure-numpy fallback.

The numba path is used when numba imports successfully and the environment
variable ``SOCNLS_NO_NUMBA`` is not set to 1/true/yes.  Both paths are
sequential and deterministic; ``benchmarks/bench_kernels.py`` compares them.
"""
import math
import os

import numpy as np

_disabled = os.environ.get("SOCNLS_NO_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _disabled:
        raise ImportError("numba disabled by SOCNLS_NO_NUMBA")
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:
    NUMBA_ENABLED = False

    def njit(*args, **kwargs):  # identity decorator so the sources below still parse
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


# ---------------------------------------------------------------------------
# compensated summation

@njit(cache=True)
def _ksum_numba(x):
    # Kahan-Babuska-Neumaier running compensation, fixed row-major order
    s = 0.0
    c = 0.0
    for i in range(x.shape[0]):
        v = x[i]
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


def _ksum_numpy(x):
    return math.fsum(x)


def ksum(x):
    """Compensated sum of a 1D float64 array in a fixed (row-major) order."""
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    if NUMBA_ENABLED:
        return _ksum_numba(x)
    return _ksum_numpy(x)


# ---------------------------------------------------------------------------
# Bessel J_l: power series for small argument, Miller downward recurrence
# with even-order normalization for large argument.

_SERIES_TOL = 1e-18
_SERIES_MAX_TERMS = 200


@njit(cache=True)
def _bessel_series_scalar(l, x):
    half = 0.5 * x
    # leading term (x/2)^l / l!
    t = 1.0
    for k in range(1, l + 1):
        t *= half / k
    s = t
    q = half * half
    for n in range(1, _SERIES_MAX_TERMS + 1):
        t *= -q / (n * (n + l))
        s += t
        if abs(t) < _SERIES_TOL * (abs(s) + 1e-300):
            break
    return s


@njit(cache=True)
def _bessel_miller_scalar(l, x, mstart):
    jp = 0.0
    j = 1e-30
    out = 0.0
    norm = 0.0
    for k in range(mstart, 0, -1):
        jm = (2.0 * k / x) * j - jp
        jp = j
        j = jm
        if k - 1 == l:
            out = j
        if (k - 1) % 2 == 0:
            if k - 1 == 0:
                norm += j
            else:
                norm += 2.0 * j
    return out / norm


def _miller_start(l, x):
    # start high enough that J_mstart/J_peak < ~1e-18 (Airy-tail estimate)
    return int(x + 16.0 * x ** (1.0 / 3.0) + 25) + l


@njit(cache=True)
def _bessel_array_numba(l, x, small_cut):
    out = np.empty_like(x)
    for i in range(x.shape[0]):
        xi = x[i]
        if xi <= small_cut:
            out[i] = _bessel_series_scalar(l, xi)
        else:
            mstart = int(xi + 16.0 * xi ** (1.0 / 3.0) + 25) + l
            out[i] = _bessel_miller_scalar(l, xi, mstart)
    return out


def _bessel_series_numpy(l, x):
    half = 0.5 * x
    t = np.ones_like(x)
    for k in range(1, l + 1):
        t *= half / k
    s = t.copy()
    q = half * half
    for n in range(1, _SERIES_MAX_TERMS + 1):
        t = t * (-q / (n * (n + l)))
        s += t
        if np.all(np.abs(t) < _SERIES_TOL * (np.abs(s) + 1e-300)):
            break
    return s


def _bessel_miller_numpy(l, x):
    # one start index for the whole array means small-x lanes recur far
    # above their turning point and can overflow; the recurrence is linear,
    # so those lanes are rescaled in flight without changing out/norm
    mstart = _miller_start(l, float(np.max(x)))
    jp = np.zeros_like(x)
    j = np.full_like(x, 1e-30)
    out = np.zeros_like(x)
    norm = np.zeros_like(x)
    for k in range(mstart, 0, -1):
        jm = (2.0 * k / x) * j - jp
        jp = j
        j = jm
        big = np.abs(j) > 1e250
        if np.any(big):
            scale = np.where(big, 1e-250, 1.0)
            j = j * scale
            jp = jp * scale
            out = out * scale
            norm = norm * scale
        if k - 1 == l:
            out = j.copy()
        if (k - 1) % 2 == 0:
            norm += j if k - 1 == 0 else 2.0 * j
    return out / norm


def bessel_array(l, x, small_cut):
    """J_l on a float64 array, series below ``small_cut`` and Miller above."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if NUMBA_ENABLED:
        return _bessel_array_numba(l, x.ravel(), small_cut).reshape(x.shape)
    flat = x.ravel()
    out = np.empty_like(flat)
    small = flat <= small_cut
    if np.any(small):
        out[small] = _bessel_series_numpy(l, flat[small])
    if np.any(~small):
        out[~small] = _bessel_miller_numpy(l, flat[~small])
    return out.reshape(x.shape)


def bessel_scalar(l, x, small_cut):
    if NUMBA_ENABLED:
        if x <= small_cut:
            return _bessel_series_scalar(l, x)
        return _bessel_miller_scalar(l, x, _miller_start(l, x))
    return float(bessel_array(l, np.array([x]), small_cut)[0])


# ---------------------------------------------------------------------------
# exact pointwise nonlinear substep of the split-step integrator

@njit(cache=True)
def _nl_phase_numba(pp, pm, dt, lp, lm, l0):
    outp = np.empty_like(pp)
    outm = np.empty_like(pm)
    for i in range(pp.shape[0]):
        ap = pp[i].real * pp[i].real + pp[i].imag * pp[i].imag
        am = pm[i].real * pm[i].real + pm[i].imag * pm[i].imag
        thp = dt * (lp * ap + l0 * am)
        thm = dt * (lm * am + l0 * ap)
        outp[i] = pp[i] * complex(math.cos(thp), math.sin(thp))
        outm[i] = pm[i] * complex(math.cos(thm), math.sin(thm))
    return outp, outm


def nonlinear_phase(psi_plus, psi_minus, dt, lam_plus, lam_minus, lam_zero):
    """Apply psi -> exp(i dt (lam |psi|^2 + lam0 |other|^2)) psi pointwise."""
    if NUMBA_ENABLED:
        shape = psi_plus.shape
        outp, outm = _nl_phase_numba(
            np.ascontiguousarray(psi_plus).ravel(),
            np.ascontiguousarray(psi_minus).ravel(),
            dt, lam_plus, lam_minus, lam_zero,
        )
        return outp.reshape(shape), outm.reshape(shape)
    ap = np.abs(psi_plus) ** 2
    am = np.abs(psi_minus) ** 2
    outp = psi_plus * np.exp(1j * dt * (lam_plus * ap + lam_zero * am))
    outm = psi_minus * np.exp(1j * dt * (lam_minus * am + lam_zero * ap))
    return outp, outm
