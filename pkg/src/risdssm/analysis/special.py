"""Special functions used by the error-probability expressions.

Bessel, digamma, erfc and E1 come from :mod:`scipy.special`; the Whittaker
function W_{-1/2,0} is reduced to E1 through U(1, 1, z) = e^z E1(z).
"""
from __future__ import annotations

import numpy as np
from scipy import special as sp

EULER_GAMMA = float(np.euler_gamma)


def _positive(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError(f"{name} requires x > 0")
    return arr


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def q_function(x):
    """Gaussian tail probability Q(x) = erfc(x / sqrt 2) / 2."""
    return _out(0.5 * sp.erfc(np.asarray(x, dtype=float) / np.sqrt(2.0)))


def bessel_k0(x):
    return _out(sp.k0(_positive(x, "K0")))


def bessel_k1(x):
    return _out(sp.k1(_positive(x, "K1")))


def digamma(x):
    return _out(sp.psi(_positive(x, "digamma")))


def exp1(z):
    return _out(sp.exp1(_positive(z, "E1")))


def scaled_exp1(z):
    """e^z E1(z), finite for every z > 0."""
    z0 = _positive(z, "E1")
    z = np.atleast_1d(z0)
    small = z <= 500.0
    out = np.empty_like(z)
    with np.errstate(over="ignore"):
        out[small] = np.exp(z[small]) * sp.exp1(z[small])
    out[~small] = sp.hyperu(1.0, 1.0, z[~small])
    return _out(out.reshape(z0.shape))


def whittaker_w_mhalf_0(z):
    """Whittaker W_{-1/2,0}(z) = e^{z/2} sqrt(z) E1(z)."""
    z = _positive(z, "Whittaker W")
    return _out(np.exp(-z / 2.0) * np.sqrt(z) * np.asarray(scaled_exp1(z)))


def whittaker_w_mhalf_0_scaled(z):
    """e^{z/2} W_{-1/2,0}(z) = sqrt(z) e^z E1(z), without overflow for large z."""
    z = _positive(z, "Whittaker W")
    return _out(np.sqrt(z) * np.asarray(scaled_exp1(z)))


def double_factorial_ratio(v: int) -> float:
    """(2v+1)!! / (2v+2)!! as a running product of odd/(odd+1)."""
    if v < 0:
        raise ValueError("v must be >= 0")
    r = 1.0
    for j in range(v + 1):
        r *= (2 * j + 1) / (2 * j + 2)
    return r
