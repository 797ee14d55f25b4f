"""Unconditional pairwise error probabilities of the per-branch detector.

Two decoding cases are distinguished. When the Rx-side beam is decided
correctly the error event depends on eta_bar (the average squared distance of
the two hypotheses); when it is decided wrongly only the energy of the
competing symbol matters. For each case four evaluations are offered: a
finite-range integral over the Whittaker function, a convergent power series,
a closed-form bound (correct case only) and the leading asymptotic term.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .special import EULER_GAMMA, digamma, double_factorial_ratio, whittaker_w_mhalf_0_scaled

PSI_1 = -EULER_GAMMA
PSI_3_2 = 2.0 - EULER_GAMMA - 2.0 * math.log(2.0)

DEFAULT_ORDER = 128
DOUBLING_TOL = 1e-7
SERIES_VMAX = 40
SERIES_TOL = 1e-12
# the series is summed in floating point; if its largest term exceeds the sum by
# more than this factor too many digits cancel to trust the result
CANCELLATION_LIMIT = 1e6


class Method(str, enum.Enum):
    INTEGRAL = "integral"
    SERIES = "series"
    UPPER_BOUND = "bound"
    ASYMPTOTIC = "asymptotic"


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class UpepInputs:
    rho: float
    L: float
    eta_bar: float | None = None
    sym_energy: float | None = None

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("rho must be > 0")
        if not self.L >= 1:
            raise ValueError("L must be >= 1")

    @property
    def snr_correct(self) -> float:
        """rho * L^2 * eta_bar."""
        if self.eta_bar is None or not self.eta_bar > 0:
            raise ValueError("correct-beam case needs eta_bar > 0")
        return self.rho * self.L ** 2 * self.eta_bar

    @property
    def snr_wrong(self) -> float:
        """rho * L^2 * |s|^2."""
        if self.sym_energy is None or not self.sym_energy > 0:
            raise ValueError("wrong-beam case needs sym_energy > 0")
        return self.rho * self.L ** 2 * self.sym_energy


@dataclass(frozen=True)
class UpepValue:
    value: float
    method: Method
    converged: bool = True
    terms: int = 0

    @property
    def clamped(self) -> float:
        return min(max(self.value, 0.0), 1.0)

    def __float__(self) -> float:
        return self.value


@lru_cache(maxsize=8)
def _gauss_legendre(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def gauss_legendre(f, a: float, b: float, order: int = DEFAULT_ORDER) -> float:
    x, w = _gauss_legendre(order)
    t = 0.5 * (b - a) * x + 0.5 * (b + a)
    return float(0.5 * (b - a) * np.dot(w, f(t)))


def _integrate_checked(f, a: float, b: float, order: int) -> float:
    coarse = gauss_legendre(f, a, b, order)
    fine = gauss_legendre(f, a, b, 2 * order)
    if abs(fine - coarse) > DOUBLING_TOL * abs(fine):
        raise QuadratureError(
            f"Gauss-Legendre order {order} -> {2 * order} changed result by "
            f"{abs(fine - coarse) / abs(fine):.3e} (relative)")
    return coarse


# --- beam decided correctly -------------------------------------------------

def _correct_integrand(c: float):
    pref = 2.0 / (math.pi * math.sqrt(c))

    def f(theta):
        s = np.sin(theta)
        # exp(2 sin^2/c) W(4 sin^2/c) == scaled W at z = 4 sin^2 / c
        return pref * whittaker_w_mhalf_0_scaled(4.0 * s * s / c) * s
    return f


def upep_correct_integral(inp: UpepInputs, order: int = DEFAULT_ORDER) -> UpepValue:
    """Finite-range integral over theta in [0, pi/2] of the Whittaker kernel."""
    c = inp.snr_correct
    value = _integrate_checked(_correct_integrand(c), 0.0, math.pi / 2, order)
    return UpepValue(value, Method.INTEGRAL)


def upep_correct_upper_bound(inp: UpepInputs) -> UpepValue:
    """Integrand of :func:`upep_correct_integral` evaluated at theta = pi/2."""
    c = inp.snr_correct
    value = float(_correct_integrand(c)(np.array(math.pi / 2)))
    return UpepValue(value, Method.UPPER_BOUND)


def correct_series_term(v: int, c: float) -> float:
    """v-th term (v >= 1) of the correct-beam series, c = rho L^2 eta_bar."""
    x = 4.0 / c
    log_mag = v * math.log(x) - math.lgamma(v) - math.log(2.0)
    bracket = (-math.log(x) - digamma(v + 0.5) + 1.0 / v + 2.0 * digamma(v))
    return math.exp(log_mag) * double_factorial_ratio(v - 1) * bracket


def wrong_series_term(v: int, alpha: float) -> float:
    """v-th term (v >= 0) of the wrong-beam series, alpha = rho L^2 |s|^2 / 2."""
    log_mag = -(v + 1) * math.log(alpha) - math.lgamma(v + 1) - math.log(2.0)
    return math.exp(log_mag) * (math.log(alpha) + digamma(v + 1.0))


def _sum_series(term, first: int, vmax: int, tol: float, method: Method) -> UpepValue:
    total, biggest = 0.0, 0.0
    converged = False
    v = first
    for v in range(first, vmax + 1):
        t = term(v)
        total += t
        biggest = max(biggest, abs(t))
        if abs(t) < tol * abs(total):
            converged = True
            break
    if biggest > CANCELLATION_LIMIT * abs(total):
        converged = False
    return UpepValue(total, method, converged, v - first + 1)


def upep_correct_series(inp: UpepInputs, vmax: int = SERIES_VMAX,
                        tol: float = SERIES_TOL) -> UpepValue:
    """Power series in 4/(rho L^2 eta_bar), summed from v = 1 until the relative
    term size drops below ``tol``. ``converged`` is False when vmax is hit or the
    summation cancels too many digits (large 4/(rho L^2 eta_bar))."""
    c = inp.snr_correct
    return _sum_series(lambda v: correct_series_term(v, c), 1, vmax, tol, Method.SERIES)


def upep_correct_partial(inp: UpepInputs, vmax: int) -> float:
    c = inp.snr_correct
    return math.fsum(correct_series_term(v, c) for v in range(1, vmax + 1))


def upep_correct_asymptotic(inp: UpepInputs) -> UpepValue:
    c = inp.snr_correct
    value = (math.log(c / 4.0) - PSI_3_2 + 1.0 + 2.0 * PSI_1) / c
    return UpepValue(value, Method.ASYMPTOTIC)


# --- beam decided wrongly ---------------------------------------------------

def upep_wrong_integral(inp: UpepInputs) -> UpepValue:
    """exp(1/(2a)) W_{-1/2,0}(1/a) / (2 sqrt a) with a = rho L^2 |s|^2 / 2."""
    alpha = inp.snr_wrong / 2.0
    value = float(whittaker_w_mhalf_0_scaled(1.0 / alpha)) / (2.0 * math.sqrt(alpha))
    return UpepValue(value, Method.INTEGRAL)


def upep_wrong_series(inp: UpepInputs, vmax: int = SERIES_VMAX,
                      tol: float = SERIES_TOL) -> UpepValue:
    alpha = inp.snr_wrong / 2.0
    return _sum_series(lambda v: wrong_series_term(v, alpha), 0, vmax, tol, Method.SERIES)


def upep_wrong_partial(inp: UpepInputs, vmax: int) -> float:
    alpha = inp.snr_wrong / 2.0
    return math.fsum(wrong_series_term(v, alpha) for v in range(0, vmax + 1))


def upep_wrong_asymptotic(inp: UpepInputs) -> UpepValue:
    c = inp.snr_wrong
    value = (math.log(c / 2.0) + PSI_1) / c
    return UpepValue(value, Method.ASYMPTOTIC)


_CORRECT = {
    Method.INTEGRAL: upep_correct_integral,
    Method.SERIES: upep_correct_series,
    Method.UPPER_BOUND: upep_correct_upper_bound,
    Method.ASYMPTOTIC: upep_correct_asymptotic,
}
_WRONG = {
    Method.INTEGRAL: upep_wrong_integral,
    Method.SERIES: upep_wrong_series,
    # no closed-form bound exists for this case; the exact value stands in
    Method.UPPER_BOUND: upep_wrong_integral,
    Method.ASYMPTOTIC: upep_wrong_asymptotic,
}


def upep_correct(inp: UpepInputs, method: Method | str = Method.INTEGRAL) -> UpepValue:
    return _CORRECT[Method(method)](inp)


def upep_wrong(inp: UpepInputs, method: Method | str = Method.INTEGRAL) -> UpepValue:
    return _WRONG[Method(method)](inp)
