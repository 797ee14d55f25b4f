"""Product-channel statistics, conditional PEPs, the ABEP union bound,
diversity order and the RIS-DSSM vs. SSM crossover."""
from __future__ import annotations

import math
from collections import defaultdict
from typing import Callable, Sequence

import numpy as np

from ..config import SystemConfig, validate
from ..modem import Mapper, build_constellation
from .special import bessel_k0, bessel_k1, q_function
from .upep import PSI_1, PSI_3_2, Method, UpepInputs, upep_correct, upep_wrong

_ROUND = 12


class SeriesDivergenceError(ArithmeticError):
    pass


class ScanLimitExceeded(RuntimeError):
    pass


def eta_bar(s_k: complex, s_khat: complex, same_n: bool) -> float:
    """Average of |g_n s_k - g_nhat s_khat|^2 over unit-variance gains."""
    if same_n:
        return abs(s_k - s_khat) ** 2
    return abs(s_k) ** 2 + abs(s_khat) ** 2


def product_channel_pdf(x):
    """Density of |g h|^2 for independent CN(0,1) gains: 2 K0(2 sqrt x)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("pdf defined for x > 0")
    out = 2.0 * np.asarray(bessel_k0(2.0 * np.sqrt(x)))
    return float(out) if out.ndim == 0 else out


def product_channel_cdf(x):
    """1 - 2 sqrt(x) K1(2 sqrt x), with F(0) = 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("cdf defined for x >= 0")
    out = np.zeros_like(x)
    pos = x > 0
    r = np.sqrt(x[pos])
    out[pos] = 1.0 - 2.0 * r * np.asarray(bessel_k1(2.0 * r))
    return float(out) if out.ndim == 0 else out


def cpep_correct(rho: float, L: float, h_m: complex, g_n: complex, g_nhat: complex,
                 s_k: complex, s_khat: complex) -> float:
    """Pairwise error probability for a fixed channel when the Rx beam is right."""
    diff = g_n * s_k - g_nhat * s_khat
    if diff == 0:
        raise ValueError("hypotheses coincide")
    return q_function(math.sqrt(rho * abs(L * h_m * diff) ** 2 / 2.0))


def cpep_wrong(rho: float, L: float, h_mhat: complex, g_nhat: complex, s_khat: complex) -> float:
    """Pairwise error probability for a fixed channel when the Rx beam is wrong."""
    return 0.5 * math.exp(-rho * L ** 2 * abs(h_mhat * g_nhat) ** 2 * abs(s_khat) ** 2 / 2.0)


def pair_groups(N: int, M: int, constellation) -> dict[tuple[str, float], int]:
    """Bit-error weight of every ordered hypothesis pair, grouped by which UPEP it
    needs: ("correct", eta_bar) or ("wrong", |s_khat|^2)."""
    mapper = Mapper(N, M, constellation)
    table = mapper.bit_error_table()
    pts = constellation.points
    groups: dict[tuple[str, float], int] = defaultdict(int)
    size = N * M * len(pts)
    for a in range(size):
        ta = mapper.unflatten(a)
        for b in range(size):
            if a == b:
                continue
            tb = mapper.unflatten(b)
            if ta.m == tb.m:
                key = ("correct", round(eta_bar(pts[ta.k], pts[tb.k], ta.n == tb.n), _ROUND))
            else:
                key = ("wrong", round(abs(pts[tb.k]) ** 2, _ROUND))
            groups[key] += int(table[a, b])
    return dict(groups)


def _groups_for(cfg: SystemConfig):
    return _group_cache(cfg.N, cfg.M, cfg.K, cfg.modulation_kind)


_GROUPS: dict = {}


def _group_cache(N, M, K, kind):
    key = (N, M, K, str(kind))
    if key not in _GROUPS:
        _GROUPS[key] = pair_groups(N, M, build_constellation(kind, K))
    return _GROUPS[key]


def abep_union_bound(cfg: SystemConfig, rho: float, method: Method | str = Method.INTEGRAL,
                     *, L: float | None = None, strict: bool = True) -> float:
    """Union bound on the ABEP of the per-branch detector at linear SNR ``rho``.

    Every ordered pair of distinct hypotheses contributes its bit-error count
    times its UPEP; the total is normalised by NMK log2(NMK). The value is not
    clamped to [0, 1]. With the series method a non-convergent term raises
    SeriesDivergenceError, or yields NaN when ``strict`` is False.
    """
    validate(cfg)
    method = Method(method)
    L = cfg.L if L is None else L
    terms = []
    for (case, param), weight in sorted(_groups_for(cfg).items()):
        if case == "correct":
            val = upep_correct(UpepInputs(rho, L, eta_bar=param), method)
        else:
            val = upep_wrong(UpepInputs(rho, L, sym_energy=param), method)
        if not val.converged:
            if strict:
                raise SeriesDivergenceError(
                    f"{case}-beam series did not converge at rho={rho:g}, L={L}, param={param}")
            return math.nan
        terms.append(weight * val.value)
    size = cfg.N * cfg.M * cfg.K
    return math.fsum(terms) / (size * cfg.bits_per_use)


def abep_curve(cfg: SystemConfig, snr_db: Sequence[float], method: Method | str = Method.INTEGRAL,
               **kw) -> np.ndarray:
    return np.array([abep_union_bound(cfg, 10 ** (x / 10), method, **kw) for x in snr_db])


def snr_at_target(snr_db: Sequence[float], values: Sequence[float], target: float) -> float:
    """SNR (dB) at which a decreasing curve crosses ``target``; linear
    interpolation of log10(value) between the bracketing grid points."""
    x = np.asarray(snr_db, float)
    y = np.log10(np.asarray(values, float))
    t = math.log10(target)
    for i in range(len(x) - 1):
        if y[i] >= t >= y[i + 1] and y[i] != y[i + 1]:
            return float(x[i] + (t - y[i]) * (x[i + 1] - x[i]) / (y[i + 1] - y[i]))
    return math.nan


def snr_for_abep(cfg: SystemConfig, target: float, method: Method | str = Method.INTEGRAL,
                 lo_db: float = -60.0, hi_db: float = 80.0, tol_db: float = 1e-6) -> float:
    """Bisection for the SNR at which the analytical bound equals ``target``."""
    f = lambda x: math.log(abep_union_bound(cfg, 10 ** (x / 10), method)) - math.log(target)
    if f(lo_db) < 0 or f(hi_db) > 0:
        raise ValueError("target not bracketed")
    while hi_db - lo_db > tol_db:
        mid = 0.5 * (lo_db + hi_db)
        if f(mid) > 0:
            lo_db = mid
        else:
            hi_db = mid
    return 0.5 * (lo_db + hi_db)


def diversity_order(pep: Callable[[float], float], rho_lo_db: float, rho_hi_db: float,
                    points: int = 21) -> float:
    """Least-squares slope of -log2 P against log2 rho over a dB range."""
    if not rho_hi_db > rho_lo_db:
        raise ValueError("need rho_hi_db > rho_lo_db")
    db = np.linspace(rho_lo_db, rho_hi_db, points)
    rho = 10 ** (db / 10)
    p = np.array([float(pep(r)) for r in rho])
    slope = np.polyfit(np.log2(rho), np.log2(p), 1)[0]
    return float(-slope)


# --- conventional SSM and the crossover in L -------------------------------

def ssm_upep_asymptotic(rho: float, value: float, case: str) -> float:
    """High-SNR SSM UPEP: 24/(13 rho eta_bar) (correct beam) or 1/(rho |s|^2)."""
    if case == "correct":
        return 24.0 / (13.0 * rho * value)
    if case == "wrong":
        return 1.0 / (rho * value)
    raise ValueError(f"unknown case {case!r}")


def ssm_upep_wrong_exact(rho: float, sym_energy: float) -> float:
    return 1.0 / (rho * sym_energy + 2.0)


def crossover_lhs_correct(L: float, rho: float, eta: float) -> float:
    k = 13.0 / 24.0
    return L ** 2 - k * math.log(rho * L ** 2 * eta / 4.0) + k * (PSI_3_2 - 1.0 - 2.0 * PSI_1)


def crossover_lhs_wrong(L: float, rho: float, sym_energy: float) -> float:
    return L ** 2 - math.log(rho * L ** 2 * sym_energy / 2.0) - PSI_1


DEFAULT_SCAN_LIMIT = 10_000


def _first_satisfying(lhs, limit):
    for L in range(1, limit + 1):
        if lhs(L) <= 0:
            return L
    return None


def crossover_min_L(rho: float, eta_bar: float, sym_energy: float,
                    scan_limit: int = DEFAULT_SCAN_LIMIT) -> tuple[int | None, int | None]:
    """Smallest integer L (scanning up from 1) whose crossover left-hand side is
    <= 0, for the correct- and wrong-beam cases; None when no L up to
    ``scan_limit`` qualifies."""
    if min(rho, eta_bar, sym_energy) <= 0:
        raise ValueError("arguments must be positive")
    return (_first_satisfying(lambda L: crossover_lhs_correct(L, rho, eta_bar), scan_limit),
            _first_satisfying(lambda L: crossover_lhs_wrong(L, rho, sym_energy), scan_limit))


def crossover_upper_edge(lhs: Callable[[int], float], scan_limit: int = DEFAULT_SCAN_LIMIT) -> int:
    """Largest L of the (prefix-shaped) set {L : lhs(L) <= 0}; 0 if it is empty.

    The left-hand sides grow like L^2, so the set is a prefix of the integers.
    One past this edge is the first L where the RIS-DSSM asymptote drops below
    the SSM one.
    """
    edge = 0
    for L in range(1, scan_limit + 1):
        if lhs(L) > 0:
            return edge
        edge = L
    raise ScanLimitExceeded(f"left-hand side still <= 0 at L={scan_limit}")


def min_L_outperforming_ssm(rho: float, eta_bar: float, sym_energy: float,
                            scan_limit: int = DEFAULT_SCAN_LIMIT) -> tuple[int, int]:
    ec = crossover_upper_edge(lambda L: crossover_lhs_correct(L, rho, eta_bar), scan_limit)
    ew = crossover_upper_edge(lambda L: crossover_lhs_wrong(L, rho, sym_energy), scan_limit)
    return ec + 1, ew + 1
