"""Optimal (ML) and suboptimal per-branch detectors.

The scalar detectors do their arithmetic through :class:`OpCounter` so that the
number of real multiplications and additions can be read back. Accounting
follows the usual convention: complex x complex = 4 mult + 2 add, real x
complex = 2 mult, complex +/- complex = 2 add, |z|^2 = 2 mult + 1 add. Metric
accumulation and comparisons are not charged.

The batch functions at the bottom make the same decisions on whole arrays of
trials and are what the Monte Carlo driver uses.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelRealization
from .modem import Constellation, TxTriple


class DetectorKind(str, enum.Enum):
    SUBOPTIMAL = "suboptimal"
    OPTIMAL = "optimal"


@dataclass
class OpCounter:
    mults: int = 0
    adds: int = 0

    def cmul(self, a: complex, b: complex) -> complex:
        self.mults += 4
        self.adds += 2
        return a * b

    def rmul(self, r: float, z: complex) -> complex:
        self.mults += 2
        return r * z

    def rrmul(self, a: float, b: float) -> float:
        self.mults += 1
        return a * b

    def csub(self, a: complex, b: complex) -> complex:
        self.adds += 2
        return a - b

    def abs2(self, z: complex) -> float:
        self.mults += 2
        self.adds += 1
        return z.real * z.real + z.imag * z.imag


@dataclass
class DetectionResult:
    triple: TxTriple
    metric: float
    real_mults: int
    real_adds: int
    branch_energy: list[float] = field(default_factory=list)


def _model(ops: OpCounter, gain: complex, g: complex, s: complex, amp: float,
           sqrt_ps: float) -> complex:
    # h*g*s: 8 mult + 4 add; sqrt(Ps)*L then times the product: 3 mult
    prod = ops.cmul(ops.cmul(gain, g), s)
    return ops.rmul(ops.rrmul(sqrt_ps, amp), prod)


def detect_suboptimal(y, cr: ChannelRealization, constellation: Constellation, L: int,
                      transmit_power: float = 1.0) -> DetectionResult:
    """Joint argmin over (m, n, k) of |y[m] - sqrt(Ps) L h_m g_n s_k|^2.

    Each hypothesis is scored against its own branch only. The branch energies
    |y[m]|^2 are computed as well (2M mult, M add) and returned for inspection.
    Ties go to the lexicographically smallest (m, n, k).
    """
    ops = OpCounter()
    sqrt_ps = float(np.sqrt(transmit_power))
    energy = [ops.abs2(complex(v)) for v in y]
    best, best_t = np.inf, None
    for m in range(cr.M):
        for n in range(cr.N):
            for k, s in enumerate(constellation.points):
                r = _model(ops, complex(cr.h[m]), complex(cr.g[n]), complex(s), float(L), sqrt_ps)
                d = ops.abs2(ops.csub(complex(y[m]), r))
                if d < best:
                    best, best_t = d, TxTriple(n, m, k)
    return DetectionResult(best_t, float(best), ops.mults, ops.adds, energy)


def detect_optimal(y, cr: ChannelRealization, constellation: Constellation, L: int,
                   transmit_power: float = 1.0) -> DetectionResult:
    """ML decision: argmin over (m, n, k) of sum_m' |y[m'] - x_m'(n, m, k)|^2,
    where the hypothesised signal x is non-zero only on branch m."""
    ops = OpCounter()
    sqrt_ps = float(np.sqrt(transmit_power))
    best, best_t = np.inf, None
    for m in range(cr.M):
        for n in range(cr.N):
            for k, s in enumerate(constellation.points):
                metric = 0.0
                for mp in range(cr.M):
                    gain = complex(cr.h[m]) if mp == m else 0j
                    r = _model(ops, gain, complex(cr.g[n]), complex(s), float(L), sqrt_ps)
                    metric += ops.abs2(ops.csub(complex(y[mp]), r))
                if metric < best:
                    best, best_t = metric, TxTriple(n, m, k)
    return DetectionResult(best_t, float(best), ops.mults, ops.adds)


def complexity_counts(M: int, N: int, K: int, kind: DetectorKind | str) -> tuple[int, int]:
    """Closed-form (real mults, real adds) per detection."""
    if min(M, N, K) < 1:
        raise ValueError("M, N, K must be positive")
    if DetectorKind(kind) is DetectorKind.SUBOPTIMAL:
        return 13 * M * N * K + 2 * M, 7 * M * N * K + M
    return 13 * M * M * N * K, 7 * M * M * N * K


def full_metric(y, cr: ChannelRealization, constellation: Constellation, L: int,
                t: TxTriple, transmit_power: float = 1.0) -> float:
    """ML metric of one hypothesis, uninstrumented."""
    x = np.zeros(cr.M, dtype=complex)
    x[t.m] = np.sqrt(transmit_power) * L * cr.h[t.m] * cr.g[t.n] * constellation.points[t.k]
    return float(np.sum(np.abs(np.asarray(y) - x) ** 2))


# ---------------------------------------------------------------------------
# batch detection; hypotheses flattened in (m, n, k) order, see Mapper.flat_index

def hypothesis_signals(g: np.ndarray, h: np.ndarray, points: np.ndarray, amp: float) -> np.ndarray:
    """amp * h_m * g_n * s_k for a batch, shape (T, M, N, K)."""
    return amp * h[:, :, None, None] * g[:, None, :, None] * points[None, None, None, :]


def batch_detect_suboptimal(y: np.ndarray, g: np.ndarray, h: np.ndarray, points: np.ndarray,
                            amp: float) -> np.ndarray:
    x = hypothesis_signals(g, h, points, amp)
    d = np.abs(y[:, :, None, None] - x) ** 2
    return np.argmin(d.reshape(len(y), -1), axis=1)


def batch_detect_optimal(y: np.ndarray, g: np.ndarray, h: np.ndarray, points: np.ndarray,
                         amp: float) -> np.ndarray:
    # sum_m' |y_m' - x_m'|^2 = |y_m - x|^2 - |y_m|^2 + sum_m' |y_m'|^2; the last term
    # is common to all hypotheses
    x = hypothesis_signals(g, h, points, amp)
    e = np.abs(y) ** 2
    d = np.abs(y[:, :, None, None] - x) ** 2 - e[:, :, None, None]
    return np.argmin(d.reshape(len(y), -1), axis=1)


def batch_detect(kind: DetectorKind | str, y, g, h, points, amp) -> np.ndarray:
    if DetectorKind(kind) is DetectorKind.SUBOPTIMAL:
        return batch_detect_suboptimal(y, g, h, points, amp)
    return batch_detect_optimal(y, g, h, points, amp)
