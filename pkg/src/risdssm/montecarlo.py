"""Monte Carlo ABEP estimation for RIS-DSSM and the single-hop SSM baseline.

Randomness is counter-based: trial ``i`` at SNR index ``j`` reads a fixed block
of uniforms from a Philox stream keyed by (seed, j), starting at position
``i * stride``. Any split of the trial range into chunks, and any number of
worker threads, therefore sees exactly the same draws.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import SystemConfig, noise_power, validate
from .detectors import DetectorKind, batch_detect
from .modem import Mapper, build_constellation, popcount

LOW_CONFIDENCE_ERRORS = 100
EARLY_STOP_ERRORS = 10_000
SSM_SCATTERERS = 4
SSM_ORDER = 2


class SystemKind(str, enum.Enum):
    RIS_DSSM = "ris-dssm"
    SSM = "ssm"


@dataclass(frozen=True)
class AbepPoint:
    snr_db: float
    errors: int
    trials: int
    bits_per_trial: int
    detector: DetectorKind
    system: SystemKind

    @property
    def abep(self) -> float:
        return self.errors / (self.trials * self.bits_per_trial)

    @property
    def low_confidence(self) -> bool:
        return self.errors < LOW_CONFIDENCE_ERRORS

    @property
    def std_error(self) -> float:
        p = self.abep
        return math.sqrt(max(p * (1 - p), 0.0) / (self.trials * self.bits_per_trial))


@dataclass
class AbepCurve:
    detector: DetectorKind
    system: SystemKind
    points: list[AbepPoint] = field(default_factory=list)

    @property
    def snr_db(self) -> np.ndarray:
        return np.array([p.snr_db for p in self.points])

    @property
    def abep(self) -> np.ndarray:
        return np.array([p.abep for p in self.points])

    @property
    def errors(self) -> np.ndarray:
        return np.array([p.errors for p in self.points])


# ---------------------------------------------------------------------------
# counter-based trial streams

def _stream_key(seed: int, snr_index: int) -> np.ndarray:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(snr_index,))
    return ss.generate_state(2, dtype=np.uint64)


def trial_uniforms(seed: int, snr_index: int, start: int, count: int, stride: int) -> np.ndarray:
    """Uniforms in [0, 1) for trials ``start .. start+count-1``, shape (count, stride).

    ``stride`` must be a multiple of 4: Philox emits four 64-bit words per
    counter step and every double consumes one word.
    """
    if stride % 4:
        raise ValueError("stride must be a multiple of 4")
    bitgen = np.random.Philox(key=_stream_key(seed, snr_index))
    bitgen.advance(start * stride // 4)
    return np.random.Generator(bitgen).random((count, stride))


def _complex_normals(u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    # Box-Muller in polar form; 1 - u lies in (0, 1]
    return np.sqrt(-np.log1p(-u1)) * np.exp(2j * np.pi * u2)


def _padded(n: int) -> int:
    return -(-n // 4) * 4


@dataclass(frozen=True)
class _Link:
    """Everything a worker needs to run a block of trials."""

    N: int          # Tx-side scatterers (1 for SSM)
    M: int
    points: np.ndarray
    amp: float      # sqrt(Ps) * L  (sqrt(Ps) for SSM)
    bits: int
    label_to_flat: np.ndarray
    flat_labels: np.ndarray

    @property
    def stride(self) -> int:
        return _padded(1 + 2 * (self.N + 2 * self.M))

    def run_block(self, seed: int, snr_index: int, n0: float, start: int, count: int,
                  detectors: tuple[DetectorKind, ...]) -> list[int]:
        u = trial_uniforms(seed, snr_index, start, count, self.stride)
        labels = np.minimum((u[:, 0] * (1 << self.bits)).astype(np.int64), (1 << self.bits) - 1)
        flat = self.label_to_flat[labels]
        K = len(self.points)
        k = flat % K
        m = flat // (K * self.N)
        n = (flat // K) % self.N
        o = 1
        g = _complex_normals(u[:, o:o + self.N], u[:, o + self.N:o + 2 * self.N])
        o += 2 * self.N
        h = _complex_normals(u[:, o:o + self.M], u[:, o + self.M:o + 2 * self.M])
        o += 2 * self.M
        noise = _complex_normals(u[:, o:o + self.M], u[:, o + self.M:o + 2 * self.M]) * math.sqrt(n0)
        rows = np.arange(count)
        y = noise
        y[rows, m] += self.amp * h[rows, m] * g[rows, n] * self.points[k]
        errors = []
        for det in detectors:
            decided = batch_detect(det, y, g, h, self.points, self.amp)
            errors.append(int(popcount(self.flat_labels[decided] ^ labels).sum()))
        return errors


def _dssm_link(cfg: SystemConfig, L: int | None = None) -> _Link:
    const = build_constellation(cfg.modulation_kind, cfg.K)
    mapper = Mapper(cfg.N, cfg.M, const)
    amp = math.sqrt(cfg.transmit_power) * (cfg.L if L is None else L)
    return _Link(cfg.N, cfg.M, const.points, amp, mapper.bits,
                 mapper.label_to_flat(), mapper.flat_labels())


def _ssm_link(cfg: SystemConfig, scatterers: int = SSM_SCATTERERS, order: int = SSM_ORDER) -> _Link:
    # single hop: one "Tx-side" slot with unit gain is emulated by N = 1 and g = 1
    const = build_constellation("PSK", order)
    mapper = Mapper(1, scatterers, const)
    return _SsmLink(1, scatterers, const.points, math.sqrt(cfg.transmit_power), mapper.bits,
                    mapper.label_to_flat(), mapper.flat_labels())


class _SsmLink(_Link):
    def run_block(self, seed, snr_index, n0, start, count, detectors):
        u = trial_uniforms(seed, snr_index, start, count, self.stride)
        labels = np.minimum((u[:, 0] * (1 << self.bits)).astype(np.int64), (1 << self.bits) - 1)
        flat = self.label_to_flat[labels]
        K = len(self.points)
        k, m = flat % K, flat // K
        o = 1
        h = _complex_normals(u[:, o:o + self.M], u[:, o + self.M:o + 2 * self.M])
        o += 2 * self.M
        noise = _complex_normals(u[:, o:o + self.M], u[:, o + self.M:o + 2 * self.M]) * math.sqrt(n0)
        rows = np.arange(count)
        y = noise
        y[rows, m] += self.amp * h[rows, m] * self.points[k]
        g = np.ones((count, 1), dtype=complex)
        errors = []
        for det in detectors:
            decided = batch_detect(det, y, g, h, self.points, self.amp)
            errors.append(int(popcount(self.flat_labels[decided] ^ labels).sum()))
        return errors


def _chunk_size(link: _Link) -> int:
    per_trial = link.M * link.N * len(link.points)
    return int(max(1024, min(1 << 16, (1 << 21) // per_trial)))


def _run_point(link: _Link, seed: int, snr_index: int, snr_db: float, trials: int,
               detectors: tuple[DetectorKind, ...], threads: int,
               early_stop: int | None, chunk: int | None) -> tuple[list[int], int]:
    n0 = noise_power(snr_db)
    chunk = chunk or _chunk_size(link)
    starts = list(range(0, trials, chunk))
    totals = [0] * len(detectors)
    done = 0

    def work(start):
        return link.run_block(seed, snr_index, n0, start, min(chunk, trials - start), detectors)

    if early_stop is None:
        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                results = list(pool.map(work, starts))
        else:
            results = [work(s) for s in starts]
        for r in results:
            totals = [a + b for a, b in zip(totals, r)]
        return totals, trials
    # early stop: chunks are consumed in order so the stopping chunk is deterministic
    for start in starts:
        r = work(start)
        totals = [a + b for a, b in zip(totals, r)]
        done = min(trials, start + chunk)
        if min(totals) >= early_stop:
            break
    return totals, done


def _simulate(cfg: SystemConfig, link: _Link, system: SystemKind,
              detectors: tuple[DetectorKind, ...], threads: int,
              early_stop: int | None, chunk: int | None) -> list[AbepCurve]:
    curves = [AbepCurve(d, system) for d in detectors]
    for j, snr_db in enumerate(cfg.snr_grid_db):
        errs, done = _run_point(link, cfg.rng_seed, j, snr_db, cfg.trials_per_snr, detectors,
                                threads, early_stop, chunk)
        for curve, e in zip(curves, errs):
            curve.points.append(AbepPoint(float(snr_db), e, done, link.bits, curve.detector, system))
    return curves


def run_abep(cfg: SystemConfig, detector: DetectorKind | str = DetectorKind.SUBOPTIMAL,
             system: SystemKind | str = SystemKind.RIS_DSSM, *, threads: int = 1,
             early_stop: int | None = None, chunk: int | None = None) -> AbepCurve:
    """Simulated ABEP over the configured SNR grid.

    ``early_stop`` (e.g. :data:`EARLY_STOP_ERRORS`) ends a point once that many
    bit errors are seen; the trial count then depends on the chunk size.
    """
    validate(cfg)
    system = SystemKind(system)
    link = _dssm_link(cfg) if system is SystemKind.RIS_DSSM else _ssm_link(cfg)
    return _simulate(cfg, link, system, (DetectorKind(detector),), threads, early_stop, chunk)[0]


def run_detector_comparison(cfg: SystemConfig, *, threads: int = 1,
                            chunk: int | None = None) -> tuple[AbepCurve, AbepCurve]:
    """Suboptimal and optimal curves from the very same trials."""
    validate(cfg)
    sub, opt = _simulate(cfg, _dssm_link(cfg), SystemKind.RIS_DSSM,
                         (DetectorKind.SUBOPTIMAL, DetectorKind.OPTIMAL), threads, None, chunk)
    return sub, opt
