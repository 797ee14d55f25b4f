"""Scatterer gains, array responses and the per-branch receive model.

Simulation runs on the post-alignment scalar model: after the Rx phase-shifter
network, branch ``m`` carries ``sqrt(Ps) * L * h_m * g_n * s + noise`` when
``m`` is the active Rx-side scatterer and noise otherwise.
:func:`full_array_branch_outputs` builds the actual array products so that the
scalar model can be checked against finite arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .modem import TxTriple

HALF_WAVELENGTH = 0.5


def complex_normal(rng: np.random.Generator, size=None, var: float = 1.0) -> np.ndarray:
    """CN(0, var) draws: two independent real Gaussians of variance var/2."""
    re = rng.standard_normal(size)
    im = rng.standard_normal(size)
    return np.sqrt(var / 2.0) * (re + 1j * im)


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    g: np.ndarray  # Tx-RIS scatterer gains, shape (N,)
    h: np.ndarray  # RIS-Rx scatterer gains, shape (M,)

    @property
    def N(self) -> int:
        return len(self.g)

    @property
    def M(self) -> int:
        return len(self.h)


def draw_realization(rng: np.random.Generator, N: int, M: int) -> ChannelRealization:
    g = complex_normal(rng, N)
    h = complex_normal(rng, M)
    return ChannelRealization(g, h)


@dataclass(frozen=True, eq=False)
class SteeringVector:
    entries: np.ndarray
    geometry: str  # "ULA" or "UPA"
    angles: tuple[float, ...]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __len__(self) -> int:
        return len(self.entries)


def ula_steering(angle: float, count: int,
                 spacing_over_lambda: float = HALF_WAVELENGTH) -> SteeringVector:
    """Unit-norm ULA response, entry i = exp(j 2pi d i sin(angle)) / sqrt(count)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    i = np.arange(count)
    v = np.exp(2j * np.pi * spacing_over_lambda * i * np.sin(angle)) / np.sqrt(count)
    return SteeringVector(v, "ULA", (float(angle),))


def upa_steering(azimuth: float, elevation: float, Lh: int, Lv: int,
                 spacing_over_lambda: float = HALF_WAVELENGTH) -> SteeringVector:
    """Unnormalized UPA response, row-major over (p, q) with p < Lh, q < Lv."""
    if Lh < 1 or Lv < 1:
        raise ValueError("UPA dimensions must be >= 1")
    p = np.arange(Lh)[:, None]
    q = np.arange(Lv)[None, :]
    phase = 2 * np.pi * spacing_over_lambda * (
        p * np.cos(elevation) * np.sin(azimuth) + q * np.sin(elevation))
    return SteeringVector(np.exp(1j * phase).ravel(), "UPA", (float(azimuth), float(elevation)))


def array_gain(angle1: float, angle2: float, count: int,
               spacing_over_lambda: float = HALF_WAVELENGTH) -> float:
    """|a^H(angle1) a(angle2)| for a unit-norm ULA, in closed (Dirichlet) form."""
    delta = spacing_over_lambda * (np.sin(angle2) - np.sin(angle1))
    den = count * np.sin(np.pi * delta)
    if abs(den) < 1e-300 or abs(delta - round(delta)) < 1e-15:
        return 1.0
    return float(abs(np.sin(np.pi * delta * count) / den))


def ris_alignment_phase(zeta_t, zeta_r):
    """RIS element phase cancelling the cascaded beam phases, wrapped to [0, 2pi)."""
    phi = np.mod(-(np.asarray(zeta_t) + np.asarray(zeta_r)), 2 * np.pi)
    # mod can round up to exactly 2pi for tiny negative inputs
    phi = np.where(phi >= 2 * np.pi, 0.0, phi)
    return phi if phi.ndim else float(phi)


def noiseless_branch_outputs(cr: ChannelRealization, tx: TxTriple, s: complex,
                             L: int, transmit_power: float = 1.0) -> np.ndarray:
    out = np.zeros(cr.M, dtype=complex)
    out[tx.m] = np.sqrt(transmit_power) * L * cr.h[tx.m] * cr.g[tx.n] * s
    return out


def branch_outputs(cr: ChannelRealization, tx: TxTriple, s: complex, L: int, N0: float,
                   rng: np.random.Generator, transmit_power: float = 1.0) -> np.ndarray:
    """The M outputs of the Rx phase-shifter network for one channel use.

    Rows of the Rx combiner are orthonormal, so the branch noises are i.i.d.
    CN(0, N0).
    """
    noise = complex_normal(rng, cr.M, var=N0)
    return noiseless_branch_outputs(cr, tx, s, L, transmit_power) + noise


# ---------------------------------------------------------------------------
# finite-array validation path

@dataclass(frozen=True, eq=False)
class ScattererGeometry:
    aod_tx: np.ndarray       # (N,) departure angles at the Tx ULA
    ris_in: np.ndarray       # (N, 2) azimuth/elevation of arrival at the RIS
    ris_out: np.ndarray      # (M, 2) azimuth/elevation of departure at the RIS
    aoa_rx: np.ndarray       # (M,) arrival angles at the Rx ULA
    Nt: int
    Nr: int
    Lh: int
    Lv: int

    @property
    def L(self) -> int:
        return self.Lh * self.Lv


def draw_geometry(rng: np.random.Generator, N: int, M: int, Nt: int = 32, Nr: int = 32,
                  Lh: int = 10, Lv: int = 10, spread: float = np.pi / 4) -> ScattererGeometry:
    """Scatterer angles uniform on [-spread, spread]; pairwise differences stay
    within [-pi/2, pi/2] for the default spread."""
    u = lambda *shape: rng.uniform(-spread, spread, shape)
    return ScattererGeometry(u(N), u(N, 2), u(M, 2), u(M), Nt, Nr, Lh, Lv)


def full_array_branch_outputs(cr: ChannelRealization, geo: ScattererGeometry, tx: TxTriple,
                              s: complex, transmit_power: float = 1.0,
                              spacing_over_lambda: float = HALF_WAVELENGTH) -> np.ndarray:
    """Noiseless R^H H a_t(theta_n) sqrt(Ps) s with the RIS phased for (n, m)."""
    d = spacing_over_lambda
    a_t = np.array([ula_steering(a, geo.Nt, d).entries for a in geo.aod_tx]).T     # (Nt, N)
    a_r = np.array([ula_steering(a, geo.Nr, d).entries for a in geo.aoa_rx]).T     # (Nr, M)
    al_r = np.array([upa_steering(az, el, geo.Lh, geo.Lv, d).entries
                     for az, el in geo.ris_in]).T                                   # (L, N)
    al_t = np.array([upa_steering(az, el, geo.Lh, geo.Lv, d).entries
                     for az, el in geo.ris_out]).T                                  # (L, M)
    H_ti = (al_r * cr.g) @ a_t.conj().T            # (L, Nt)
    H_ir = (a_r * cr.h) @ al_t.conj().T            # (Nr, L)
    # phase each element so that alpha_t(m)^H diag(phi) alpha_r(n) sums coherently to L
    zeta_t = np.angle(al_t[:, tx.m].conj())
    zeta_r = np.angle(al_r[:, tx.n])
    phi = ris_alignment_phase(zeta_t, zeta_r)
    H = H_ir @ np.diag(np.exp(1j * phi)) @ H_ti
    y = np.sqrt(transmit_power) * (H @ a_t[:, tx.n]) * s
    return a_r.conj().T @ y
