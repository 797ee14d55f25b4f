"""Gray-labelled PSK/QAM constellations and the bits <-> (n, m, k) mapping."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import ModulationKind, is_power_of_two


def gray(i: int) -> int:
    return i ^ (i >> 1)


def gray_inverse(g: int) -> int:
    i = 0
    while g:
        i ^= g
        g >>= 1
    return i


def _log2(x: int) -> int:
    return x.bit_length() - 1


def _to_bits(value: int, width: int) -> str:
    return format(value, f"0{width}b") if width else ""


@dataclass(frozen=True, eq=False)
class Constellation:
    kind: ModulationKind
    points: np.ndarray  # complex, shape (K,)
    labels: tuple[str, ...]

    @property
    def order(self) -> int:
        return len(self.points)

    @property
    def bits(self) -> int:
        return _log2(self.order)

    @property
    def label_ints(self) -> np.ndarray:
        return np.array([int(b, 2) for b in self.labels], dtype=np.int64)

    def index_of_label(self, label: str) -> int:
        return self.labels.index(label)


def _psk(K: int) -> Constellation:
    k = np.arange(K)
    points = np.exp(2j * np.pi * k / K)
    labels = tuple(_to_bits(gray(i), _log2(K)) for i in range(K))
    return Constellation(ModulationKind.PSK, points, labels)


def _qam(K: int) -> Constellation:
    side = math.isqrt(K)
    half = _log2(side)
    scale = math.sqrt(3.0 / (2.0 * (K - 1)))
    points = np.empty(K, dtype=complex)
    labels = []
    for i in range(side):
        for q in range(side):
            points[i * side + q] = scale * complex(2 * i - (side - 1), 2 * q - (side - 1))
            labels.append(_to_bits(gray(i), half) + _to_bits(gray(q), half))
    return Constellation(ModulationKind.QAM, points, tuple(labels))


def build_constellation(kind: ModulationKind | str, K: int) -> Constellation:
    """Unit-average-energy constellation with gray labels.

    PSK points sit at exp(j*2*pi*k/K) and carry label gray(k), so ring
    neighbours differ in one bit. Square QAM uses per-axis gray labels, real
    axis first.
    """
    kind = ModulationKind(kind)
    if not is_power_of_two(K) or K < 2:
        raise ValueError(f"K must be a power of two >= 2, got {K}")
    if kind is ModulationKind.PSK:
        return _psk(K)
    if _log2(K) % 2:
        raise ValueError(f"square QAM requires an even power of two, got K={K}")
    return _qam(K)


class TxTriple(NamedTuple):
    n: int
    m: int
    k: int


@dataclass(frozen=True)
class Mapper:
    """Bits <-> TxTriple for given N, M and constellation.

    The first log2 N bits pick the Tx-side scatterer, the next log2 M bits the
    Rx-side scatterer (both gray-labelled), the rest the constellation symbol.
    """

    N: int
    M: int
    constellation: Constellation

    @property
    def K(self) -> int:
        return self.constellation.order

    @property
    def bits(self) -> int:
        return _log2(self.N) + _log2(self.M) + self.constellation.bits

    def _check(self, t: TxTriple) -> None:
        if not (0 <= t.n < self.N and 0 <= t.m < self.M and 0 <= t.k < self.K):
            raise ValueError(f"triple {tuple(t)} out of range for N={self.N}, M={self.M}, K={self.K}")

    def map_bits(self, bits: str) -> TxTriple:
        if len(bits) != self.bits or set(bits) - {"0", "1"}:
            raise ValueError(f"expected {self.bits} bits, got {bits!r}")
        bn, bm = _log2(self.N), _log2(self.M)
        n = gray_inverse(int(bits[:bn] or "0", 2))
        m = gray_inverse(int(bits[bn:bn + bm] or "0", 2))
        k = self.constellation.index_of_label(bits[bn + bm:])
        return TxTriple(n, m, k)

    def demap_triple(self, t: TxTriple) -> str:
        t = TxTriple(*t)
        self._check(t)
        return (_to_bits(gray(t.n), _log2(self.N)) + _to_bits(gray(t.m), _log2(self.M))
                + self.constellation.labels[t.k])

    def bit_errors(self, a: TxTriple, b: TxTriple) -> int:
        la, lb = self.demap_triple(a), self.demap_triple(b)
        return sum(x != y for x, y in zip(la, lb))

    # flattened hypothesis index h = (m*N + n)*K + k, i.e. lexicographic (m, n, k)
    def flat_index(self, t: TxTriple) -> int:
        return (t.m * self.N + t.n) * self.K + t.k

    def unflatten(self, h: int) -> TxTriple:
        mn, k = divmod(int(h), self.K)
        m, n = divmod(mn, self.N)
        return TxTriple(n, m, k)

    def flat_labels(self) -> np.ndarray:
        """Integer bit label of every flattened hypothesis."""
        bn, bm, bk = _log2(self.N), _log2(self.M), self.constellation.bits
        sym = self.constellation.label_ints
        out = np.empty(self.N * self.M * self.K, dtype=np.int64)
        for m in range(self.M):
            for n in range(self.N):
                base = ((gray(n) << bm) | gray(m)) << bk
                h0 = (m * self.N + n) * self.K
                out[h0:h0 + self.K] = base | sym
        return out

    def label_to_flat(self) -> np.ndarray:
        """Inverse of :meth:`flat_labels`: table indexed by integer bit label."""
        labels = self.flat_labels()
        inv = np.empty_like(labels)
        inv[labels] = np.arange(labels.size)
        return inv

    def bit_error_table(self) -> np.ndarray:
        """Hamming distance between the labels of every pair of hypotheses."""
        labels = self.flat_labels()
        x = labels[:, None] ^ labels[None, :]
        return popcount(x)


def popcount(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.uint64)
    count = np.zeros(x.shape, dtype=np.int64)
    while np.any(x):
        count += (x & np.uint64(1)).astype(np.int64)
        x = x >> np.uint64(1)
    return count


def map_bits(bits: str, N: int, M: int, constellation: Constellation) -> TxTriple:
    return Mapper(N, M, constellation).map_bits(bits)


def demap_triple(t: TxTriple, N: int, M: int, constellation: Constellation) -> str:
    return Mapper(N, M, constellation).demap_triple(t)


def bit_errors(a: TxTriple, b: TxTriple, N: int, M: int, constellation: Constellation) -> int:
    return Mapper(N, M, constellation).bit_errors(a, b)
