"""Scenario parameters for a single RIS-aided DSSM link."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Sequence


class ConfigError(ValueError):
    """Raised when a configuration violates one of its invariants."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class ModulationKind(str, enum.Enum):
    PSK = "PSK"
    QAM = "QAM"


def is_power_of_two(x: int) -> bool:
    return isinstance(x, int) and x >= 1 and (x & (x - 1)) == 0


@dataclass(frozen=True)
class SystemConfig:
    num_tx_scatterers: int = 2
    num_rx_scatterers: int = 2
    symbol_order: int = 2
    ris_elements: int = 100
    tx_antennas: int = 32
    rx_antennas: int = 32
    modulation_kind: ModulationKind = ModulationKind.PSK
    snr_grid_db: tuple[float, ...] = (-10.0, -5.0, 0.0, 5.0, 10.0)
    trials_per_snr: int = 100_000
    rng_seed: int = 0
    transmit_power: float = 1.0

    # short aliases used throughout the numerics
    @property
    def N(self) -> int:
        return self.num_tx_scatterers

    @property
    def M(self) -> int:
        return self.num_rx_scatterers

    @property
    def K(self) -> int:
        return self.symbol_order

    @property
    def L(self) -> int:
        return self.ris_elements

    @property
    def bits_per_use(self) -> int:
        return spectral_efficiency(self.N, self.M, self.K)

    def with_overrides(self, **changes) -> "SystemConfig":
        return validate(replace(self, **changes))


def spectral_efficiency(N: int, M: int, K: int) -> int:
    """Bits carried per channel use: log2 N + log2 M + log2 K."""
    for name, value in (("N", N), ("M", M), ("K", K)):
        if not is_power_of_two(value) or value < 2:
            raise ConfigError(name, f"{name} not power of two >= 2 (got {value!r})")
    return (N.bit_length() - 1) + (M.bit_length() - 1) + (K.bit_length() - 1)


def validate(cfg: SystemConfig) -> SystemConfig:
    """Return ``cfg`` unchanged if every invariant holds, else raise ConfigError
    naming the first offending field."""
    for name, short in (("num_tx_scatterers", "N"), ("num_rx_scatterers", "M"),
                        ("symbol_order", "K")):
        value = getattr(cfg, name)
        if not is_power_of_two(value) or value < 2:
            raise ConfigError(name, f"{short} not power of two (got {value!r})")
    for name in ("ris_elements", "tx_antennas", "rx_antennas", "trials_per_snr"):
        value = getattr(cfg, name)
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise ConfigError(name, f"must be a positive integer (got {value!r})")
    try:
        kind = ModulationKind(cfg.modulation_kind)
    except ValueError:
        raise ConfigError("modulation_kind", f"unknown modulation {cfg.modulation_kind!r}") from None
    if kind is ModulationKind.QAM and (cfg.symbol_order.bit_length() - 1) % 2:
        raise ConfigError("symbol_order",
                          f"square QAM requires even power of two (got K={cfg.symbol_order})")
    grid = tuple(cfg.snr_grid_db)
    if not grid:
        raise ConfigError("snr_grid_db", "empty SNR grid")
    if any(not math.isfinite(x) for x in grid):
        raise ConfigError("snr_grid_db", "non-finite SNR value")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("snr_grid_db", "SNR grid must be strictly increasing")
    if not isinstance(cfg.rng_seed, int) or not 0 <= cfg.rng_seed < 2**64:
        raise ConfigError("rng_seed", f"must be a 64-bit unsigned integer (got {cfg.rng_seed!r})")
    if cfg.transmit_power != 1.0:
        raise ConfigError("transmit_power", "P_s is fixed to 1; sweep SNR through snr_grid_db")
    return cfg


def noise_power(snr_db: float) -> float:
    """N0 for unit transmit power."""
    return 10.0 ** (-snr_db / 10.0)


_FIELD_NAMES = [f.name for f in fields(SystemConfig)]


def _convert(name: str, raw: str):
    raw = raw.strip()
    try:
        if name == "snr_grid_db":
            return tuple(float(x) for x in raw.split(",") if x.strip())
        if name == "modulation_kind":
            return ModulationKind(raw.upper())
        if name == "transmit_power":
            return float(raw)
        return int(raw, 0)
    except ValueError:
        raise ConfigError(name, f"cannot parse value {raw!r}") from None


def parse_config(text: str) -> SystemConfig:
    """Parse flat ``key=value`` lines. Blank lines and ``#`` comments are skipped;
    keys must be SystemConfig field names."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected key=value, got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _FIELD_NAMES:
            raise ConfigError(key, f"unknown key {key!r}")
        if key in values:
            raise ConfigError(key, "duplicate key")
        values[key] = _convert(key, raw)
    return validate(SystemConfig(**values))


def load_config(path: str | Path) -> SystemConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def dump_config(cfg: SystemConfig) -> str:
    lines = []
    for name in _FIELD_NAMES:
        value = getattr(cfg, name)
        if name == "snr_grid_db":
            value = ",".join(repr(float(x)) for x in value)
        elif isinstance(value, ModulationKind):
            value = value.value
        lines.append(f"{name}={value}")
    return "\n".join(lines) + "\n"


def make_config(*, N: int, M: int, K: int, L: int,
                kind: ModulationKind | str = ModulationKind.PSK,
                snr_grid_db: Sequence[float] = (0.0,), trials: int = 10_000,
                seed: int = 0) -> SystemConfig:
    return validate(SystemConfig(num_tx_scatterers=N, num_rx_scatterers=M, symbol_order=K,
                                 ris_elements=L, modulation_kind=ModulationKind(kind),
                                 snr_grid_db=tuple(float(x) for x in snr_grid_db),
                                 trials_per_snr=trials, rng_seed=seed))
