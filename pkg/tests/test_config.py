import pytest

from risdssm.config import (ConfigError, ModulationKind, SystemConfig, dump_config, load_config,
                            make_config, noise_power, parse_config, spectral_efficiency, validate)


def test_defaults_are_valid():
    cfg = validate(SystemConfig())
    assert (cfg.N, cfg.M, cfg.K, cfg.L) == (2, 2, 2, 100)
    assert cfg.bits_per_use == 3


@pytest.mark.parametrize("nmk,bits", [((2, 2, 2), 3), ((4, 4, 16), 8), ((8, 2, 64), 10)])
def test_spectral_efficiency(nmk, bits):
    assert spectral_efficiency(*nmk) == bits


def test_spectral_efficiency_rejects_non_power_of_two():
    with pytest.raises(ConfigError, match="N not power of two"):
        spectral_efficiency(3, 2, 2)


@pytest.mark.parametrize("changes,field", [
    (dict(num_tx_scatterers=3), "num_tx_scatterers"),
    (dict(num_rx_scatterers=1), "num_rx_scatterers"),
    (dict(symbol_order=8, modulation_kind=ModulationKind.QAM), "symbol_order"),
    (dict(ris_elements=0), "ris_elements"),
    (dict(snr_grid_db=(0.0, 0.0)), "snr_grid_db"),
    (dict(rng_seed=2**64), "rng_seed"),
    (dict(transmit_power=2.0), "transmit_power"),
])
def test_validate_names_field(changes, field):
    with pytest.raises(ConfigError) as err:
        validate(SystemConfig().with_overrides(**changes))
    assert err.value.field == field


def test_parse_round_trip(tmp_path):
    cfg = make_config(N=4, M=2, K=16, L=64, kind="QAM", snr_grid_db=[0, 5, 10], trials=1234, seed=9)
    assert parse_config(dump_config(cfg)) == cfg
    p = tmp_path / "c.txt"
    p.write_text("# comment\n" + dump_config(cfg) + "\n\n")
    assert load_config(p) == cfg


def test_parse_rejects_unknown_key():
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config("ris_element=10\n")


def test_parse_rejects_duplicate_and_garbage():
    with pytest.raises(ConfigError):
        parse_config("rng_seed=1\nrng_seed=2\n")
    with pytest.raises(ConfigError):
        parse_config("just words\n")
    with pytest.raises(ConfigError):
        parse_config("ris_elements=ten\n")


def test_noise_power():
    assert noise_power(0) == 1.0
    assert noise_power(20) == pytest.approx(0.01, rel=1e-15)
