"""Flat key-value configuration parsing and resolution."""

import math

import pytest

from spinmemory.config import (DEFAULTS, load_config, params_from_config,
                               resolve_config)
from spinmemory.exceptions import ConfigError


class TestLoadConfig:
    def test_round_trip(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# paper-style run\n"
                       "gamma_m = 5e6\n"
                       "r_squeeze = 0.25  # light squeezing\n"
                       "\n"
                       "pump_ratio = 1.0\n")
        entries = load_config(cfg)
        assert entries == {"gamma_m": 5e6, "r_squeeze": 0.25, "pump_ratio": 1.0}

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("gamma_q = 1.0\n")
        with pytest.raises(ConfigError):
            load_config(cfg)

    def test_bad_number_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("gamma_m = fast\n")
        with pytest.raises(ConfigError):
            load_config(cfg)

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.cfg")

    def test_missing_equals_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("gamma_m 5e6\n")
        with pytest.raises(ConfigError):
            load_config(cfg)


class TestResolveConfig:
    def test_defaults_fig2(self):
        cfg = resolve_config({})
        assert cfg["gamma"] == 2e7
        assert cfg["kappa"] == 100.0 * cfg["gamma"]
        assert cfg["delta_one_photon"] == -2000.0 * cfg["gamma"]
        assert math.exp(-2.0 * cfg["r_squeeze"]) == pytest.approx(0.5, rel=1e-12)
        # derived coupling reproduces the requested cooperativity
        C = cfg["g_coupling"] ** 2 * cfg["n_meta"] / (cfg["kappa"] * cfg["gamma"])
        assert C == pytest.approx(cfg["cooperativity"], rel=1e-12)

    def test_cell_block_derives_populations(self):
        cfg = resolve_config({"pressure": 2.0, "volume": 50.0,
                              "temperature": 300.0,
                              "metastable_density": 3.2e10})
        ref = resolve_config({})
        assert cfg["gamma_0"] == pytest.approx(500.0)
        assert cfg["n_ground"] == pytest.approx(2.0 * 1.61e18, rel=0.01)
        assert cfg["n_meta"] == ref["n_meta"]
        assert cfg["gamma_f"] == pytest.approx(
            cfg["gamma_m"] * cfg["n_meta"] / cfg["n_ground"], rel=1e-12)

    def test_incomplete_cell_block_rejected(self):
        with pytest.raises(ConfigError):
            resolve_config({"pressure": 2.0})

    def test_bad_level_factor_rejected(self):
        with pytest.raises(ConfigError):
            resolve_config({"level_factor": 2})

    def test_defaults_not_mutated(self):
        before = dict(DEFAULTS)
        resolve_config({"gamma": 1e7})
        assert DEFAULTS == before


class TestParamsFromConfig:
    def test_build_with_overrides(self):
        cfg = resolve_config({})
        p = params_from_config(cfg, omega_rabi=1e8, delta_meta=2.0)
        assert p.omega_rabi == 1e8
        assert p.delta_meta == 2.0
        assert p.gamma_f * p.n_ground == pytest.approx(p.gamma_m * p.n_meta,
                                                       rel=1e-12)
