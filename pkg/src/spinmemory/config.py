"""Flat key-value configuration files and their resolution into model objects.

Format: one ``key = value`` pair per line, ``#`` comments, keys named
exactly after the :class:`~spinmemory.params.PhysicalParams` fields (SI
units) plus the gas-cell keys and a few harness knobs.  Cell keys, when
present, derive the populations and wall relaxation; explicit keys win.
"""

from __future__ import annotations

import math

from .exceptions import ConfigError
from .helium import GasCell, gas_populations
from .params import PhysicalParams

# Fig-2-style defaults: 1 torr cell at 300 K, C = 500, kappa = 100 gamma,
# Delta = -2000 gamma, half squeezing at the input.
DEFAULTS = {
    "gamma": 2.0e7,
    "kappa": 2.0e9,
    "delta_one_photon": -4.0e10,
    "gamma_m": 5.0e6,
    "gamma_0": 1.0e3,
    "n_meta": 1.6e12,
    "n_ground": 1.6e18,
    "cooperativity": 500.0,
    "r_squeeze": 0.5 * math.log(2.0),
    "pump_ratio": 0.1,       # Gamma / gamma_m target for the operating point
    "level_factor": 3,       # helium pump scaling for field/operating-point math
}

_CELL_KEYS = ("pressure", "volume", "temperature", "metastable_density")
_PARAM_KEYS = ("gamma", "kappa", "gamma_m", "gamma_f", "gamma_0", "omega_rabi",
               "delta_one_photon", "delta_meta", "delta_ground", "delta_cavity",
               "g_coupling", "n_meta", "n_ground", "r_squeeze")
_EXTRA_KEYS = ("cooperativity", "pump_ratio", "level_factor")
_KNOWN_KEYS = set(_PARAM_KEYS) | set(_CELL_KEYS) | set(_EXTRA_KEYS)


def load_config(path) -> dict:
    """Parse a flat key-value file into a {key: float} mapping."""
    entries = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            entries[key] = float(value.strip())
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad number for {key}") from exc
    return entries


def resolve_config(entries: dict | None = None) -> dict:
    """Merge user entries over the defaults and derive dependent quantities.

    Returns a flat mapping with all PhysicalParams fields populated except
    omega_rabi (set per sweep point), plus the harness knobs.
    """
    cfg = dict(DEFAULTS)
    entries = dict(entries or {})

    cell_given = {k: entries.pop(k) for k in _CELL_KEYS if k in entries}
    if cell_given:
        missing = [k for k in _CELL_KEYS if k not in cell_given]
        if missing:
            raise ConfigError(f"incomplete gas-cell block, missing {missing}")
        pops = gas_populations(GasCell(**cell_given))
        cfg["n_ground"] = pops.n_ground
        cfg["n_meta"] = pops.n_meta
        cfg["gamma_0"] = pops.gamma_0

    for key, value in entries.items():
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"unknown configuration key {key!r}")
        cfg[key] = value

    if "g_coupling" not in cfg:
        # derive the single-atom coupling from the requested cooperativity
        cfg["g_coupling"] = math.sqrt(
            cfg["cooperativity"] * cfg["kappa"] * cfg["gamma"] / cfg["n_meta"])
    if "gamma_f" not in cfg:
        cfg["gamma_f"] = cfg["gamma_m"] * cfg["n_meta"] / cfg["n_ground"]
    lf = int(cfg["level_factor"])
    if lf not in (1, 3):
        raise ConfigError("level_factor must be 1 or 3")
    cfg["level_factor"] = lf
    return cfg


def params_from_config(cfg: dict, **overrides) -> PhysicalParams:
    """Build PhysicalParams from a resolved configuration mapping."""
    kwargs = {k: cfg[k] for k in _PARAM_KEYS if k in cfg}
    kwargs.setdefault("omega_rabi", 0.0)
    kwargs.setdefault("delta_meta", 0.0)
    kwargs.setdefault("delta_ground", 0.0)
    kwargs.setdefault("delta_cavity", 0.0)
    kwargs.update(overrides)
    return PhysicalParams(**kwargs)
