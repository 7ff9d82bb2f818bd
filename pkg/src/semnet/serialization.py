"""Scenario and configuration files.

The on-disk format is YAML with the field names of the common symbol table
(``W_hz``, ``sigma2``, ``d_K_bits``, ...).  Powers may be given as plain Watts
or as strings with an explicit unit suffix, "0.1 W" or "-120 dBm".  Scenario
hashing canonicalizes the document (sorted keys, shortest round-trip floats)
so equal scenarios hash equally regardless of how they were produced.
"""
from __future__ import annotations

import hashlib

import numpy as np
import yaml

from .generate import ConfigError, GenerationConfig, as_range
from .model import AccuracyModel, BaseStation, MobileDevice, RadioParams, Scenario


def parse_power(value) -> float:
    """Watts from a number or a unit-suffixed string ("0.2 W", "-120 dBm")."""
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        text = value.strip()
        for suffix, convert in (
            ("dBm", lambda v: 10.0 ** ((v - 30.0) / 10.0)),
            ("mW", lambda v: v * 1e-3),
            ("W", lambda v: v),
        ):
            if text.endswith(suffix):
                number = text[: -len(suffix)].strip()
                try:
                    return float(convert(float(number)))
                except ValueError:
                    break
        try:
            return float(text)
        except ValueError:
            pass
    raise ConfigError(f"cannot parse power value {value!r}")


def _class_table(mapping, what) -> dict[int, float]:
    if not isinstance(mapping, dict):
        raise ConfigError(f"{what} must be a mapping of class id to value")
    return {int(k): float(v) for k, v in mapping.items()}


def scenario_to_dict(scenario: Scenario) -> dict:
    stations = []
    for bs in scenario.base_stations:
        entry = {
            "id": bs.bs_id,
            "position_m": [float(bs.position[0]), float(bs.position[1])],
            "f_C_hz": float(bs.compute_speed),
            "kb_classes": sorted(bs.stored_classes),
        }
        if bs.backhaul_tx_power is not None:
            entry["p_T_0"] = [float(p) for p in bs.backhaul_tx_power]
        stations.append(entry)
    devices = []
    for dev in scenario.devices:
        classes = sorted(dev.required_classes)
        devices.append(
            {
                "id": dev.md_id,
                "position_m": [float(dev.position[0]), float(dev.position[1])],
                "p_T": float(dev.tx_power),
                "required_classes": classes,
                "I_suts": {c: float(dev.semantic_info[c]) for c in classes},
                "d_T_bits": {c: float(dev.source_bits[c]) for c in classes},
                "d_K_bits": {c: float(dev.knowledge_bits[c]) for c in classes},
                "c_cycles": {c: float(dev.compute_load[c]) for c in classes},
                "eps_th": float(dev.accuracy_threshold),
                "t_max_s": float(dev.delay_tolerance),
            }
        )
    acc = scenario.accuracy
    return {
        "W_hz": float(scenario.radio.subchannel_bandwidth),
        "sigma2": float(scenario.radio.noise_power),
        "rho": float(scenario.compression_exponent),
        "theta": [float(acc.theta1), float(acc.theta2), float(acc.theta3), float(acc.theta4)],
        "num_classes": scenario.num_classes,
        "num_subchannels": scenario.num_subchannels,
        "base_stations": stations,
        "devices": devices,
        "access_gain": np.asarray(scenario.access_gain, dtype=float).tolist(),
        "backhaul_gain": np.asarray(scenario.backhaul_gain, dtype=float).tolist(),
    }


def scenario_from_dict(data: dict) -> Scenario:
    try:
        stations = []
        for entry in data["base_stations"]:
            backhaul = entry.get("p_T_0")
            stations.append(
                BaseStation(
                    bs_id=int(entry["id"]),
                    position=(float(entry["position_m"][0]), float(entry["position_m"][1])),
                    compute_speed=float(entry["f_C_hz"]),
                    stored_classes=frozenset(int(c) for c in entry["kb_classes"]),
                    backhaul_tx_power=None
                    if backhaul is None
                    else tuple(parse_power(p) for p in backhaul),
                )
            )
        devices = []
        for entry in data["devices"]:
            devices.append(
                MobileDevice(
                    md_id=int(entry["id"]),
                    position=(float(entry["position_m"][0]), float(entry["position_m"][1])),
                    tx_power=parse_power(entry["p_T"]),
                    required_classes=frozenset(int(c) for c in entry["required_classes"]),
                    semantic_info=_class_table(entry["I_suts"], "I_suts"),
                    source_bits=_class_table(entry["d_T_bits"], "d_T_bits"),
                    knowledge_bits=_class_table(entry["d_K_bits"], "d_K_bits"),
                    compute_load=_class_table(entry["c_cycles"], "c_cycles"),
                    accuracy_threshold=float(entry["eps_th"]),
                    delay_tolerance=float(entry["t_max_s"]),
                )
            )
        theta = data["theta"]
        return Scenario(
            radio=RadioParams(
                subchannel_bandwidth=float(data["W_hz"]),
                noise_power=parse_power(data["sigma2"]),
            ),
            accuracy=AccuracyModel(*(float(t) for t in theta)),
            base_stations=tuple(stations),
            devices=tuple(devices),
            access_gain=np.asarray(data["access_gain"], dtype=float),
            backhaul_gain=np.asarray(data["backhaul_gain"], dtype=float),
            num_classes=int(data["num_classes"]),
            num_subchannels=int(data["num_subchannels"]),
            compression_exponent=float(data.get("rho", 1.0)),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ConfigError(f"malformed scenario document: {exc!r}") from exc


def save_scenario(scenario: Scenario, path) -> None:
    data = scenario_to_dict(scenario)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        yaml.safe_dump(data, fh, sort_keys=True)


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping at top level")
    return scenario_from_dict(data)


def scenario_hash(scenario: Scenario) -> str:
    """sha256 of the canonical serialized form."""
    text = yaml.safe_dump(scenario_to_dict(scenario), sort_keys=True)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


_CONFIG_KEYS = {
    "seed": ("seed", int),
    "num_mds": ("num_mds", int),
    "num_sbs": ("num_sbs", int),
    "num_subchannels": ("num_subchannels", int),
    "num_classes": ("num_classes", int),
    "mbs_kb_size": ("mbs_kb_size", int),
    "sbs_kb_size": ("sbs_kb_size", int),
    "md_required_size": ("md_required_size", int),
    "I_suts": ("semantic_info_range", "range"),
    "d_K_bits": ("knowledge_bits_range", "range"),
    "d_T_bits": ("source_bits_range", "range"),
    "c_cycles": ("compute_load_range", "range"),
    "eps_th": ("accuracy_threshold_range", "range"),
    "t_max_s": ("delay_tolerance_range", "range"),
    "p_T": ("md_tx_power", "power"),
    "p_T_0": ("backhaul_tx_power", "power"),
    "W_hz": ("bandwidth", float),
    "sigma2": ("noise_power", "power"),
    "rho": ("compression_exponent", float),
    "theta": ("accuracy_theta", "theta"),
    "sbs_radius_m": ("sbs_radius", float),
    "mbs_position_m": ("mbs_position", "position"),
}


def config_from_dict(data: dict) -> GenerationConfig:
    if not isinstance(data, dict):
        raise ConfigError("generation config must be a mapping")
    kwargs = {}
    for key, value in data.items():
        if key == "f_C_hz":
            try:
                mbs_speed, sbs_speed = value
            except (TypeError, ValueError):
                raise ConfigError("f_C_hz must be [mbs_hz, sbs_hz]") from None
            kwargs["mbs_compute_speed"] = float(mbs_speed)
            kwargs["sbs_compute_speed"] = float(sbs_speed)
            continue
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown generation config key {key!r}")
        field, kind = _CONFIG_KEYS[key]
        if kind is int:
            kwargs[field] = int(value)
        elif kind is float:
            kwargs[field] = float(value)
        elif kind == "power":
            kwargs[field] = parse_power(value)
        elif kind == "range":
            kwargs[field] = as_range(value)
        elif kind == "theta":
            t = tuple(float(v) for v in value)
            if len(t) != 4:
                raise ConfigError("theta must have four entries")
            kwargs[field] = t
        else:  # position
            kwargs[field] = (float(value[0]), float(value[1]))
    return GenerationConfig(**kwargs)


def config_to_dict(config: GenerationConfig) -> dict:
    return {
        "seed": config.seed,
        "num_mds": config.num_mds,
        "num_sbs": config.num_sbs,
        "num_subchannels": config.num_subchannels,
        "num_classes": config.num_classes,
        "mbs_kb_size": config.mbs_kb_size,
        "sbs_kb_size": config.sbs_kb_size,
        "md_required_size": config.md_required_size,
        "I_suts": list(as_range(config.semantic_info_range)),
        "d_K_bits": list(as_range(config.knowledge_bits_range)),
        "d_T_bits": list(as_range(config.source_bits_range)),
        "c_cycles": list(as_range(config.compute_load_range)),
        "eps_th": list(as_range(config.accuracy_threshold_range)),
        "t_max_s": list(as_range(config.delay_tolerance_range)),
        "f_C_hz": [config.mbs_compute_speed, config.sbs_compute_speed],
        "p_T": config.md_tx_power,
        "p_T_0": config.backhaul_tx_power,
        "W_hz": config.bandwidth,
        "sigma2": config.noise_power,
        "rho": config.compression_exponent,
        "theta": list(config.accuracy_theta),
        "sbs_radius_m": config.sbs_radius,
        "mbs_position_m": list(config.mbs_position),
    }


def load_generation_config(path) -> GenerationConfig:
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if data is None:
        data = {}
    return config_from_dict(data)
