"""Random scenario generation.

Draws a two-tier network instance: devices placed uniformly over the small
cell's circular service area, exponential small-scale fading over a squared
distance path loss, knowledge bases sampled without replacement, and per-class
task parameters from configurable uniform ranges.  Given the same
configuration the result is reproducible bit for bit; independent named
substreams feed geometry, fading, knowledge draws, task parameters, and
per-device thresholds, so changing one scalar never shifts unrelated draws.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import AccuracyModel, BaseStation, MobileDevice, RadioParams, Scenario

PATHLOSS_CONSTANT = 1e-3
MIN_DISTANCE = 1.0  # meters; keeps gains finite when an MD spawns atop a BS

Range = float | tuple[float, float]


class ConfigError(ValueError):
    """Invalid generation or experiment configuration."""


def as_range(value) -> tuple[float, float]:
    """Normalize a scalar-or-[lo, hi] field to a (lo, hi) pair."""
    if isinstance(value, (int, float)):
        return float(value), float(value)
    lo, hi = value
    return float(lo), float(hi)


@dataclass(frozen=True)
class GenerationConfig:
    """Knobs for random scenario draws; defaults follow the evaluation setup."""

    seed: int = 0
    num_mds: int = 3
    num_sbs: int = 1
    num_subchannels: int = 5
    num_classes: int = 10
    mbs_kb_size: int = 6
    sbs_kb_size: int = 5
    md_required_size: int = 6
    semantic_info_range: Range = (2e6, 2e7)  # suts per class
    knowledge_bits_range: Range = (5e6, 5e7)
    source_bits_range: Range = (2e7, 1e8)
    compute_load_range: Range = (1e6, 1e8)  # CPU cycles per class
    accuracy_threshold_range: Range = (0.7, 0.85)
    delay_tolerance_range: Range = (2.5, 3.5)  # seconds
    mbs_compute_speed: float = 4e9
    sbs_compute_speed: float = 2e9
    md_tx_power: float = 0.1  # Watts
    backhaul_tx_power: float = 20.0
    bandwidth: float = 6e6  # Hz per subchannel
    noise_power: float = 1e-15  # Watts (-120 dBm)
    compression_exponent: float = 1.0
    accuracy_theta: tuple[float, float, float, float] = (6.205e-8, 16.45, 0.9228, 0.06917)
    sbs_radius: float = 150.0  # meters, service disk radius
    mbs_position: tuple[float, float] = (-150.0, 0.0)

    def __post_init__(self):
        counts = {
            "num_mds": self.num_mds,
            "num_subchannels": self.num_subchannels,
            "num_classes": self.num_classes,
            "mbs_kb_size": self.mbs_kb_size,
            "sbs_kb_size": self.sbs_kb_size,
            "md_required_size": self.md_required_size,
        }
        for name, value in counts.items():
            if int(value) != value or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if self.num_sbs < 1:
            raise ConfigError("num_sbs must be at least 1")
        for name in ("mbs_kb_size", "sbs_kb_size", "md_required_size"):
            if getattr(self, name) > self.num_classes:
                raise ConfigError(f"{name} cannot exceed num_classes")
        for name in (
            "semantic_info_range",
            "knowledge_bits_range",
            "source_bits_range",
            "compute_load_range",
            "accuracy_threshold_range",
            "delay_tolerance_range",
        ):
            lo, hi = as_range(getattr(self, name))
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi or lo <= 0:
                raise ConfigError(f"{name} must satisfy 0 < lo <= hi, got {(lo, hi)}")
        lo, hi = as_range(self.accuracy_threshold_range)
        if hi >= 1.0:
            raise ConfigError("accuracy_threshold_range must stay below 1")
        for name in (
            "mbs_compute_speed",
            "sbs_compute_speed",
            "md_tx_power",
            "backhaul_tx_power",
            "bandwidth",
            "noise_power",
            "sbs_radius",
        ):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")


def link_gain(distance: float, fading_sq: float) -> float:
    """Linear power gain: squared-distance path loss scaled by squared fading."""
    d = max(distance, MIN_DISTANCE)
    return PATHLOSS_CONSTANT * fading_sq / (d * d)


def _positions(config: GenerationConfig):
    mbs = (float(config.mbs_position[0]), float(config.mbs_position[1]))
    if config.num_sbs == 1:
        sbs = [(0.0, 0.0)]
    else:
        # several small cells share the disk; spread them on a half-radius ring
        ring = config.sbs_radius / 2.0
        sbs = [
            (ring * math.cos(2 * math.pi * j / config.num_sbs),
             ring * math.sin(2 * math.pi * j / config.num_sbs))
            for j in range(config.num_sbs)
        ]
    return [mbs] + sbs


def generate(config: GenerationConfig) -> Scenario:
    """Draw a full scenario; identical configs produce identical scenarios."""
    root = np.random.SeedSequence(config.seed)
    geometry, fading_access, fading_backhaul, kb, params, thresholds = (
        np.random.default_rng(child) for child in root.spawn(6)
    )
    num_md = config.num_mds
    num_bs = config.num_sbs + 1
    num_k = config.num_subchannels
    num_cls = config.num_classes

    # area-uniform placement over the service disk: radius grows as sqrt(u)
    u = geometry.random(num_md)
    phi = geometry.random(num_md) * 2.0 * math.pi
    radii = config.sbs_radius * np.sqrt(u)
    md_positions = [
        (float(radii[i] * math.cos(phi[i])), float(radii[i] * math.sin(phi[i])))
        for i in range(num_md)
    ]
    bs_positions = _positions(config)

    fade_access = fading_access.exponential(1.0, size=(num_md, num_bs, num_k))
    fade_backhaul = fading_backhaul.exponential(1.0, size=(num_md, config.num_sbs, num_k))

    mbs_classes = frozenset(int(c) for c in kb.choice(num_cls, config.mbs_kb_size, replace=False))
    sbs_classes = [
        frozenset(int(c) for c in kb.choice(num_cls, config.sbs_kb_size, replace=False))
        for _ in range(config.num_sbs)
    ]
    required = [
        frozenset(int(c) for c in kb.choice(num_cls, config.md_required_size, replace=False))
        for _ in range(num_md)
    ]

    # per-class parameters are drawn for every class so that the draws do not
    # depend on which classes a device happens to require
    def draw_table(spec):
        lo, hi = as_range(spec)
        return params.uniform(lo, hi, size=(num_md, num_cls))

    semantic_info = draw_table(config.semantic_info_range)
    knowledge_bits = draw_table(config.knowledge_bits_range)
    source_bits = draw_table(config.source_bits_range)
    compute_load = draw_table(config.compute_load_range)

    lo, hi = as_range(config.accuracy_threshold_range)
    eps_th = thresholds.uniform(lo, hi, size=num_md)
    lo, hi = as_range(config.delay_tolerance_range)
    t_max = thresholds.uniform(lo, hi, size=num_md)

    stations = [
        BaseStation(
            bs_id=0,
            position=bs_positions[0],
            compute_speed=config.mbs_compute_speed,
            stored_classes=mbs_classes,
            backhaul_tx_power=(config.backhaul_tx_power,) * config.num_sbs,
        )
    ]
    for j in range(config.num_sbs):
        stations.append(
            BaseStation(
                bs_id=j + 1,
                position=bs_positions[j + 1],
                compute_speed=config.sbs_compute_speed,
                stored_classes=sbs_classes[j],
                backhaul_tx_power=None,
            )
        )

    devices = []
    for i in range(num_md):
        classes = sorted(required[i])
        devices.append(
            MobileDevice(
                md_id=i,
                position=md_positions[i],
                tx_power=config.md_tx_power,
                required_classes=required[i],
                semantic_info={c: float(semantic_info[i, c]) for c in classes},
                source_bits={c: float(source_bits[i, c]) for c in classes},
                knowledge_bits={c: float(knowledge_bits[i, c]) for c in classes},
                compute_load={c: float(compute_load[i, c]) for c in classes},
                accuracy_threshold=float(eps_th[i]),
                delay_tolerance=float(t_max[i]),
            )
        )

    access = np.empty((num_md, num_bs, num_k))
    for i in range(num_md):
        for j in range(num_bs):
            d = math.dist(md_positions[i], bs_positions[j])
            for k in range(num_k):
                access[i, j, k] = link_gain(d, fade_access[i, j, k])
    backhaul = np.empty((num_md, config.num_sbs, num_k))
    for i in range(num_md):
        for j in range(config.num_sbs):
            d = math.dist(bs_positions[0], bs_positions[j + 1])
            for k in range(num_k):
                backhaul[i, j, k] = link_gain(d, fade_backhaul[i, j, k])

    return Scenario(
        radio=RadioParams(
            subchannel_bandwidth=config.bandwidth, noise_power=config.noise_power
        ),
        accuracy=AccuracyModel(*config.accuracy_theta),
        base_stations=tuple(stations),
        devices=tuple(devices),
        access_gain=access,
        backhaul_gain=backhaul,
        num_classes=num_cls,
        num_subchannels=num_k,
        compression_exponent=config.compression_exponent,
    )
