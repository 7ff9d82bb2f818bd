"""Core network model: rates, per-link timing, accuracy curve and the GESTR metric.

Units used throughout: suts (semantic units) for semantic information amounts,
bits for payloads, CPU cycles for compute loads, seconds, Hz and Watts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MBS_ID = 0

_VALIDATION_GRID_POINTS = 1000
_BISECTION_XI_TOL = 1e-9
_BISECTION_EPS_TOL = 1e-8
_BISECTION_MAX_ITER = 200


class ModelError(ValueError):
    """Base class for model contract violations."""


class DegenerateInstanceError(ModelError):
    """Raised when a metric is undefined, e.g. zero transmitted payload."""


class InfeasibleAccuracyError(ModelError):
    """Raised when an accuracy threshold exceeds the best attainable accuracy."""


@dataclass(frozen=True)
class RadioParams:
    subchannel_bandwidth: float  # Hz
    noise_power: float  # W

    def __post_init__(self):
        if self.subchannel_bandwidth <= 0 or self.noise_power <= 0:
            raise ModelError("bandwidth and noise power must be positive")


@dataclass(frozen=True)
class BaseStation:
    bs_id: int  # 0 is the MBS, 1..J are SBSs
    position: tuple[float, float]
    compute_speed: float  # cycles/s
    stored_classes: frozenset[int]
    # MBS only: transmit power towards each SBS, indexed by sbs_id - 1. None for SBSs.
    backhaul_tx_power: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.compute_speed <= 0:
            raise ModelError("compute_speed must be positive")
        if (self.bs_id == MBS_ID) != (self.backhaul_tx_power is not None):
            raise ModelError("backhaul_tx_power is required at the MBS and only there")
        if self.backhaul_tx_power is not None and any(p <= 0 for p in self.backhaul_tx_power):
            raise ModelError("backhaul_tx_power entries must be positive")


@dataclass(frozen=True)
class MobileDevice:
    md_id: int
    position: tuple[float, float]
    tx_power: float  # W
    required_classes: frozenset[int]
    semantic_info: dict[int, float]  # suts, per required class
    source_bits: dict[int, float]  # bits, per required class
    knowledge_bits: dict[int, float]  # bits, per required class
    compute_load: dict[int, float]  # cycles, per required class
    accuracy_threshold: float
    delay_tolerance: float  # s

    def __post_init__(self):
        if self.tx_power <= 0:
            raise ModelError("tx_power must be positive")
        if not 0.0 < self.accuracy_threshold < 1.0:
            raise ModelError("accuracy_threshold must lie in (0, 1)")
        if self.delay_tolerance <= 0:
            raise ModelError("delay_tolerance must be positive")
        for name in ("semantic_info", "source_bits", "knowledge_bits", "compute_load"):
            per_class = getattr(self, name)
            if set(per_class) != set(self.required_classes):
                raise ModelError(f"{name} must cover exactly the required classes")
            if any(v <= 0 for v in per_class.values()):
                raise ModelError(f"{name} entries must be positive")


@dataclass(frozen=True)
class AccuracyModel:
    """Semantic accuracy as a function of the extraction ratio xi in [0, 1].

    value(xi) = -theta1 * exp(theta2 * (1 - xi)) + theta3 * exp(-theta4 * (1 - xi)),
    clamped to [0, 1].  Parameters are sign-normalized to their absolute values by
    default, which yields a non-decreasing curve; ``literal_signs=True`` keeps them
    as given (audit mode, no monotonicity validation).
    """

    theta1: float
    theta2: float
    theta3: float
    theta4: float
    literal_signs: bool = False

    def __post_init__(self):
        if not self.literal_signs:
            for name in ("theta1", "theta2", "theta3", "theta4"):
                object.__setattr__(self, name, abs(getattr(self, name)))
            grid = np.linspace(0.0, 1.0, _VALIDATION_GRID_POINTS)
            values = self.raw_value(grid)
            if np.any(np.diff(values) < -1e-12):
                raise ModelError("accuracy curve must be non-decreasing in xi")

    def raw_value(self, xi):
        """Unclamped curve value; accepts scalars or arrays."""
        one_minus = 1.0 - np.asarray(xi, dtype=float)
        raw = -self.theta1 * np.exp(self.theta2 * one_minus) + self.theta3 * np.exp(
            -self.theta4 * one_minus
        )
        return raw if raw.ndim else float(raw)

    def value(self, xi):
        """Accuracy clamped to [0, 1]."""
        raw = self.raw_value(xi)
        clamped = np.clip(raw, 0.0, 1.0)
        return clamped if isinstance(raw, np.ndarray) else float(clamped)


def default_accuracy_model() -> AccuracyModel:
    return AccuracyModel(6.205e-8, 16.45, 0.9228, 0.06917)


@dataclass(eq=False)
class Scenario:
    radio: RadioParams
    base_stations: tuple[BaseStation, ...]  # MBS first, then SBSs
    devices: tuple[MobileDevice, ...]
    access_gain: np.ndarray  # (I, J+1, K) linear power gains, MD -> BS
    backhaul_gain: np.ndarray  # (I, J, K) linear power gains, MBS -> SBS j (axis 1 is sbs_id - 1)
    num_classes: int
    num_subchannels: int
    accuracy: AccuracyModel = field(default_factory=default_accuracy_model)
    compression_exponent: float = 1.0  # rho: semantic recovery workload scales as xi**-rho

    def __post_init__(self):
        num_md = len(self.devices)
        num_bs = len(self.base_stations)
        if num_md == 0 or num_bs == 0:
            raise ModelError("scenario needs at least one device and one base station")
        for idx, bs in enumerate(self.base_stations):
            if bs.bs_id != idx:
                raise ModelError("base stations must be ordered by id with the MBS first")
        if self.base_stations[MBS_ID].backhaul_tx_power is not None and len(
            self.base_stations[MBS_ID].backhaul_tx_power
        ) != num_bs - 1:
            raise ModelError("MBS backhaul_tx_power must have one entry per SBS")
        for idx, dev in enumerate(self.devices):
            if dev.md_id != idx:
                raise ModelError("devices must be ordered by id")
            if any(c < 0 or c >= self.num_classes for c in dev.required_classes):
                raise ModelError("device requires a class outside the class universe")
        for bs in self.base_stations:
            if any(c < 0 or c >= self.num_classes for c in bs.stored_classes):
                raise ModelError("base station stores a class outside the class universe")
        self.access_gain = np.asarray(self.access_gain, dtype=float)
        self.backhaul_gain = np.asarray(self.backhaul_gain, dtype=float)
        if self.access_gain.shape != (num_md, num_bs, self.num_subchannels):
            raise ModelError("access_gain must have shape (num devices, num BSs, num subchannels)")
        if self.backhaul_gain.shape != (num_md, num_bs - 1, self.num_subchannels):
            raise ModelError("backhaul_gain must have shape (num devices, num SBSs, num subchannels)")
        if np.any(self.access_gain <= 0) or (self.backhaul_gain.size and np.any(self.backhaul_gain <= 0)):
            raise ModelError("channel gains must be positive")
        if self.compression_exponent <= 0:
            raise ModelError("compression_exponent must be positive")

    @property
    def num_devices(self) -> int:
        return len(self.devices)

    @property
    def num_sbs(self) -> int:
        return len(self.base_stations) - 1


@dataclass(frozen=True)
class KnowledgeSplit:
    """Partition of one device's required classes relative to a serving BS.

    ``mismatched`` orders the classes that the BS lacks; decision vectors over
    mismatched classes follow this (sorted) order.  ``shared_at_mbs`` are the
    mismatched classes the MBS holds (empty when the serving BS is the MBS),
    ``upload_only`` the rest: those can only come from the device itself.
    """

    matched: tuple[int, ...]
    mismatched: tuple[int, ...]
    shared_at_mbs: tuple[int, ...]
    upload_only: tuple[int, ...]


def knowledge_split(scenario: Scenario, md: int, bs: int) -> KnowledgeSplit:
    dev = scenario.devices[md]
    station = scenario.base_stations[bs]
    matched = tuple(sorted(dev.required_classes & station.stored_classes))
    mismatched = tuple(sorted(dev.required_classes - station.stored_classes))
    if bs == MBS_ID:
        shared = ()
    else:
        mbs_classes = scenario.base_stations[MBS_ID].stored_classes
        shared = tuple(c for c in mismatched if c in mbs_classes)
    upload_only = tuple(c for c in mismatched if c not in set(shared))
    return KnowledgeSplit(matched, mismatched, shared, upload_only)


def access_rate(scenario: Scenario, md: int, bs: int, subchannel: int) -> float:
    """Achievable MD -> BS rate (bits/s) on one subchannel."""
    radio = scenario.radio
    snr = scenario.devices[md].tx_power * scenario.access_gain[md, bs, subchannel] / radio.noise_power
    return radio.subchannel_bandwidth * math.log2(1.0 + snr)


def backhaul_rate(scenario: Scenario, md: int, bs: int, subchannel: int) -> float:
    """Achievable MBS -> SBS rate (bits/s) on the subchannel serving an MD."""
    if bs == MBS_ID:
        raise ModelError("backhaul rate is defined only towards an SBS")
    radio = scenario.radio
    power = scenario.base_stations[MBS_ID].backhaul_tx_power[bs - 1]
    snr = power * scenario.backhaul_gain[md, bs - 1, subchannel] / radio.noise_power
    return radio.subchannel_bandwidth * math.log2(1.0 + snr)


@dataclass(frozen=True)
class TimingBreakdown:
    upload_time: float  # knowledge uploaded by the MD
    download_time: float  # knowledge forwarded by the MBS over the backhaul
    sharing_time: float  # upload + download
    semantic_tx_time: float  # extracted semantic payload
    bit_tx_time: float  # raw source payload of classes kept in bit mode
    semantic_compute_time: float  # recovery of semantic classes at the BS
    bit_compute_time: float  # processing of bit-mode classes at the BS
    total_time: float


def _check_decision(split: KnowledgeSplit, bs: int, semantic_mode, upload_mode) -> None:
    n = len(split.mismatched)
    if len(semantic_mode) != n or len(upload_mode) != n:
        raise ModelError("decision vectors must cover exactly the mismatched classes")
    if any(v not in (0, 1) for v in semantic_mode) or any(v not in (0, 1) for v in upload_mode):
        raise ModelError("decision vectors must be binary")
    upload_forced = set(split.upload_only)
    for pos, cls in enumerate(split.mismatched):
        if upload_mode[pos] != 1 and (bs == MBS_ID or cls in upload_forced):
            raise ModelError(f"class {cls} cannot be downloaded from the MBS")


def timing(
    scenario: Scenario,
    md: int,
    bs: int,
    subchannel: int,
    semantic_mode,
    upload_mode,
    extraction_ratio: float,
) -> TimingBreakdown:
    """Per-stage delays for one (device, BS, subchannel) triple under a decision.

    ``semantic_mode`` and ``upload_mode`` are binary vectors over the mismatched
    classes in KnowledgeSplit order.  ``extraction_ratio == 0`` with a non-empty
    semantic payload yields an infinite recovery time (the decision is simply
    infeasible, not an error).
    """
    if not 0.0 <= extraction_ratio <= 1.0:
        raise ModelError("extraction_ratio must lie in [0, 1]")
    split = knowledge_split(scenario, md, bs)
    _check_decision(split, bs, semantic_mode, upload_mode)
    dev = scenario.devices[md]
    rate = access_rate(scenario, md, bs, subchannel)

    up_bits = 0.0
    down_bits = 0.0
    for pos, cls in enumerate(split.mismatched):
        if semantic_mode[pos]:
            if upload_mode[pos]:
                up_bits += dev.knowledge_bits[cls]
            else:
                down_bits += dev.knowledge_bits[cls]
    upload_time = up_bits / rate
    download_time = down_bits / backhaul_rate(scenario, md, bs, subchannel) if down_bits else 0.0
    sharing_time = upload_time + download_time

    semantic_bits = sum(dev.source_bits[c] for c in split.matched)
    bit_bits = 0.0
    semantic_cycles = sum(dev.compute_load[c] for c in split.matched)
    bit_cycles = 0.0
    for pos, cls in enumerate(split.mismatched):
        if semantic_mode[pos]:
            semantic_bits += dev.source_bits[cls]
            semantic_cycles += dev.compute_load[cls]
        else:
            bit_bits += dev.source_bits[cls]
            bit_cycles += dev.compute_load[cls]

    semantic_tx_time = extraction_ratio * semantic_bits / rate
    bit_tx_time = bit_bits / rate
    speed = scenario.base_stations[bs].compute_speed
    if semantic_cycles == 0.0:
        semantic_compute_time = 0.0
    elif extraction_ratio == 0.0:
        semantic_compute_time = math.inf
    else:
        workload = extraction_ratio ** (-scenario.compression_exponent)
        semantic_compute_time = workload * semantic_cycles / speed
    bit_compute_time = bit_cycles / speed
    total = sharing_time + semantic_tx_time + bit_tx_time + semantic_compute_time + bit_compute_time
    return TimingBreakdown(
        upload_time,
        download_time,
        sharing_time,
        semantic_tx_time,
        bit_tx_time,
        semantic_compute_time,
        bit_compute_time,
        total,
    )


def gestr(
    scenario: Scenario,
    md: int,
    bs: int,
    subchannel: int,
    semantic_mode,
    upload_mode,
    extraction_ratio: float,
) -> float:
    """Generalized effective semantic transmission rate (suts/s) of a decision.

    Ratio of effectively delivered semantic information to transmission time
    (sharing + semantic + bit); compute times do not enter the denominator.
    """
    breakdown = timing(scenario, md, bs, subchannel, semantic_mode, upload_mode, extraction_ratio)
    split = knowledge_split(scenario, md, bs)
    dev = scenario.devices[md]
    eps = scenario.accuracy.value(extraction_ratio)
    semantic_info = sum(dev.semantic_info[c] for c in split.matched)
    bit_info = 0.0
    for pos, cls in enumerate(split.mismatched):
        if semantic_mode[pos]:
            semantic_info += dev.semantic_info[cls]
        else:
            bit_info += dev.semantic_info[cls]
    denominator = breakdown.sharing_time + breakdown.semantic_tx_time + breakdown.bit_tx_time
    if denominator <= 0.0:
        raise DegenerateInstanceError("no transmitted payload; GESTR is undefined")
    return (eps * semantic_info + bit_info) / denominator


def min_extraction_ratio(model: AccuracyModel, threshold: float) -> float:
    """Smallest xi with value(xi) >= threshold, by bisection.

    Raises InfeasibleAccuracyError when the threshold exceeds value(1).
    """
    if model.value(1.0) < threshold:
        raise InfeasibleAccuracyError("accuracy threshold is unattainable")
    lo, hi = 0.0, 1.0
    if model.value(lo) >= threshold:
        return lo
    for _ in range(_BISECTION_MAX_ITER):
        if hi - lo <= _BISECTION_XI_TOL and model.value(hi) - threshold <= _BISECTION_EPS_TOL:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # float resolution exhausted
            break
        if model.value(mid) >= threshold:
            hi = mid
        else:
            lo = mid
    return hi


def extraction_grid(xi_min: float, grid_m: int) -> list[float]:
    """Uniform grid of grid_m + 1 extraction ratios covering [xi_min, 1]."""
    if not 0.0 <= xi_min <= 1.0:
        raise ModelError("xi_min must lie in [0, 1]")
    if grid_m < 1:
        raise ModelError("grid_m must be at least 1")
    return [1.0 if m == grid_m else xi_min + (1.0 - xi_min) * m / grid_m for m in range(grid_m + 1)]
