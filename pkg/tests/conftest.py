"""Hand-built scenarios with exact rates for unit tests."""
from __future__ import annotations

import numpy as np
import pytest

from semnet.model import BaseStation, MobileDevice, RadioParams, Scenario


def make_single_class_scenario() -> Scenario:
    """One MD, one required class stored everywhere; access SNR = 1 so R = 1e8 bit/s."""
    radio = RadioParams(subchannel_bandwidth=1e8, noise_power=1e-15)
    mbs = BaseStation(0, (-150.0, 0.0), 4e9, frozenset({0}), backhaul_tx_power=(20.0,))
    sbs = BaseStation(1, (0.0, 0.0), 2e9, frozenset({0}))
    md = MobileDevice(
        md_id=0,
        position=(10.0, 0.0),
        tx_power=0.1,
        required_classes=frozenset({0}),
        semantic_info={0: 1e7},
        source_bits={0: 2e7},
        knowledge_bits={0: 1e7},
        compute_load={0: 1e8},
        accuracy_threshold=0.7,
        delay_tolerance=3.0,
    )
    access = np.full((1, 2, 1), 1e-14)  # SNR = 0.1 * 1e-14 / 1e-15 = 1
    backhaul = np.full((1, 1, 1), 1.5e-16)  # SNR = 20 * 1.5e-16 / 1e-15 = 3
    return Scenario(radio, (mbs, sbs), (md,), access, backhaul, num_classes=1, num_subchannels=1)


def make_four_class_scenario() -> Scenario:
    """One MD requiring classes 0-3; MBS stores {0,1,2}, SBS stores {0}.

    Access SNR = 1 everywhere (R = 1e6 bit/s), backhaul SNR = 3 (R = 2e6 bit/s).
    At the SBS: matched (0,), mismatched (1,2,3), shared at MBS (1,2), upload only (3,).
    """
    radio = RadioParams(subchannel_bandwidth=1e6, noise_power=1e-15)
    mbs = BaseStation(0, (-150.0, 0.0), 4e9, frozenset({0, 1, 2}), backhaul_tx_power=(20.0,))
    sbs = BaseStation(1, (0.0, 0.0), 2e9, frozenset({0}))
    md = MobileDevice(
        md_id=0,
        position=(10.0, 0.0),
        tx_power=0.1,
        required_classes=frozenset({0, 1, 2, 3}),
        semantic_info={0: 4e6, 1: 6e6, 2: 8e6, 3: 5e6},
        source_bits={0: 1e6, 1: 2e6, 2: 3e6, 3: 1.2e6},
        knowledge_bits={0: 8e5, 1: 1e6, 2: 2e6, 3: 4e5},
        compute_load={0: 1e7, 1: 2e7, 2: 3e7, 3: 4e7},
        accuracy_threshold=0.7,
        delay_tolerance=20.0,
    )
    access = np.full((1, 2, 1), 1e-14)
    backhaul = np.full((1, 1, 1), 1.5e-16)
    return Scenario(radio, (mbs, sbs), (md,), access, backhaul, num_classes=4, num_subchannels=1)


def make_random_scenario(
    rng: np.random.Generator,
    num_md: int = 2,
    num_sbs: int = 1,
    num_channels: int = 2,
    num_classes: int = 5,
    mbs_kb: int = 4,
    sbs_kb: int = 3,
    md_required: int = 4,
    delay_range: tuple[float, float] = (2.5, 3.5),
) -> Scenario:
    """Random instance with Table-like parameter magnitudes, gains drawn directly."""
    radio = RadioParams(subchannel_bandwidth=6e6, noise_power=1e-15)
    stations = [
        BaseStation(0, (-150.0, 0.0), 4e9, frozenset(rng.choice(num_classes, mbs_kb, replace=False).tolist()),
                    backhaul_tx_power=tuple([20.0] * num_sbs)),
    ]
    for j in range(1, num_sbs + 1):
        stored = frozenset(rng.choice(num_classes, sbs_kb, replace=False).tolist())
        stations.append(BaseStation(j, (0.0, 0.0), 2e9, stored))
    devices = []
    for i in range(num_md):
        required = sorted(rng.choice(num_classes, md_required, replace=False).tolist())
        devices.append(
            MobileDevice(
                md_id=i,
                position=(float(rng.uniform(-150, 150)), float(rng.uniform(-150, 150))),
                tx_power=0.1,
                required_classes=frozenset(required),
                semantic_info={c: float(rng.uniform(2e6, 2e7)) for c in required},
                source_bits={c: float(rng.uniform(2e7, 1e8)) for c in required},
                knowledge_bits={c: float(rng.uniform(5e6, 5e7)) for c in required},
                compute_load={c: float(rng.uniform(1e6, 1e8)) for c in required},
                accuracy_threshold=float(rng.uniform(0.7, 0.85)),
                delay_tolerance=float(rng.uniform(*delay_range)),
            )
        )
    access = 10 ** rng.uniform(-9.0, -7.0, (num_md, num_sbs + 1, num_channels))
    backhaul = 10 ** rng.uniform(-9.5, -7.5, (num_md, num_sbs, num_channels))
    return Scenario(
        radio, tuple(stations), tuple(devices), access, backhaul,
        num_classes=num_classes, num_subchannels=num_channels,
    )


@pytest.fixture
def single_class_scenario() -> Scenario:
    return make_single_class_scenario()


@pytest.fixture
def four_class_scenario() -> Scenario:
    return make_four_class_scenario()
