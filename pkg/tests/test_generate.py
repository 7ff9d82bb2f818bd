from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest

from semnet.generate import ConfigError, GenerationConfig, as_range, generate, link_gain
from semnet.model import MBS_ID, knowledge_split
from semnet.serialization import scenario_hash


class TestLinkGain:
    def test_reference_distance_value(self):
        # 1e-3 / 150^2 with unit fading
        assert link_gain(150.0, 1.0) == pytest.approx(4.4444e-8, rel=1e-4)

    def test_distance_floor(self):
        assert link_gain(0.0, 1.0) == link_gain(0.5, 1.0) == 1e-3

    def test_fading_scales_linearly(self):
        assert link_gain(10.0, 3.0) == pytest.approx(3.0 * link_gain(10.0, 1.0), rel=1e-15)


class TestConfigValidation:
    def test_defaults_are_valid(self):
        config = GenerationConfig()
        assert config.num_mds == 3
        assert config.num_subchannels == 5
        assert config.num_classes == 10

    def test_kb_larger_than_classes_rejected(self):
        with pytest.raises(ConfigError, match="num_classes"):
            GenerationConfig(mbs_kb_size=11)

    def test_bad_range_rejected(self):
        with pytest.raises(ConfigError, match="lo <= hi"):
            GenerationConfig(semantic_info_range=(2e7, 2e6))

    def test_threshold_must_stay_below_one(self):
        with pytest.raises(ConfigError, match="below 1"):
            GenerationConfig(accuracy_threshold_range=(0.9, 1.0))

    def test_nonpositive_scalar_rejected(self):
        with pytest.raises(ConfigError, match="positive"):
            GenerationConfig(bandwidth=0.0)

    def test_scalar_range_accepted(self):
        config = GenerationConfig(delay_tolerance_range=3.0)
        assert as_range(config.delay_tolerance_range) == (3.0, 3.0)


class TestGenerate:
    def test_deterministic_given_seed(self):
        a = generate(GenerationConfig(seed=42))
        b = generate(GenerationConfig(seed=42))
        assert scenario_hash(a) == scenario_hash(b)

    def test_different_seeds_differ(self):
        a = generate(GenerationConfig(seed=1))
        b = generate(GenerationConfig(seed=2))
        assert scenario_hash(a) != scenario_hash(b)

    def test_shapes_and_invariants(self):
        sc = generate(GenerationConfig(seed=7, num_mds=4, num_sbs=2, num_subchannels=3))
        assert sc.num_devices == 4
        assert sc.num_sbs == 2
        assert sc.access_gain.shape == (4, 3, 3)
        assert sc.backhaul_gain.shape == (4, 2, 3)
        assert np.all(sc.access_gain > 0)
        for dev in sc.devices:
            assert len(dev.required_classes) == 6
            assert set(dev.semantic_info) == dev.required_classes
            assert 0.7 <= dev.accuracy_threshold <= 0.85
            assert 2.5 <= dev.delay_tolerance <= 3.5

    def test_geometry_layout(self):
        sc = generate(GenerationConfig(seed=3))
        assert sc.base_stations[0].position == (-150.0, 0.0)
        assert sc.base_stations[1].position == (0.0, 0.0)
        for dev in sc.devices:
            assert math.hypot(*dev.position) <= 150.0

    def test_multiple_sbs_on_ring(self):
        sc = generate(GenerationConfig(seed=3, num_sbs=3))
        for bs in sc.base_stations[1:]:
            assert math.hypot(*bs.position) == pytest.approx(75.0)

    def test_full_mbs_kb_leaves_nothing_mismatched(self):
        sc = generate(GenerationConfig(seed=11, mbs_kb_size=10))
        for i in range(sc.num_devices):
            assert knowledge_split(sc, i, MBS_ID).mismatched == ()

    def test_table_ranges_respected(self):
        sc = generate(GenerationConfig(seed=13, num_mds=20))
        for dev in sc.devices:
            for c in dev.required_classes:
                assert 2e6 <= dev.semantic_info[c] <= 2e7
                assert 5e6 <= dev.knowledge_bits[c] <= 5e7
                assert 2e7 <= dev.source_bits[c] <= 1e8
                assert 1e6 <= dev.compute_load[c] <= 1e8

    def test_scalar_change_preserves_unrelated_draws(self):
        # power enters no random stream, so geometry and tasks must not move
        base = generate(GenerationConfig(seed=5))
        bumped = generate(GenerationConfig(seed=5, md_tx_power=0.5))
        for a, b in zip(base.devices, bumped.devices):
            assert a.position == b.position
            assert a.semantic_info == b.semantic_info
            assert a.accuracy_threshold == b.accuracy_threshold
        assert np.array_equal(base.access_gain, bumped.access_gain)
        for a, b in zip(base.base_stations, bumped.base_stations):
            assert a.stored_classes == b.stored_classes


class TestStatisticalProperties:
    def test_area_uniform_positions(self):
        sc = generate(GenerationConfig(seed=97, num_mds=100000, md_required_size=1,
                                       num_classes=1, mbs_kb_size=1, sbs_kb_size=1))
        mean_r2 = np.mean([p[0] ** 2 + p[1] ** 2 for p in (d.position for d in sc.devices)])
        assert mean_r2 == pytest.approx(150.0 ** 2 / 2.0, rel=0.02)

    def test_exponential_fading_unit_mean(self):
        sc = generate(GenerationConfig(seed=98, num_mds=200, num_subchannels=50,
                                       num_sbs=9))
        # invert the path loss to recover the raw fading draws
        positions = [bs.position for bs in sc.base_stations]
        samples = []
        for i, dev in enumerate(sc.devices):
            for j, pos in enumerate(positions):
                d = max(math.dist(dev.position, pos), 1.0)
                samples.extend(sc.access_gain[i, j, :] * d * d / 1e-3)
        samples = np.asarray(samples)
        assert samples.size >= 100000
        assert 0.98 <= samples.mean() <= 1.02
