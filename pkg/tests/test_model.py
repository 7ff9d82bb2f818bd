from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semnet.model import (
    AccuracyModel,
    DegenerateInstanceError,
    InfeasibleAccuracyError,
    ModelError,
    access_rate,
    backhaul_rate,
    default_accuracy_model,
    extraction_grid,
    gestr,
    knowledge_split,
    min_extraction_ratio,
    timing,
)


class TestRates:
    def test_access_rate_reference_value(self, single_class_scenario):
        # W=1e8, SNR=1 -> exactly one bit per symbol
        assert access_rate(single_class_scenario, 0, 0, 0) == pytest.approx(1e8, rel=1e-12)

    def test_access_rate_typical_magnitude(self, single_class_scenario):
        scenario = single_class_scenario
        scenario.radio = type(scenario.radio)(6e6, 1e-15)
        scenario.access_gain[0, 1, 0] = 4.4444e-8
        assert access_rate(scenario, 0, 1, 0) == pytest.approx(132501345.36213763, rel=1e-12)

    def test_access_rate_vanishes_with_gain(self, single_class_scenario):
        single_class_scenario.access_gain[0, 0, 0] = 1e-300
        assert access_rate(single_class_scenario, 0, 0, 0) == 0.0

    def test_backhaul_rate_reference_value(self, single_class_scenario):
        scenario = single_class_scenario
        scenario.radio = type(scenario.radio)(6e6, 1e-15)
        scenario.backhaul_gain[0, 0, 0] = 5e-10  # SNR = 1e7
        assert backhaul_rate(scenario, 0, 1, 0) == pytest.approx(139520980.8508862, rel=1e-12)

    def test_backhaul_rate_snr_three(self, single_class_scenario):
        # SNR = 3 -> two bits per symbol
        assert backhaul_rate(single_class_scenario, 0, 1, 0) == pytest.approx(2e8, rel=1e-12)

    def test_backhaul_rate_rejected_at_mbs(self, single_class_scenario):
        with pytest.raises(ModelError):
            backhaul_rate(single_class_scenario, 0, 0, 0)


class TestKnowledgeSplit:
    def test_partition_at_sbs(self, four_class_scenario):
        split = knowledge_split(four_class_scenario, 0, 1)
        assert split.matched == (0,)
        assert split.mismatched == (1, 2, 3)
        assert split.shared_at_mbs == (1, 2)
        assert split.upload_only == (3,)

    def test_partition_at_mbs(self, four_class_scenario):
        split = knowledge_split(four_class_scenario, 0, 0)
        assert split.matched == (0, 1, 2)
        assert split.mismatched == (3,)
        assert split.shared_at_mbs == ()
        assert split.upload_only == (3,)

    def test_disjoint_and_covering(self, four_class_scenario):
        for bs in (0, 1):
            split = knowledge_split(four_class_scenario, 0, bs)
            required = four_class_scenario.devices[0].required_classes
            assert set(split.matched) | set(split.mismatched) == required
            assert set(split.matched) & set(split.mismatched) == set()
            assert set(split.shared_at_mbs) | set(split.upload_only) == set(split.mismatched)
            assert set(split.shared_at_mbs) & set(split.upload_only) == set()


class TestTiming:
    def test_matched_only_breakdown(self, single_class_scenario):
        # Single matched class at the MBS: no sharing, semantic payload only.
        breakdown = timing(single_class_scenario, 0, 0, 0, (), (), 1.0)
        assert breakdown.upload_time == 0.0
        assert breakdown.download_time == 0.0
        assert breakdown.semantic_tx_time == pytest.approx(0.2, rel=1e-12)
        assert breakdown.bit_tx_time == 0.0
        assert breakdown.semantic_compute_time == pytest.approx(0.025, rel=1e-12)
        assert breakdown.total_time == pytest.approx(0.225, rel=1e-12)

    def test_mixed_decision_at_sbs(self, four_class_scenario):
        # a = (1,1,1) over mismatched (1,2,3); class 1 uploaded, class 2 downloaded.
        breakdown = timing(four_class_scenario, 0, 1, 0, (1, 1, 1), (1, 0, 1), 0.5)
        assert breakdown.upload_time == pytest.approx(1.4, rel=1e-12)  # (1e6 + 4e5) / 1e6
        assert breakdown.download_time == pytest.approx(1.0, rel=1e-12)  # 2e6 / 2e6
        assert breakdown.sharing_time == pytest.approx(2.4, rel=1e-12)
        assert breakdown.semantic_tx_time == pytest.approx(0.5 * 7.2e6 / 1e6, rel=1e-12)
        assert breakdown.bit_tx_time == 0.0
        # omega = 0.5^-1 = 2; all 1e8 cycles semantic at 2e9 cycle/s
        assert breakdown.semantic_compute_time == pytest.approx(2 * 1e8 / 2e9, rel=1e-12)
        assert breakdown.bit_compute_time == 0.0

    def test_all_bit_mode(self, four_class_scenario):
        breakdown = timing(four_class_scenario, 0, 1, 0, (0, 0, 0), (1, 1, 1), 0.5)
        assert breakdown.sharing_time == 0.0
        # semantic side carries only the matched class
        assert breakdown.semantic_tx_time == pytest.approx(0.5 * 1e6 / 1e6, rel=1e-12)
        assert breakdown.bit_tx_time == pytest.approx((2e6 + 3e6 + 1.2e6) / 1e6, rel=1e-12)
        assert breakdown.bit_compute_time == pytest.approx(9e7 / 2e9, rel=1e-12)

    def test_download_of_shared_class_only(self, four_class_scenario):
        # only class 2 semantic, downloaded: no upload at all
        breakdown = timing(four_class_scenario, 0, 1, 0, (0, 1, 0), (1, 0, 1), 0.5)
        assert breakdown.upload_time == 0.0
        assert breakdown.download_time == pytest.approx(2e6 / 2e6, rel=1e-12)

    def test_upload_only_class_must_upload(self, four_class_scenario):
        with pytest.raises(ModelError):
            timing(four_class_scenario, 0, 1, 0, (1, 1, 1), (1, 1, 0), 0.5)

    def test_mbs_disallows_download(self, four_class_scenario):
        with pytest.raises(ModelError):
            timing(four_class_scenario, 0, 0, 0, (1,), (0,), 0.5)

    def test_full_upload_matches_mbs_form(self, four_class_scenario):
        # with every shared class uploaded the SBS expression collapses to the MBS one
        breakdown = timing(four_class_scenario, 0, 1, 0, (1, 1, 1), (1, 1, 1), 0.5)
        dev = four_class_scenario.devices[0]
        expected = (dev.knowledge_bits[1] + dev.knowledge_bits[2] + dev.knowledge_bits[3]) / 1e6
        assert breakdown.upload_time == pytest.approx(expected, rel=1e-12)
        assert breakdown.download_time == 0.0

    def test_zero_extraction_ratio_sentinel(self, single_class_scenario):
        breakdown = timing(single_class_scenario, 0, 0, 0, (), (), 0.0)
        assert breakdown.semantic_compute_time == math.inf
        assert breakdown.total_time == math.inf

    def test_semantic_tx_monotone_in_xi(self, four_class_scenario):
        lo = timing(four_class_scenario, 0, 1, 0, (1, 0, 1), (1, 1, 1), 0.3)
        hi = timing(four_class_scenario, 0, 1, 0, (1, 0, 1), (1, 1, 1), 0.8)
        assert lo.semantic_tx_time < hi.semantic_tx_time
        assert lo.semantic_compute_time > hi.semantic_compute_time


class TestAccuracy:
    def test_value_at_one(self):
        model = default_accuracy_model()
        assert model.value(1.0) == pytest.approx(0.9227999379499999, abs=1e-12)

    def test_clamped_at_zero(self):
        model = default_accuracy_model()
        assert model.raw_value(0.0) == pytest.approx(-0.003613468983285628, abs=1e-12)
        assert model.value(0.0) == 0.0

    def test_interior_value(self):
        model = default_accuracy_model()
        assert model.value(0.5) == pytest.approx(0.8911989048629138, abs=1e-12)

    def test_sign_normalization(self):
        # negative inputs are folded to their magnitudes
        model = AccuracyModel(-6.205e-8, 16.45, 0.9228, -0.06917)
        reference = default_accuracy_model()
        assert model.theta1 == reference.theta1
        assert model.theta4 == reference.theta4
        assert model.value(0.5) == reference.value(0.5)

    def test_literal_signs_preserved(self):
        model = AccuracyModel(-6.205e-8, 16.45, 0.9228, -0.06917, literal_signs=True)
        assert model.theta1 < 0
        assert model.value(1.0) == pytest.approx(6.205e-8 + 0.9228, abs=1e-12)

    def test_constant_curve_allowed(self):
        model = AccuracyModel(0.0, 5.0, 0.5, 0.0)
        assert model.value(0.0) == model.value(1.0) == 0.5

    def test_strictly_increasing_on_grid(self):
        values = default_accuracy_model().value(np.linspace(0.0, 1.0, 1000))
        assert np.all(np.diff(values) > 0)


class TestMinExtractionRatio:
    def test_reference_threshold(self):
        model = default_accuracy_model()
        assert min_extraction_ratio(model, 0.7) == pytest.approx(0.09992923119880588, abs=1e-3)

    def test_higher_threshold(self):
        model = default_accuracy_model()
        assert min_extraction_ratio(model, 0.85) == pytest.approx(0.2174474377525754, abs=1e-6)

    def test_threshold_at_curve_top(self):
        model = default_accuracy_model()
        assert min_extraction_ratio(model, model.value(1.0)) == pytest.approx(1.0, abs=1e-9)

    def test_zero_threshold(self):
        assert min_extraction_ratio(default_accuracy_model(), 0.0) == 0.0

    def test_unattainable_threshold(self):
        with pytest.raises(InfeasibleAccuracyError):
            min_extraction_ratio(default_accuracy_model(), 0.93)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(min_value=0.01, max_value=0.9227))
    def test_bracket_properties(self, threshold):
        model = default_accuracy_model()
        xi = min_extraction_ratio(model, threshold)
        assert model.value(xi) >= threshold
        assert model.value(xi) - threshold <= 1e-8
        if xi > 1e-6:
            assert model.value(xi - 1e-6) < threshold + 1e-8


class TestExtractionGrid:
    def test_endpoints_and_count(self):
        grid = extraction_grid(0.1, 20)
        assert len(grid) == 21
        assert grid[0] == 0.1
        assert grid[-1] == 1.0
        assert all(b > a for a, b in zip(grid, grid[1:]))

    def test_uniform_spacing(self):
        grid = extraction_grid(0.25, 4)
        assert grid == pytest.approx([0.25, 0.4375, 0.625, 0.8125, 1.0], abs=1e-15)

    def test_degenerate_start_at_one(self):
        assert extraction_grid(1.0, 5) == [1.0] * 6

    def test_rejects_bad_args(self):
        with pytest.raises(ModelError):
            extraction_grid(-0.1, 10)
        with pytest.raises(ModelError):
            extraction_grid(0.5, 0)


class TestGestr:
    def test_reference_value(self, single_class_scenario):
        value = gestr(single_class_scenario, 0, 0, 0, (), (), 1.0)
        assert value == pytest.approx(46139996.89749999, rel=1e-12)

    def test_bit_mode_ignores_accuracy(self, four_class_scenario):
        # everything in bit mode: numerator is plain mismatched info plus
        # accuracy-weighted matched info
        eps = four_class_scenario.accuracy.value(0.5)
        value = gestr(four_class_scenario, 0, 1, 0, (0, 0, 0), (1, 1, 1), 0.5)
        expected_num = eps * 4e6 + (6e6 + 8e6 + 5e6)
        expected_den = 0.5 * 1e6 / 1e6 + (2e6 + 3e6 + 1.2e6) / 1e6
        assert value == pytest.approx(expected_num / expected_den, rel=1e-12)

    def test_scales_linearly_with_semantic_info(self, four_class_scenario):
        base = gestr(four_class_scenario, 0, 1, 0, (1, 0, 1), (1, 1, 1), 0.6)
        dev = four_class_scenario.devices[0]
        scaled_dev = type(dev)(
            md_id=dev.md_id,
            position=dev.position,
            tx_power=dev.tx_power,
            required_classes=dev.required_classes,
            semantic_info={k: 3.0 * v for k, v in dev.semantic_info.items()},
            source_bits=dev.source_bits,
            knowledge_bits=dev.knowledge_bits,
            compute_load=dev.compute_load,
            accuracy_threshold=dev.accuracy_threshold,
            delay_tolerance=dev.delay_tolerance,
        )
        four_class_scenario.devices = (scaled_dev,)
        assert gestr(four_class_scenario, 0, 1, 0, (1, 0, 1), (1, 1, 1), 0.6) == pytest.approx(
            3.0 * base, rel=1e-12
        )

    def test_zero_denominator_rejected(self, four_class_scenario):
        # xi = 0 with every mismatched class semantic: nothing is ever transmitted
        # over the air besides knowledge, and with zero knowledge bits nothing at all.
        scenario = four_class_scenario
        dev = scenario.devices[0]
        # Craft a device whose only required class is matched at the SBS; xi = 0
        # then zeroes the semantic payload term.
        slim = type(dev)(
            md_id=0,
            position=dev.position,
            tx_power=dev.tx_power,
            required_classes=frozenset({0}),
            semantic_info={0: 1e6},
            source_bits={0: 1e6},
            knowledge_bits={0: 1e6},
            compute_load={0: 1e6},
            accuracy_threshold=0.7,
            delay_tolerance=3.0,
        )
        scenario.devices = (slim,)
        with pytest.raises(DegenerateInstanceError):
            gestr(scenario, 0, 1, 0, (), (), 0.0)
