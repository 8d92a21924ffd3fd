import math

import numpy as np
import pytest

from chandis.applications import adc_channel, bhattacharyya_angle
from chandis.bounds import DiscriminationProblem, theorem3_bound
from chandis.bruteforce import (
    SearchConfig,
    exhaustive_small_check,
    max_avg_weighted_trace_norm_search,
    max_weighted_trace_norm_search,
    min_avg_fidelity_search,
)
from chandis.qmat import KrausChannel
from chandis.sampling import random_channel
from chandis.sdp import weighted_diamond_norm_sdp

FAST = SearchConfig(restarts=32, steps=800, seed=5)


class TestSearchConfig:
    def test_restart_floor(self):
        with pytest.raises(ValueError):
            SearchConfig(restarts=0)

    def test_default_schedule_halves(self):
        cfg = SearchConfig()
        assert cfg.step_size(0) == pytest.approx(0.3)
        assert cfg.step_size(199) == pytest.approx(0.3)
        assert cfg.step_size(200) == pytest.approx(0.15)
        assert cfg.step_size(1999) == pytest.approx(0.3 * 0.5**9)

    def test_explicit_schedule(self):
        cfg = SearchConfig(step_schedule=(0.5, 0.1))
        assert cfg.step_size(0) == 0.5
        assert cfg.step_size(5) == 0.1


class TestMaxSearch:
    def test_identical_channels(self):
        ch = adc_channel(0.3)
        assert max_weighted_trace_norm_search(ch, ch, 1.0, FAST) == pytest.approx(0.0, abs=1e-9)

    def test_alpha_zero_cptp(self):
        ch = adc_channel(0.3)
        assert max_weighted_trace_norm_search(ch, ch, 0.0, FAST) >= 0.999

    def test_adc_pair_matches_sdp(self):
        got = max_weighted_trace_norm_search(adc_channel(0.2), adc_channel(0.4), 1.0, FAST)
        want = weighted_diamond_norm_sdp(adc_channel(0.2), adc_channel(0.4), 1.0).value
        assert got <= want + 1e-6
        assert got == pytest.approx(want, abs=1e-4)

    def test_seed_determinism(self):
        ch0, ch1 = adc_channel(0.1), adc_channel(0.5)
        a = max_weighted_trace_norm_search(ch0, ch1, 0.8, SearchConfig(restarts=8, steps=200, seed=3))
        b = max_weighted_trace_norm_search(ch0, ch1, 0.8, SearchConfig(restarts=8, steps=200, seed=3))
        assert a == b

    def test_avg_variant_single_oracle(self):
        ch0, ch1 = adc_channel(0.15), adc_channel(0.45)
        avg = max_avg_weighted_trace_norm_search([(1.0, ch0)], ch1, 1.0, "oracle_minus_ref", FAST)
        full = max_weighted_trace_norm_search(ch0, ch1, 1.0, FAST)
        assert avg == pytest.approx(full / 2.0, abs=1e-6)


class TestMinFidelitySearch:
    def test_all_equal(self):
        ch = adc_channel(0.2)
        assert min_avg_fidelity_search([(1.0, ch)], ch, FAST) == pytest.approx(1.0, abs=1e-9)

    def test_adc_matches_bhattacharyya(self):
        got = min_avg_fidelity_search([(1.0, adc_channel(0.1))], adc_channel(0.11), FAST)
        assert got == pytest.approx(math.cos(bhattacharyya_angle(0.1, 0.11)), abs=1e-4)

    def test_grover_four(self):
        # uniform phase oracles against the identity: min fidelity 1 - 2k/N
        from chandis.applications import GroverInstance, grover_problem

        prob = grover_problem(GroverInstance(4, 1))
        got = min_avg_fidelity_search(
            prob.oracles, KrausChannel.identity(4), SearchConfig(restarts=24, steps=1200, seed=2)
        )
        assert got == pytest.approx(0.5, abs=1e-4)


class TestExhaustiveSmallCheck:
    def test_orthogonal_outputs(self):
        flip = KrausChannel.from_unitary(np.array([[0.0, 1.0], [1.0, 0.0]]))
        prob = DiscriminationProblem.simple([(0.5, KrausChannel.identity(2)), (0.5, flip)])
        assert exhaustive_small_check(prob, 1, FAST) == pytest.approx(0.0, abs=1e-9)

    def test_identical_channels(self):
        ch = adc_channel(0.4)
        prob = DiscriminationProblem.simple([(0.3, ch), (0.7, ch)])
        assert exhaustive_small_check(prob, 1, FAST) == pytest.approx(0.3, abs=1e-7)

    def test_adc_one_query(self):
        prob = DiscriminationProblem.simple([(0.5, adc_channel(0.10)), (0.5, adc_channel(0.11))])
        found = exhaustive_small_check(prob, 1, FAST)
        exact = 0.5 * (
            1.0 - 0.5 * weighted_diamond_norm_sdp(adc_channel(0.10), adc_channel(0.11), 1.0).value
        )
        assert found == pytest.approx(exact, abs=1e-5)
        t3 = theorem3_bound(1, 0.5, 0.5, bhattacharyya_angle(0.10, 0.11))
        assert t3.value <= found + 1e-6

    def test_two_queries_no_worse(self):
        prob = DiscriminationProblem.simple([(0.5, adc_channel(0.1)), (0.5, adc_channel(0.3))])
        e1 = exhaustive_small_check(prob, 1, FAST)
        e2 = exhaustive_small_check(prob, 2, FAST)
        assert e2 <= e1 + 1e-6

    def test_unsupported_configuration(self, rng):
        three = DiscriminationProblem.simple(
            [(1 / 3, random_channel(rng, 2)), (1 / 3, random_channel(rng, 2)), (1 / 3, random_channel(rng, 2))]
        )
        with pytest.raises(ValueError):
            exhaustive_small_check(three, 1, FAST)
        pair = DiscriminationProblem.simple([(0.5, adc_channel(0.1)), (0.5, adc_channel(0.2))])
        with pytest.raises(ValueError):
            exhaustive_small_check(pair, 3, FAST)
