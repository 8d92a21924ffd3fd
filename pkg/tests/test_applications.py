import math

import numpy as np
import pytest

from chandis.applications import (
    CpfInstance,
    GroverInstance,
    TwoAdcInstance,
    adc_channel,
    bhattacharyya_angle,
    cpf_bound,
    cpf_problem,
    cpf_reference,
    grover_bound,
    grover_problem,
    grover_success,
    two_adc_bures_bound,
    two_adc_tau_sdp,
    two_adc_trace_bound,
)
from chandis.bounds import p_err_zero, theorem1_bound, theta_bures_sdp
from chandis.qmat import DensityMatrix, apply_channel, stinespring_from_kraus
from chandis.sdp import min_avg_trace_norm_sdp, weighted_diamond_norm_sdp

from conftest import basis_dm


class TestAdcChannel:
    def test_rate_zero_is_identity(self, rng):
        ch = adc_channel(0.0)
        rho = DensityMatrix(basis_dm(2, 1))
        np.testing.assert_allclose(apply_channel(ch, rho).matrix, rho.matrix, atol=1e-12)

    def test_rate_one_resets(self):
        ch = adc_channel(1.0)
        out = apply_channel(ch, DensityMatrix(basis_dm(2, 1)))
        np.testing.assert_allclose(out.matrix, basis_dm(2, 0), atol=1e-12)

    def test_half_rate_mixture(self):
        out = apply_channel(adc_channel(0.5), DensityMatrix(basis_dm(2, 1)))
        np.testing.assert_allclose(out.matrix, np.diag([0.5, 0.5]), atol=1e-12)

    def test_general_rate_action(self):
        r = 0.3
        out = apply_channel(adc_channel(r), DensityMatrix(basis_dm(2, 1)))
        np.testing.assert_allclose(out.matrix, np.diag([r, 1 - r]), atol=1e-12)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            adc_channel(1.2)

    def test_stinespring_matches_definition(self):
        # V|0> = |0>|0>,  V|1> = sqrt(1-r)|1>|0> + sqrt(r)|0>|1>
        r = 0.4
        iso = stinespring_from_kraus(adc_channel(r))
        want = np.zeros((4, 2))
        want[0, 0] = 1.0
        want[2, 1] = math.sqrt(1 - r)
        want[1, 1] = math.sqrt(r)
        np.testing.assert_allclose(iso.matrix, want, atol=1e-12)


class TestBhattacharyya:
    def test_equal_rates(self):
        assert bhattacharyya_angle(0.37, 0.37) == pytest.approx(0.0, abs=1e-8)

    def test_extremes(self):
        assert bhattacharyya_angle(0.0, 1.0) == pytest.approx(math.pi / 2.0)

    def test_anchor_value(self):
        want = math.acos(math.sqrt(0.1 * 0.11) + math.sqrt(0.9 * 0.89))
        assert bhattacharyya_angle(0.10, 0.11) == pytest.approx(want, abs=1e-15)
        assert bhattacharyya_angle(0.10, 0.11) == pytest.approx(0.016315, abs=1e-6)


class TestGrover:
    def test_n4_k1_point(self):
        inst = GroverInstance(4, 1)
        out = grover_bound(inst, 1)
        assert out.applicable
        assert out.value == 0.0
        assert grover_success(inst, 1) == pytest.approx(1.0, abs=1e-12)

    def test_zero_queries(self):
        inst = GroverInstance(8, 2)
        assert grover_bound(inst, 0).value == pytest.approx(1.0 - 2.0 / 8.0, abs=1e-12)
        assert grover_success(inst, 0) == pytest.approx(2.0 / 8.0, abs=1e-12)

    def test_n16_k2(self):
        inst = GroverInstance(16, 2)
        want = math.cos(3 * math.asin(math.sqrt(2.0 / 16.0))) ** 2
        out = grover_bound(inst, 1)
        assert out.value == pytest.approx(want, abs=1e-12)
        assert out.value == pytest.approx(1.0 - grover_success(inst, 1), abs=1e-12)

    def test_n16_k1_success(self):
        # sin(5 asin(1/4)) = 61/64 exactly
        assert grover_success(GroverInstance(16, 1), 2) == pytest.approx((61.0 / 64.0) ** 2, abs=1e-12)

    def test_success_outside_window(self):
        with pytest.raises(ValueError):
            grover_success(GroverInstance(4, 1), 5)

    def test_instance_validation(self):
        with pytest.raises(ValueError):
            GroverInstance(4, 3)

    def test_complement_identity(self):
        assert grover_bound(GroverInstance(64, 2), 3).value + grover_success(
            GroverInstance(64, 2), 3
        ) == pytest.approx(1.0, abs=1e-12)

    def test_problem_matches_closed_form_theta(self):
        # SDP angle vs the closed-form surrogate, small sizes
        for n_el, k in [(4, 1), (4, 2), (8, 1), (8, 2)]:
            inst = GroverInstance(n_el, k)
            prob = grover_problem(inst)
            oracles = [(p, stinespring_from_kraus(ch)) for p, ch in prob.oracles]
            from chandis.qmat import KrausChannel

            ident = stinespring_from_kraus(KrausChannel.identity(n_el))
            res = min_avg_trace_norm_sdp(oracles, ident)
            closed = 1.0 - 2.0 * k / n_el
            assert res.value >= closed - 1e-6
            theta_sdp = math.acos(min(max(res.value, 0.0), 1.0))
            assert theta_sdp <= 2.0 * math.asin(math.sqrt(k / n_el)) + 1e-6


class TestCpf:
    def test_identical_rates_alpha_one(self):
        out = cpf_bound(CpfInstance(3, 0.2, 0.2), 7, 3, 1.0, 1.0)
        # safe rounding costs ~n*(eps_round/2) of slack on the degenerate case
        assert out.value == pytest.approx(2.0 / 3.0, abs=5e-6)

    def test_zero_queries(self):
        out = cpf_bound(CpfInstance(4, 0.1, 0.3), 0, 0, 1.0, 1.0)
        assert out.value == pytest.approx(3.0 / 4.0, abs=1e-12)

    def test_constraint_checked(self):
        with pytest.raises(ValueError):
            cpf_bound(CpfInstance(3, 0.1, 0.11), 10, 4, 0.7, 0.95)

    def test_problem_construction(self):
        inst = CpfInstance(2, 0.1, 0.3)
        prob = cpf_problem(inst)
        assert len(prob.oracles) == 2
        assert prob.dim_in == 4
        # on |11><11| the two hypotheses swap the single-decay weights
        rho = DensityMatrix(basis_dm(4, 3))
        out0 = apply_channel(prob.channels[0], rho).matrix
        out1 = apply_channel(prob.channels[1], rho).matrix
        assert out0[0, 0].real == pytest.approx(0.3 * 0.1, abs=1e-12)
        assert out0[1, 1].real == pytest.approx(0.3 * 0.9, abs=1e-12)
        assert out1[1, 1].real == pytest.approx(0.1 * 0.7, abs=1e-12)

    def test_reference_channel(self):
        ref = cpf_reference(CpfInstance(2, 0.2, 0.5))
        assert ref.dim_in == 4
        rho = DensityMatrix(basis_dm(4, 3))
        out = apply_channel(ref, rho).matrix
        assert out[0, 0].real == pytest.approx(0.04, abs=1e-12)

    def test_positive_below_zero_query(self):
        # a useful working point: bound sits strictly between 0 and 2/3
        out = cpf_bound(CpfInstance(3, 0.10, 0.11), 15, 7, 0.99, 0.99 ** (8.0 / 7.0))
        assert 0.0 < out.value < 2.0 / 3.0

    def test_full_tensor_path_matches_reduction(self):
        # assembling the bound from the ell-qubit programs agrees with the
        # single-qubit reduction (desk scale)
        from chandis.bounds import theorem2_via_sdp

        inst = CpfInstance(2, 0.12, 0.2)
        n, k = 3, 1
        a0 = 0.95
        a1 = a0 ** ((n - k) / k)
        direct = theorem2_via_sdp(cpf_problem(inst), cpf_reference(inst), n, k, a0, a1)
        reduced = cpf_bound(inst, n, k, a0, a1)
        assert direct.value == pytest.approx(reduced.value, abs=2e-6)


class TestTwoAdc:
    def test_equal_rates(self):
        out = two_adc_bures_bound(TwoAdcInstance(0.4, 0.6, 0.3, 0.3), 5)
        assert out.value == pytest.approx(0.4, abs=1e-9)

    def test_anchor_n90(self):
        out = two_adc_bures_bound(TwoAdcInstance(0.5, 0.5, 0.10, 0.11), 90)
        assert out.value == pytest.approx(0.00262, abs=1e-4)

    def test_inapplicable_region(self):
        inst = TwoAdcInstance(0.5, 0.5, 0.0, 1.0)
        out = two_adc_bures_bound(inst, 2)
        assert not out.applicable and out.value == 0.0

    def test_sdp_route_agrees(self):
        out = two_adc_bures_bound(TwoAdcInstance(0.5, 0.5, 0.2, 0.4), 3, check_sdp=True)
        assert out.diagnostics["solver_status"] in ("optimal", "near_optimal")

    def test_tau_grid_small(self):
        for r0 in (0.05, 0.35, 0.65, 0.95):
            for r1 in (0.15, 0.55, 0.9):
                inst = TwoAdcInstance(0.5, 0.5, r0, r1)
                tau, _ = two_adc_tau_sdp(inst)
                assert tau == pytest.approx(bhattacharyya_angle(r0, r1), abs=1e-6)

    def test_trace_bound_equal_rates(self):
        out = two_adc_trace_bound(TwoAdcInstance(0.5, 0.5, 0.3, 0.3), 6, 3, 1.0, 1.0)
        assert out.value == pytest.approx(0.5, abs=5e-6)

    def test_one_query_exact_consistency(self):
        inst = TwoAdcInstance(0.5, 0.5, 0.10, 0.11)
        out = two_adc_trace_bound(inst, 1, 0, 1.0, 1.0)
        exact = 0.5 * (
            1.0
            - 0.5 * weighted_diamond_norm_sdp(adc_channel(0.10), adc_channel(0.11), 1.0).value
        )
        assert out.value <= exact + 1e-6
        assert out.value == pytest.approx(exact, abs=1e-6)

    def test_never_exceeds_min_prior_identical(self):
        inst = TwoAdcInstance(0.3, 0.7, 0.2, 0.2)
        out = two_adc_trace_bound(inst, 3, 1, 1.0, math.sqrt(3.0 / 7.0))
        assert out.value <= 0.3 + 1e-6

    def test_n90_ordering_vs_bures(self):
        inst = TwoAdcInstance(0.5, 0.5, 0.10, 0.11)
        t3 = two_adc_bures_bound(inst, 90)
        t4 = two_adc_trace_bound(inst, 90, 45, 0.99, 0.99)
        assert t4.value > t3.value


class TestReferenceChannelAngle:
    def test_theta_against_closed_form(self):
        # two-channel problem against the identity reference
        from chandis.bounds import DiscriminationProblem
        from chandis.qmat import KrausChannel

        prob = DiscriminationProblem.simple(
            [(0.5, adc_channel(0.1)), (0.5, adc_channel(0.3))]
        )
        theta, res = theta_bures_sdp(prob, KrausChannel.identity(2))
        assert res.status in ("optimal", "near_optimal")
        assert 0.0 <= theta <= math.pi / 2.0
        out = theorem1_bound(1, 0, theta, p_err_zero(prob))
        assert 0.0 <= out.value <= 0.5
