import math
import warnings

import numpy as np
import pytest

from chandis.applications import CpfInstance, TwoAdcInstance, cpf_bound, two_adc_trace_bound
from chandis.optimize import (
    _theorem2_parameterization,
    _theorem4_parameterization,
    golden_section_max,
    optimize_theorem2,
    optimize_theorem4,
)


class TestGoldenSection:
    def test_parabola(self):
        x, fx = golden_section_max(lambda x: -((x - 0.3) ** 2), 0.0, 1.0, tol=1e-6)
        assert x == pytest.approx(0.3, abs=1e-5)
        assert fx == pytest.approx(0.0, abs=1e-9)

    def test_monotone_reaches_endpoint(self):
        x, _ = golden_section_max(lambda x: x, 0.0, 1.0, tol=1e-6)
        assert x == pytest.approx(1.0, abs=1e-5)

    def test_returns_evaluated_point(self):
        seen = {}

        def f(x):
            y = -((x - 0.62) ** 2)
            seen[x] = y
            return y

        x, fx = golden_section_max(f, 0.0, 1.0, tol=1e-7)
        assert seen[x] == fx

    def test_non_finite_aborts(self):
        with pytest.raises(ValueError):
            golden_section_max(lambda x: float("nan"), 0.0, 1.0)

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            golden_section_max(lambda x: x, 1.0, 0.0)


class TestParameterizations:
    def test_theorem4_forced_edges(self):
        kind, a0, a1 = _theorem4_parameterization(0.5, 0.5, 4, 0)
        assert kind == "forced" and a1 == pytest.approx(1.0)
        kind, a0, a1 = _theorem4_parameterization(0.5, 0.5, 4, 4)
        assert kind == "forced" and a0 == pytest.approx(1.0)

    def test_theorem4_free_satisfies_constraint(self):
        p0, p1, n, k = 0.3, 0.7, 8, 3
        kind, a1_of = _theorem4_parameterization(p0, p1, n, k)
        assert kind == "free"
        for a0 in (0.2, 0.9, 1.7):
            a1 = a1_of(a0)
            assert p0 * a0**k == pytest.approx(p1 * a1 ** (n - k), rel=1e-10)

    def test_theorem4_n0_needs_equal_priors(self):
        assert _theorem4_parameterization(0.5, 0.5, 0, 0) == ("forced", 1.0, 1.0)
        assert _theorem4_parameterization(0.4, 0.6, 0, 0) is None

    def test_theorem2_edges_forced_to_one(self):
        assert _theorem2_parameterization(5, 0) == ("forced", 1.0, 1.0)
        assert _theorem2_parameterization(5, 5) == ("forced", 1.0, 1.0)

    def test_theorem2_free_satisfies_constraint(self):
        kind, a1_of = _theorem2_parameterization(9, 4)
        assert kind == "free"
        for a0 in (0.5, 0.95, 1.4):
            a1 = a1_of(a0)
            assert a0 ** (9 - 4) == pytest.approx(a1**4, rel=1e-10)


class TestOptimizeTheorem4:
    def test_zero_queries_uniform(self):
        rep = optimize_theorem4(TwoAdcInstance(0.5, 0.5, 0.1, 0.3), 0)
        assert rep.best_value == pytest.approx(0.5)
        assert rep.best_params[0] == 0

    def test_identical_channels(self):
        rep = optimize_theorem4(TwoAdcInstance(0.5, 0.5, 0.25, 0.25), 4)
        assert rep.best_value == pytest.approx(0.5, abs=1e-6)

    def test_report_value_reproducible(self):
        inst = TwoAdcInstance(0.5, 0.5, 0.1, 0.2)
        rep = optimize_theorem4(inst, 5)
        k, a0, a1 = rep.best_params
        again = two_adc_trace_bound(inst, 5, k, a0, a1)
        assert again.value == pytest.approx(rep.best_value, abs=1e-9)

    def test_optimized_beats_default(self):
        inst = TwoAdcInstance(0.5, 0.5, 0.10, 0.11)
        n = 8
        rep = optimize_theorem4(inst, n)
        default = two_adc_trace_bound(inst, n, n // 2, 1.0, 1.0)
        assert rep.best_value >= default.value - 1e-9

    def test_matches_grid_search(self):
        # full 2-D scan oracle at desk scale
        inst = TwoAdcInstance(0.5, 0.5, 0.15, 0.25)
        n = 6
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rep = optimize_theorem4(inst, n)
        best_grid = -1.0
        for k in range(n + 1):
            mode = _theorem4_parameterization(0.5, 0.5, n, k)
            if mode is None:
                continue
            if mode[0] == "forced":
                best_grid = max(best_grid, two_adc_trace_bound(inst, n, k, mode[1], mode[2]).value)
                continue
            for a0 in np.linspace(1e-6, 2.0, 200):
                a1 = mode[1](a0)
                best_grid = max(best_grid, two_adc_trace_bound(inst, n, k, a0, a1).value)
        assert rep.best_value >= best_grid - 1e-4

    def test_deterministic(self):
        inst = TwoAdcInstance(0.5, 0.5, 0.1, 0.2)
        a = optimize_theorem4(inst, 4)
        b = optimize_theorem4(inst, 4)
        assert a.best_value == b.best_value
        assert a.best_params == b.best_params
        assert a.evaluations == b.evaluations

    def test_trace_recording(self):
        rep = optimize_theorem4(TwoAdcInstance(0.5, 0.5, 0.1, 0.2), 2, keep_trace=True)
        assert rep.trace and len(rep.trace) == rep.evaluations

    def test_unequal_priors_n0_infeasible(self):
        rep = optimize_theorem4(TwoAdcInstance(0.3, 0.7, 0.1, 0.2), 0)
        assert rep.best_value == 0.0
        assert rep.bound is not None and not rep.bound.applicable

    def test_monotone_in_queries(self):
        inst = TwoAdcInstance(0.5, 0.5, 0.1, 0.2)
        vals = [optimize_theorem4(inst, n).best_value for n in range(0, 5)]
        assert all(a >= b - 1e-9 for a, b in zip(vals, vals[1:]))


class TestOptimizeTheorem2:
    def test_zero_queries(self):
        rep = optimize_theorem2(CpfInstance(3, 0.1, 0.3), None, 0)
        assert rep.best_value == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_oracles_equal_reference(self):
        rep = optimize_theorem2(CpfInstance(4, 0.2, 0.2), None, 5)
        assert rep.best_value == pytest.approx(3.0 / 4.0, abs=1e-5)

    def test_report_value_reproducible(self):
        inst = CpfInstance(3, 0.10, 0.11)
        rep = optimize_theorem2(inst, None, 6)
        k, a0, a1 = rep.best_params
        again = cpf_bound(inst, 6, k, a0, a1)
        assert again.value == pytest.approx(rep.best_value, abs=1e-9)

    def test_warm_start_agrees_with_full_scan(self):
        inst = CpfInstance(3, 0.10, 0.11)
        full = optimize_theorem2(inst, None, 7)
        warm = optimize_theorem2(inst, None, 7, k_start=full.best_params[0], patience=3)
        assert warm.best_value == pytest.approx(full.best_value, abs=1e-9)
