"""Randomized verification suites: oracle-vs-SDP sandwiches and property checks.

Each suite draws seeded random instances, measures the worst violation of
the property it guards, and reports pass/fail against its tolerance.  The
``verify`` CLI command and the acceptance tests both run these functions,
so loosening one loosens the other visibly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sdp as _sdp
from .bounds import (
    DiscriminationProblem,
    fuchs_vdg_generalized,
    theorem3_via_sdp,
    theorem4_via_sdp,
)
from .bruteforce import (
    SearchConfig,
    max_avg_weighted_trace_norm_search,
    max_weighted_trace_norm_search,
    min_avg_fidelity_search,
)
from .qmat import (
    DensityMatrix,
    apply_channel,
    bures_angle,
    bures_distance,
    fidelity,
    sine_distance,
    stinespring_from_kraus,
    trace_distance,
    trace_norm,
)
from .sampling import random_channel, random_density_matrix

DIRECTION_EPS = 1e-6


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    max_violation: float
    n_checks: int
    note: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (
            f"{tag} {self.name}: checks={self.n_checks} "
            f"max_violation={self.max_violation:.3e}"
            + (f" ({self.note})" if self.note else "")
        )


def _suite(name, violations, note=""):
    worst = max(violations) if violations else 0.0
    return SuiteResult(name, worst <= 0.0, worst, len(violations), note)


def sandwich_suite(seed: int = 0, instances: int = 25, tol: float = 5e-4, cfg: SearchConfig | None = None):
    """Search-vs-SDP agreement for all four programs on random qubit instances.

    Max-type programs must dominate their searches and min-type programs
    must lie below theirs (up to a tiny solver allowance); both must agree
    within ``tol``.  This is the primary guard against embedding or
    formulation bugs.
    """
    rng = np.random.default_rng(seed)
    base = cfg or SearchConfig()
    results = []

    viol = []
    for i in range(instances):
        ch0 = random_channel(rng, 2, n_kraus=int(rng.integers(1, 4)))
        ch1 = random_channel(rng, 2, n_kraus=int(rng.integers(1, 4)))
        sdp_val = _sdp.min_trace_norm_sdp(
            stinespring_from_kraus(ch0), stinespring_from_kraus(ch1)
        ).value
        search = min_avg_fidelity_search(
            [(1.0, ch0)], ch1, SearchConfig(base.restarts, base.steps, base.step_schedule, seed + i)
        )
        viol.append(max(sdp_val - search - DIRECTION_EPS, search - sdp_val - tol))
    results.append(_suite("sandwich/min_trace_norm", viol, f"tol={tol}"))

    viol = []
    for i in range(instances):
        priors = rng.dirichlet(np.ones(3))
        oracles = [(float(p), random_channel(rng, 2, n_kraus=2)) for p in priors]
        ref = random_channel(rng, 2, n_kraus=2)
        sdp_val = _sdp.min_avg_trace_norm_sdp(
            [(p, stinespring_from_kraus(ch)) for p, ch in oracles],
            stinespring_from_kraus(ref),
        ).value
        search = min_avg_fidelity_search(
            oracles, ref, SearchConfig(base.restarts, base.steps, base.step_schedule, seed + i)
        )
        viol.append(max(sdp_val - search - DIRECTION_EPS, search - sdp_val - tol))
    results.append(_suite("sandwich/min_avg_trace_norm", viol, f"tol={tol}"))

    viol = []
    for i in range(instances):
        ch0 = random_channel(rng, 2, n_kraus=int(rng.integers(1, 4)))
        ch1 = random_channel(rng, 2, n_kraus=int(rng.integers(1, 4)))
        alpha = float(rng.uniform(0.0, 1.5))
        sdp_val = _sdp.weighted_diamond_norm_sdp(ch0, ch1, alpha).value
        search = max_weighted_trace_norm_search(
            ch0, ch1, alpha, SearchConfig(base.restarts, base.steps, base.step_schedule, seed + i)
        )
        viol.append(max(search - sdp_val - DIRECTION_EPS, sdp_val - search - tol))
    results.append(_suite("sandwich/weighted_diamond", viol, f"tol={tol}"))

    viol = []
    for i in range(instances):
        priors = rng.dirichlet(np.ones(2))
        oracles = [(float(p), random_channel(rng, 2, n_kraus=2)) for p in priors]
        ref = random_channel(rng, 2, n_kraus=2)
        alpha = float(rng.uniform(0.0, 1.5))
        side = "oracle_minus_ref" if rng.integers(2) else "ref_minus_oracle"
        sdp_val = _sdp.avg_weighted_diamond_sdp(oracles, ref, alpha, side).value
        search = max_avg_weighted_trace_norm_search(
            oracles, ref, alpha, side,
            SearchConfig(base.restarts, base.steps, base.step_schedule, seed + i),
        )
        viol.append(max(search - sdp_val - DIRECTION_EPS, sdp_val - search - tol))
    results.append(_suite("sandwich/avg_weighted_diamond", viol, f"tol={tol}"))
    return results


def triangle_suite(seed: int = 0, triples: int = 500, tol: float = 1e-9):
    """Triangle inequalities for the Bures angle and its derived distances."""
    rng = np.random.default_rng(seed)
    viol_a, viol_b, viol_c = [], [], []
    for _ in range(triples):
        dim = int(rng.integers(2, 5))
        rho = random_density_matrix(rng, dim)
        sig = random_density_matrix(rng, dim)
        tau = random_density_matrix(rng, dim)
        viol_a.append(bures_angle(rho, sig) - bures_angle(rho, tau) - bures_angle(tau, sig) - tol)
        viol_b.append(
            bures_distance(rho, sig) - bures_distance(rho, tau) - bures_distance(tau, sig) - tol
        )
        # the sine-distance triangle inequality splits on whether the two
        # angles sum past the right angle
        viol_c.append(
            sine_distance(rho, sig) - sine_distance(rho, tau) - sine_distance(tau, sig) - tol
        )
    return [
        _suite("triangle/bures_angle", viol_a, f"tol={tol}"),
        _suite("triangle/bures_distance", viol_b, f"tol={tol}"),
        _suite("triangle/sine_distance", viol_c, f"tol={tol}"),
    ]


def fidelity_suite(seed: int = 0, count: int = 500, tol: float = 1e-9):
    """Joint concavity of fidelity, channel monotonicity, trace-norm floor."""
    rng = np.random.default_rng(seed)
    concavity, monotone, floor = [], [], []
    for _ in range(count):
        dim = int(rng.integers(2, 4))
        n_mix = int(rng.integers(2, 5))
        weights = rng.dirichlet(np.ones(n_mix))
        rhos = [random_density_matrix(rng, dim) for _ in range(n_mix)]
        sigs = [random_density_matrix(rng, dim) for _ in range(n_mix)]
        mix_r = DensityMatrix(sum(w * r.matrix for w, r in zip(weights, rhos)))
        mix_s = DensityMatrix(sum(w * s.matrix for w, s in zip(weights, sigs)))
        avg_f = sum(w * fidelity(r, s) for w, r, s in zip(weights, rhos, sigs))
        concavity.append(avg_f - fidelity(mix_r, mix_s) - tol)

        ch = random_channel(rng, dim, n_kraus=2)
        rho, sig = rhos[0], sigs[0]
        out_r, out_s = apply_channel(ch, rho), apply_channel(ch, sig)
        monotone.append(trace_distance(out_r, out_s) - trace_distance(rho, sig) - tol)
        monotone.append(fidelity(rho, sig) - fidelity(out_r, out_s) - tol)

        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        floor.append(abs(np.trace(g)) - trace_norm(g) - tol)
    return [
        _suite("fidelity/joint_concavity", concavity, f"tol={tol}"),
        _suite("fidelity/monotonicity", monotone, f"tol={tol}"),
        _suite("fidelity/trace_norm_floor", floor, f"tol={tol}"),
    ]


def fuchs_suite(seed: int = 0, count: int = 500, tol: float = 1e-9):
    """Generalized Fuchs-van de Graaf upper bound on weighted trace norms."""
    rng = np.random.default_rng(seed)
    viol = []
    for _ in range(count):
        dim = int(rng.integers(2, 4))
        a0, a1 = rng.uniform(0.0, 2.0, size=2)
        rho0 = random_density_matrix(rng, dim)
        rho1 = random_density_matrix(rng, dim)
        lhs = trace_norm(a0 * rho0.matrix - a1 * rho1.matrix)
        viol.append(lhs - fuchs_vdg_generalized(a0, a1, rho0, rho1) - tol)
    return [_suite("fuchs_vdg/weighted_upper_bound", viol, f"tol={tol}")]


def oneshot_suite(seed: int = 0, count: int = 50, tol: float = 1e-6):
    """Theorem 3/4 at n=1 never exceed the exact one-query error."""
    rng = np.random.default_rng(seed)
    viol = []
    for _ in range(count):
        p0 = float(rng.uniform(0.2, 0.8))
        ch0 = random_channel(rng, 2, n_kraus=2)
        ch1 = random_channel(rng, 2, n_kraus=2)
        prob = DiscriminationProblem.simple([(p0, ch0), (1.0 - p0, ch1)])
        exact = 0.5 * (
            1.0 - p0 * _sdp.weighted_diamond_norm_sdp(ch0, ch1, (1.0 - p0) / p0).value
        )
        viol.append(theorem3_via_sdp(prob, 1).value - exact - tol)
        for k in (0, 1):
            if k == 0:
                a0, a1 = 1.0, p0 / (1.0 - p0)
            else:
                a0, a1 = (1.0 - p0) / p0, 1.0
            viol.append(theorem4_via_sdp(prob, 1, k, a0, a1).value - exact - tol)
    return [_suite("oneshot/prop2_consistency", viol, f"tol={tol}")]


SUITES = {
    "sandwich": sandwich_suite,
    "triangle": triangle_suite,
    "fidelity": fidelity_suite,
    "fuchs": fuchs_suite,
    "oneshot": oneshot_suite,
}


def run_suites(names, seed: int = 0, **overrides):
    """Run the named suites (or all) and return the SuiteResult list."""
    selected = list(SUITES) if "all" in names else list(names)
    results = []
    for name in selected:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
        results.extend(SUITES[name](seed=seed, **overrides.get(name, {})))
    return results
