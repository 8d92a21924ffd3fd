"""Lower bounds on the adaptive discrimination error probability.

The four theorem evaluators are pure scalar functions of precomputed
angle/deviation quantities; companion ``*_via_sdp`` helpers obtain those
quantities from the conic programs in :mod:`chandis.sdp` using their
safe-rounded values, so solver error cannot invalidate a claimed bound.

Every evaluator returns a :class:`BoundResult`.  When a theorem's
applicability condition fails the result is the trivial bound 0 with
``applicable=False`` rather than an exception, so parameter sweeps never
abort.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import sdp as _sdp
from .qmat import (
    DensityMatrix,
    KrausChannel,
    as_complex_matrix,
    dagger,
    fidelity,
    stinespring_from_kraus,
    TOL_CPTP,
)

HALF_PI = math.pi / 2.0
_EDGE_EPS = 1e-12
_CONSTRAINT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DiscriminationProblem:
    """Channels with priors plus answer groups (a group discrimination instance).

    ``groups`` lists index subsets; they may overlap and need not cover all
    channel indexes.  Plain discrimination is the special case of singleton
    groups, see :meth:`simple`.
    """

    oracles: tuple
    groups: tuple

    def __post_init__(self):
        oracles = tuple((float(p), ch) for p, ch in self.oracles)
        if not oracles:
            raise ValueError("problem needs at least one channel")
        priors = np.array([p for p, _ in oracles])
        if (priors < -1e-15).any() or abs(priors.sum() - 1.0) > 1e-12:
            raise ValueError("priors must be nonnegative and sum to 1")
        d_in = oracles[0][1].dim_in
        d_out = oracles[0][1].dim_out
        for _, ch in oracles:
            if ch.dim_in != d_in or ch.dim_out != d_out:
                raise ValueError("all channels must share input/output dimensions")
        groups = tuple(tuple(int(i) for i in g) for g in self.groups)
        for g in groups:
            for i in g:
                if not 0 <= i < len(oracles):
                    raise ValueError(f"group index {i} out of range")
        object.__setattr__(self, "oracles", oracles)
        object.__setattr__(self, "groups", groups)

    @staticmethod
    def simple(oracles) -> "DiscriminationProblem":
        """Plain discrimination: one singleton group per channel."""
        oracles = tuple(oracles)
        return DiscriminationProblem(oracles, tuple((i,) for i in range(len(oracles))))

    @property
    def priors(self):
        return [p for p, _ in self.oracles]

    @property
    def channels(self):
        return [ch for _, ch in self.oracles]

    @property
    def dim_in(self) -> int:
        return self.oracles[0][1].dim_in


@dataclass(frozen=True)
class BoundResult:
    """A lower-bound value with full provenance.

    ``applicable=False`` means the theorem's side condition failed; the
    reported value is then the trivial bound 0, never a wrong positive
    claim.
    """

    value: float
    theorem: str
    params: dict = field(default_factory=dict)
    applicable: bool = True
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.applicable and self.value != 0.0:
            raise ValueError("inapplicable bounds must report the trivial value 0")
        if not -1e-12 <= self.value <= 1.0 + 1e-12:
            raise ValueError(f"bound value {self.value} outside [0, 1]")


@dataclass(frozen=True)
class AngleQuantities:
    """Container for the angle/deviation quantities feeding the theorems."""

    theta_A: float | None = None
    theta_d0: float | None = None
    theta_d1: float | None = None
    tau_A: float | None = None
    tau_d0: float | None = None
    tau_d1: float | None = None
    theta_m: float | None = None

    def __post_init__(self):
        for name in ("theta_A", "tau_A", "theta_m"):
            v = getattr(self, name)
            if v is not None and not -1e-12 <= v <= HALF_PI + 1e-9:
                raise ValueError(f"{name}={v} outside [0, pi/2]")
        for name in ("theta_d0", "theta_d1", "tau_d0", "tau_d1"):
            v = getattr(self, name)
            if v is not None and v < -1e-12:
                raise ValueError(f"{name}={v} must be nonnegative")


def p_err_zero(prob: DiscriminationProblem) -> float:
    """Exact zero-query error: the minimum over groups of excluded prior mass."""
    if not prob.groups:
        return 1.0
    priors = prob.priors
    best = 1.0
    for g in prob.groups:
        inside = set(g)
        best = min(best, sum(p for i, p in enumerate(priors) if i not in inside))
    return max(best, 0.0)


def _coupling_close(lhs: float, rhs: float) -> bool:
    # scale-aware: the sides grow like alpha^k, so a fixed absolute
    # tolerance would be unmeetable at large k
    if math.isfinite(lhs) and math.isfinite(rhs):
        return abs(lhs - rhs) <= _CONSTRAINT_TOL * max(1.0, abs(lhs), abs(rhs))
    raise ValueError("weight powers overflow float range; rescale alpha")


def geometric_sum(alpha: float, terms: int) -> float:
    """sum_{i=0}^{terms-1} alpha^i, stable near alpha = 1."""
    if terms < 0:
        raise ValueError("negative term count")
    if terms == 0:
        return 0.0
    if alpha < 0:
        raise ValueError("negative weight")
    d = alpha - 1.0
    if abs(d) < 1e-9:
        # series in d avoids the 0/0 cancellation of the closed form
        return terms * (1.0 + 0.5 * (terms - 1) * d)
    return float((alpha**terms - 1.0) / d)


def _cos_sq(angle: float) -> float:
    # cos^2 with an exact zero at (and beyond) the right angle, so boundary
    # points of the applicability window report a clean 0
    if angle >= HALF_PI:
        return 0.0
    return math.cos(angle) ** 2


def theorem1_bound(n: int, m: int, theta_A: float, p_err_m_lb: float) -> BoundResult:
    """Bures-angle group bound cos^2((n-m) theta_A + theta_m).

    ``p_err_m_lb`` must be a valid lower bound on the m-query error;
    substituting a lower bound only grows theta_m and shrinks the cos^2,
    so validity is preserved.  Outside the window
    (n-m) theta_A + theta_m <= pi/2 the trivial bound is returned.
    """
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    if not -1e-12 <= theta_A <= HALF_PI + 1e-9:
        raise ValueError(f"theta_A={theta_A} outside [0, pi/2]")
    p_lb = min(max(p_err_m_lb, 0.0), 1.0)
    theta_m = math.acos(math.sqrt(p_lb))
    total = (n - m) * theta_A + theta_m
    params = {"m": m, "theta_A": theta_A, "theta_m": theta_m, "n": n}
    if total > HALF_PI + _EDGE_EPS:
        return BoundResult(0.0, "T1", params, applicable=False)
    return BoundResult(_cos_sq(total), "T1", params)


def theorem2_bound(
    n: int,
    m: int,
    k: int,
    alpha0: float,
    alpha1: float,
    theta_d0: float,
    theta_d1: float,
    p_err_m_lb: float,
) -> BoundResult:
    """Weighted trace-distance group bound.

    Requires alpha0^(n-k) = alpha1^(k-m); the two geometric sums are
    evaluated in closed form with a series fallback near weight 1.  As
    with the angle bound, ``p_err_m_lb`` may be any certified lower bound
    on the m-query error: substituting a lower bound only shrinks the
    result, so validity is preserved.
    """
    if not 0 <= m <= k <= n:
        raise ValueError(f"need 0 <= m <= k <= n, got m={m}, k={k}, n={n}")
    if alpha0 < 0 or alpha1 < 0:
        raise ValueError("weights must be nonnegative")
    if not _coupling_close(alpha0 ** (n - k), alpha1 ** (k - m)):
        raise ValueError(
            f"constraint alpha0^(n-k) = alpha1^(k-m) violated: "
            f"{alpha0 ** (n - k)} vs {alpha1 ** (k - m)}"
        )
    s0 = geometric_sum(alpha0, n - k)
    s1 = geometric_sum(alpha1, k - m)
    value = max(0.0, min(p_err_m_lb, 1.0) - s0 * theta_d0 - s1 * theta_d1)
    params = {"m": m, "k": k, "alpha0": alpha0, "alpha1": alpha1, "n": n}
    return BoundResult(value, "T2", params)


def theorem3_bound(n: int, p0: float, p1: float, tau_A: float) -> BoundResult:
    """Two-channel Bures-angle bound (1/2)(1 - sqrt(1 - 4 p0 p1 cos^2(n tau_A)))."""
    if abs(p0 + p1 - 1.0) > 1e-12 or p0 < 0 or p1 < 0:
        raise ValueError("priors must be nonnegative and sum to 1")
    if not -1e-12 <= tau_A <= HALF_PI + 1e-9:
        raise ValueError(f"tau_A={tau_A} outside [0, pi/2]")
    params = {"tau_A": tau_A, "n": n, "p0": p0, "p1": p1}
    total = n * tau_A
    if total > HALF_PI + _EDGE_EPS:
        return BoundResult(0.0, "T3", params, applicable=False)
    inner = max(1.0 - 4.0 * p0 * p1 * _cos_sq(total), 0.0)
    return BoundResult(0.5 * (1.0 - math.sqrt(inner)), "T3", params)


def theorem4_bound(
    n: int,
    k: int,
    p0: float,
    p1: float,
    alpha0: float,
    alpha1: float,
    tau_d0: float,
    tau_d1: float,
) -> BoundResult:
    """Two-channel weighted trace-distance bound.

    Requires p0 alpha0^k = p1 alpha1^(n-k); tau_d0/tau_d1 are the full
    weighted diamond norms ||O0 - a0 O1||, ||a1 O0 - O1||.
    """
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    if abs(p0 + p1 - 1.0) > 1e-12 or p0 < 0 or p1 < 0:
        raise ValueError("priors must be nonnegative and sum to 1")
    if alpha0 < 0 or alpha1 < 0:
        raise ValueError("weights must be nonnegative")
    if not _coupling_close(p0 * alpha0**k, p1 * alpha1 ** (n - k)):
        raise ValueError(
            f"constraint p0 a0^k = p1 a1^(n-k) violated: "
            f"{p0 * alpha0 ** k} vs {p1 * alpha1 ** (n - k)}"
        )
    s0 = geometric_sum(alpha0, k)
    s1 = geometric_sum(alpha1, n - k)
    value = max(0.0, 0.5 * (1.0 - p0 * s0 * tau_d0 - p1 * s1 * tau_d1))
    params = {"k": k, "alpha0": alpha0, "alpha1": alpha1, "n": n, "p0": p0, "p1": p1}
    return BoundResult(value, "T4", params)


def fuchs_vdg_generalized(
    a0: float, a1: float, rho0: DensityMatrix, rho1: DensityMatrix
) -> float:
    """Upper bound sqrt((a0+a1)^2 - 4 a0 a1 F^2) on ||a0 rho0 - a1 rho1||_1."""
    if a0 < 0 or a1 < 0:
        raise ValueError("weights must be nonnegative")
    f = fidelity(rho0, rho1)
    inner = (a0 + a1) ** 2 - 4.0 * a0 * a1 * f * f
    return math.sqrt(max(inner, 0.0))


def covering_angle(phases) -> float:
    """Min over references of the max nonnegative phase offset, in radians.

    Implements the min-max over arg_{>=0}(exp(i(theta_l - theta_k)));
    invariant under a global shift of all phases, and can exceed pi.
    """
    ph = np.asarray(list(phases), dtype=float)
    if ph.size == 0:
        raise ValueError("need at least one phase")
    diffs = np.mod(ph[None, :] - ph[:, None], 2.0 * math.pi)
    return float(diffs.max(axis=1).min())


def unitary_exact_error(n: int, p0: float, p1: float, u0, u1) -> BoundResult:
    """Exact discrimination error for two unitary channels.

    The covering angle of the eigenphases of U0^dag U1 plays the role of
    twice the Bures-angle quantity; within the window n*cover/2 <= pi/2
    the bound is attained by a non-adaptive strategy, so the value is
    exact.
    """
    if abs(p0 + p1 - 1.0) > 1e-12 or p0 < 0 or p1 < 0:
        raise ValueError("priors must be nonnegative and sum to 1")
    u0 = as_complex_matrix(u0)
    u1 = as_complex_matrix(u1)
    for u in (u0, u1):
        if u.shape[0] != u.shape[1] or np.abs(dagger(u) @ u - np.eye(u.shape[0])).max() > TOL_CPTP:
            raise ValueError("inputs must be unitary matrices")
    if u0.shape != u1.shape:
        raise ValueError("unitaries must share a dimension")
    eigs = np.linalg.eigvals(dagger(u0) @ u1)
    cover = covering_angle(np.mod(np.angle(eigs), 2.0 * math.pi))
    params = {"theta_cover": cover, "n": n, "p0": p0, "p1": p1}
    total = n * cover / 2.0
    if total > HALF_PI + _EDGE_EPS:
        return BoundResult(0.0, "C1", params, applicable=False)
    inner = max(1.0 - 4.0 * p0 * p1 * _cos_sq(total), 0.0)
    return BoundResult(0.5 * (1.0 - math.sqrt(inner)), "C1", params)


# -- SDP-backed convenience layers -------------------------------------------


def tau_bures_sdp(ch0: KrausChannel, ch1: KrausChannel, tol: float = _sdp.TOL_SDP):
    """Bures-angle quantity of a channel pair from the trace-norm program.

    Returns (tau_A, program_result); the angle uses the safe-rounded value
    so it upper-bounds the true angle quantity.
    """
    res = _sdp.min_trace_norm_sdp(
        stinespring_from_kraus(ch0), stinespring_from_kraus(ch1), tol=tol
    )
    return math.acos(min(max(res.safe_value, 0.0), 1.0)), res


def theta_bures_sdp(prob: DiscriminationProblem, ref: KrausChannel, tol: float = _sdp.TOL_SDP):
    """Averaged Bures-angle quantity against a reference channel."""
    v = stinespring_from_kraus(ref)
    oracles = [(p, stinespring_from_kraus(ch)) for p, ch in prob.oracles]
    res = _sdp.min_avg_trace_norm_sdp(oracles, v, tol=tol)
    return math.acos(min(max(res.safe_value, 0.0), 1.0)), res


def theorem3_via_sdp(prob: DiscriminationProblem, n: int, tol: float = _sdp.TOL_SDP) -> BoundResult:
    """Theorem-3 bound for a two-channel problem, angle from the SDP."""
    if len(prob.oracles) != 2:
        raise ValueError("theorem 3 needs exactly two channels")
    (p0, ch0), (p1, ch1) = prob.oracles
    tau, res = tau_bures_sdp(ch0, ch1, tol=tol)
    out = theorem3_bound(n, p0, p1, tau)
    out.diagnostics["solver_status"] = res.status
    return out


def theorem4_via_sdp(
    prob: DiscriminationProblem,
    n: int,
    k: int,
    alpha0: float,
    alpha1: float,
    tol: float = _sdp.TOL_SDP,
) -> BoundResult:
    """Theorem-4 bound for a two-channel problem, norms from the SDPs."""
    if len(prob.oracles) != 2:
        raise ValueError("theorem 4 needs exactly two channels")
    (p0, ch0), (p1, ch1) = prob.oracles
    statuses = {}
    tau0 = tau1 = 0.0
    if k > 0:
        r0 = _sdp.weighted_diamond_norm_sdp(ch0, ch1, alpha0, tol=tol)
        tau0 = r0.safe_value
        statuses["tau_d0"] = r0.status
    if n - k > 0:
        r1 = _sdp.weighted_diamond_norm_sdp(ch1, ch0, alpha1, tol=tol)
        tau1 = r1.safe_value
        statuses["tau_d1"] = r1.status
    out = theorem4_bound(n, k, p0, p1, alpha0, alpha1, tau0, tau1)
    out.diagnostics.update(statuses)
    return out


def theorem1_via_sdp(
    prob: DiscriminationProblem,
    ref: KrausChannel,
    n: int,
    m: int = 0,
    p_err_m_lb: float | None = None,
    tol: float = _sdp.TOL_SDP,
) -> BoundResult:
    """Theorem-1 bound with theta_A from the averaged trace-norm program.

    With m=0 (the default) the exact zero-query error is used; callers may
    supply any certified lower bound on p_err(m) for m > 0.
    """
    if p_err_m_lb is None:
        if m != 0:
            raise ValueError("p_err_m_lb is required for m > 0")
        p_err_m_lb = p_err_zero(prob)
    theta, res = theta_bures_sdp(prob, ref, tol=tol)
    out = theorem1_bound(n, m, theta, p_err_m_lb)
    out.diagnostics["solver_status"] = res.status
    return out


def theorem2_via_sdp(
    prob: DiscriminationProblem,
    ref: KrausChannel,
    n: int,
    k: int,
    alpha0: float,
    alpha1: float,
    m: int = 0,
    p_err_m_lb: float | None = None,
    tol: float = _sdp.TOL_SDP,
) -> BoundResult:
    """Theorem-2 bound with the theta quantities from the averaged programs."""
    if p_err_m_lb is None:
        if m != 0:
            raise ValueError("p_err_m_lb is required for m > 0")
        p_err_m_lb = p_err_zero(prob)
    statuses = {}
    th0 = th1 = 0.0
    if n - k > 0:
        r0 = _sdp.avg_weighted_diamond_sdp(prob.oracles, ref, alpha0, "oracle_minus_ref", tol=tol)
        th0 = r0.safe_value
        statuses["theta_d0"] = r0.status
    if k - m > 0:
        r1 = _sdp.avg_weighted_diamond_sdp(prob.oracles, ref, alpha1, "ref_minus_oracle", tol=tol)
        th1 = r1.safe_value
        statuses["theta_d1"] = r1.status
    out = theorem2_bound(n, m, k, alpha0, alpha1, th0, th1, p_err_m_lb)
    out.diagnostics.update(statuses)
    return out
