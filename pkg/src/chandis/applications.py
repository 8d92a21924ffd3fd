"""The three worked problem families and their specialized bounds.

* Grover search viewed as oracle-group discrimination, with the exact
  closed-form lower bound and the matching algorithm success probability.
* Channel position finding (CPF) over amplitude damping channels, whose
  group bound reduces to single-qubit weighted diamond norms by
  multiplicativity.
* Discrimination of two amplitude damping channels, via the Bhattacharyya
  angle and via weighted diamond norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import sdp as _sdp
from .bounds import (
    BoundResult,
    DiscriminationProblem,
    theorem1_bound,
    theorem2_bound,
    theorem3_bound,
    theorem4_bound,
)
from .qmat import KrausChannel, channel_tensor, stinespring_from_kraus

HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class GroverInstance:
    """Search over N elements with exactly k marked, k <= N/2."""

    N: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.N // 2:
            raise ValueError(f"need 1 <= k <= N/2, got N={self.N}, k={self.k}")

    @property
    def root_angle(self) -> float:
        """arcsin sqrt(k/N), the basic rotation half-angle."""
        return math.asin(math.sqrt(self.k / self.N))


@dataclass(frozen=True)
class CpfInstance:
    """Position finding: one slot of ell carries rate r1, the rest r0."""

    ell: int
    r0: float
    r1: float

    def __post_init__(self):
        if self.ell < 2:
            raise ValueError("need at least two slots")
        if not (0.0 <= self.r0 <= 1.0 and 0.0 <= self.r1 <= 1.0):
            raise ValueError("damping rates must lie in [0, 1]")


@dataclass(frozen=True)
class TwoAdcInstance:
    """Two amplitude damping channels with priors (p0, p1)."""

    p0: float
    p1: float
    r0: float
    r1: float

    def __post_init__(self):
        if abs(self.p0 + self.p1 - 1.0) > 1e-12 or self.p0 < 0 or self.p1 < 0:
            raise ValueError("priors must be nonnegative and sum to 1")
        if not (0.0 <= self.r0 <= 1.0 and 0.0 <= self.r1 <= 1.0):
            raise ValueError("damping rates must lie in [0, 1]")


def adc_channel(r: float) -> KrausChannel:
    """Amplitude damping channel with decay probability r from |1> to |0>."""
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"damping rate {r} outside [0, 1]")
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - r)]], dtype=np.complex128)
    k1 = np.array([[0.0, math.sqrt(r)], [0.0, 0.0]], dtype=np.complex128)
    return KrausChannel((k0, k1))


def bhattacharyya_angle(r0: float, r1: float) -> float:
    """arccos(sqrt(r0 r1) + sqrt((1-r0)(1-r1))), the ADC Bures-angle quantity."""
    if not (0.0 <= r0 <= 1.0 and 0.0 <= r1 <= 1.0):
        raise ValueError("damping rates must lie in [0, 1]")
    c = math.sqrt(r0 * r1) + math.sqrt((1.0 - r0) * (1.0 - r1))
    return math.acos(min(max(c, 0.0), 1.0))


# -- Grover ------------------------------------------------------------------


def grover_bound(inst: GroverInstance, n: int) -> BoundResult:
    """Lower bound cos^2((2n+1) arcsin sqrt(k/N)) on the n-query error.

    Composes the Bures-angle group bound with the closed-form angle
    2 arcsin sqrt(k/N) (an upper bound on the true angle quantity, which
    keeps the bound valid) and the exact zero-query error 1 - k/N.
    """
    theta = 2.0 * inst.root_angle
    out = theorem1_bound(n, 0, theta, 1.0 - inst.k / inst.N)
    out.params.update({"N": inst.N, "k_marked": inst.k})
    return out


def grover_success(inst: GroverInstance, n: int) -> float:
    """Exact success probability sin^2((2n+1) arcsin sqrt(k/N)) of the algorithm."""
    total = (2 * n + 1) * inst.root_angle
    if total > HALF_PI + 1e-12:
        raise ValueError(
            f"(2n+1) arcsin sqrt(k/N) = {total:.6f} exceeds pi/2; "
            "the closed form does not apply"
        )
    return math.sin(min(total, HALF_PI)) ** 2


def grover_oracle_unitary(n_elements: int, marked) -> np.ndarray:
    """Phase oracle I - 2 sum_{u in marked} |u><u|."""
    u = np.eye(n_elements, dtype=np.complex128)
    for idx in marked:
        u[idx, idx] = -1.0
    return u


def grover_problem(inst: GroverInstance) -> DiscriminationProblem:
    """Explicit oracle-group instance (for small-N SDP cross-checks).

    Channels are the phase oracles over all k-subsets with uniform prior;
    the answer group of element u collects the subsets containing u.
    """
    subsets = list(combinations(range(inst.N), inst.k))
    p = 1.0 / len(subsets)
    oracles = tuple(
        (p, KrausChannel.from_unitary(grover_oracle_unitary(inst.N, s))) for s in subsets
    )
    groups = tuple(
        tuple(i for i, s in enumerate(subsets) if u in s) for u in range(inst.N)
    )
    return DiscriminationProblem(oracles, groups)


# -- channel position finding -------------------------------------------------


def cpf_reference(inst: CpfInstance) -> KrausChannel:
    """The all-slots-quiet reference channel, rate r0 on every slot."""
    ch = adc_channel(inst.r0)
    out = ch
    for _ in range(inst.ell - 1):
        out = channel_tensor(out, ch)
    return out


def cpf_problem(inst: CpfInstance) -> DiscriminationProblem:
    """Explicit ell-qubit instance (test scale only; bounds use the reduction)."""
    quiet = adc_channel(inst.r0)
    loud = adc_channel(inst.r1)
    channels = []
    for pos in range(inst.ell):
        ch = loud if pos == 0 else quiet
        for slot in range(1, inst.ell):
            ch = channel_tensor(ch, loud if pos == slot else quiet)
        channels.append(ch)
    p = 1.0 / inst.ell
    return DiscriminationProblem.simple(tuple((p, ch) for ch in channels))


def cpf_bound(inst: CpfInstance, n: int, k: int, alpha0: float, alpha1: float) -> BoundResult:
    """Group bound for CPF via the single-qubit reduction.

    The theta quantities of the ell-fold problem against the all-quiet
    reference factor through the multiplicativity of the diamond norm, so
    only two single-qubit weighted diamond norms are solved regardless of
    ell; p_err(0) = 1 - 1/ell.
    """
    quiet = adc_channel(inst.r0)
    loud = adc_channel(inst.r1)
    statuses = {}
    th0 = th1 = 0.0
    if n - k > 0:
        r0 = _sdp.weighted_diamond_norm_sdp(loud, quiet, alpha0)
        th0 = 0.5 * r0.safe_value
        statuses["theta_d0"] = r0.status
    if k > 0:
        r1 = _sdp.weighted_diamond_norm_sdp(quiet, loud, alpha1)
        th1 = 0.5 * r1.safe_value
        statuses["theta_d1"] = r1.status
    out = theorem2_bound(n, 0, k, alpha0, alpha1, th0, th1, 1.0 - 1.0 / inst.ell)
    out.params.update({"ell": inst.ell, "r0": inst.r0, "r1": inst.r1})
    out.diagnostics.update(statuses)
    return out


# -- two amplitude damping channels --------------------------------------------


def two_adc_tau_sdp(inst: TwoAdcInstance, tol: float = _sdp.TOL_SDP):
    """The pair's Bures-angle quantity from the trace-norm SDP."""
    v0 = stinespring_from_kraus(adc_channel(inst.r0))
    v1 = stinespring_from_kraus(adc_channel(inst.r1))
    res = _sdp.min_trace_norm_sdp(v0, v1, tol=tol)
    return math.acos(min(max(res.value, 0.0), 1.0)), res


def two_adc_bures_bound(inst: TwoAdcInstance, n: int, check_sdp: bool = False) -> BoundResult:
    """Bures-angle bound with the closed-form Bhattacharyya angle.

    With ``check_sdp`` the angle is recomputed through the SDP route and
    the two must agree within 1e-6.
    """
    delta = bhattacharyya_angle(inst.r0, inst.r1)
    out = theorem3_bound(n, inst.p0, inst.p1, delta)
    out.params.update({"r0": inst.r0, "r1": inst.r1})
    if check_sdp:
        tau, res = two_adc_tau_sdp(inst)
        if abs(tau - delta) > 1e-6:
            raise RuntimeError(
                f"SDP angle {tau} disagrees with the closed form {delta}"
            )
        out.diagnostics["tau_sdp"] = tau
        out.diagnostics["solver_status"] = res.status
    return out


def two_adc_trace_bound(
    inst: TwoAdcInstance, n: int, k: int, alpha0: float, alpha1: float
) -> BoundResult:
    """Weighted trace-distance bound from two single-qubit diamond-norm SDPs."""
    ch0 = adc_channel(inst.r0)
    ch1 = adc_channel(inst.r1)
    statuses = {}
    tau0 = tau1 = 0.0
    if k > 0:
        res0 = _sdp.weighted_diamond_norm_sdp(ch0, ch1, alpha0)
        tau0 = res0.safe_value
        statuses["tau_d0"] = res0.status
    if n - k > 0:
        res1 = _sdp.weighted_diamond_norm_sdp(ch1, ch0, alpha1)
        tau1 = res1.safe_value
        statuses["tau_d1"] = res1.status
    out = theorem4_bound(n, k, inst.p0, inst.p1, alpha0, alpha1, tau0, tau1)
    out.params.update({"r0": inst.r0, "r1": inst.r1})
    out.diagnostics.update(statuses)
    return out
