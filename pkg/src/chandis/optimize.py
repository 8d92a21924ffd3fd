"""Parameter optimization for the weighted trace-distance bounds.

The free parameters are the split index k and the geometric weight alpha0
(alpha1 follows from the coupling constraint).  alpha0 is maximized by
golden-section search after a coarse 16-point pre-scan that checks the
empirical single-peak assumption; if the scan shows several local maxima,
golden-section runs once per bracket and the best result is kept.  Any
parameter choice yields a valid bound, so optimizer quality only affects
tightness, never correctness.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .applications import CpfInstance, TwoAdcInstance, cpf_bound, two_adc_trace_bound
from .bounds import BoundResult, DiscriminationProblem, theorem2_via_sdp, theorem4_via_sdp
from .sdp import SolverFailure

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
ALPHA_MIN = 1e-6
ALPHA_MAX = 2.0
PRESCAN_POINTS = 16


def golden_section_max(f, lo: float, hi: float, tol: float = 1e-6):
    """Maximize a scalar function on [lo, hi] by golden-section search.

    Returns (x, f(x)) for the best point actually evaluated, so the value
    is exactly reproducible at the reported argument.  Deterministic for
    deterministic f; non-finite values abort.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    best_x, best_f = None, -math.inf

    def probe(x):
        nonlocal best_x, best_f
        y = f(x)
        if not math.isfinite(y):
            raise ValueError(f"objective returned non-finite value {y} at x={x}")
        if y > best_f:
            best_x, best_f = x, y
        return y

    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = probe(c), probe(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = probe(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = probe(d)
    return best_x, best_f


@dataclass
class OptimizationReport:
    """Best bound found with its parameters and search bookkeeping."""

    best_value: float
    best_params: tuple
    evaluations: int
    trace: list | None = None
    bound: BoundResult | None = None
    failures: list = field(default_factory=list)


def _theorem4_parameterization(p0: float, p1: float, n: int, k: int):
    """Resolve the coupling p0 a0^k = p1 a1^(n-k) for a given k.

    Returns ("forced", a0, a1) when the constraint pins both weights,
    ("free", fn) when a0 is free and fn maps it to a1, or None when no
    nonnegative solution exists.
    """
    if n == 0:
        return ("forced", 1.0, 1.0) if abs(p0 - p1) <= 1e-12 else None
    if k == 0:
        return "forced", 1.0, (p0 / p1) ** (1.0 / n)
    if k == n:
        return "forced", (p1 / p0) ** (1.0 / n), 1.0
    ratio = p0 / p1
    expo = k / (n - k)
    return "free", lambda a0: ratio ** (1.0 / (n - k)) * a0**expo


def _theorem2_parameterization(n: int, k: int):
    """Resolve a0^(n-k) = a1^k (the m=0 group-bound coupling)."""
    if n == 0 or k == 0 or k == n:
        # an empty weight sum on one side forces the other weight to 1
        return "forced", 1.0, 1.0
    expo = (n - k) / k
    return "free", lambda a0: a0**expo


def _optimize(evaluate, parameterize, ks, alpha_max, alpha_tol, patience, keep_trace):
    best_value = -math.inf
    best_params = None
    best_bound = None
    evaluations = 0
    trace = [] if keep_trace else None
    failures = []
    stale = 0

    def run_point(k, a0, a1):
        nonlocal evaluations
        bound = evaluate(k, a0, a1)
        evaluations += 1
        if keep_trace:
            trace.append(((k, a0, a1), bound.value))
        return bound

    for k in ks:
        mode = parameterize(k)
        if mode is None:
            continue
        k_best = None
        try:
            if mode[0] == "forced":
                _, a0, a1 = mode
                k_best = (run_point(k, a0, a1), a0, a1)
            else:
                a1_of = mode[1]
                cache = {}

                def g(a0, _k=k, _a1_of=a1_of, _cache=cache):
                    b = run_point(_k, a0, _a1_of(a0))
                    _cache[a0] = b
                    return b.value

                xs = [
                    ALPHA_MIN + i * (alpha_max - ALPHA_MIN) / (PRESCAN_POINTS - 1)
                    for i in range(PRESCAN_POINTS)
                ]
                ys = [g(x) for x in xs]
                for lo_i, hi_i in _local_max_brackets(ys):
                    x_star, _ = golden_section_max(g, xs[lo_i], xs[hi_i], tol=alpha_tol)
                    cand = (cache[x_star], x_star, a1_of(x_star))
                    if k_best is None or cand[0].value > k_best[0].value:
                        k_best = cand
                # the pre-scan itself may hold the best point (e.g. at an edge)
                top = max(range(len(xs)), key=lambda i: ys[i])
                if k_best is None or ys[top] > k_best[0].value:
                    k_best = (cache[xs[top]], xs[top], a1_of(xs[top]))
        except SolverFailure as exc:
            failures.append((k, str(exc)))
            warnings.warn(f"skipping k={k}: {exc}", stacklevel=2)
            continue
        if k_best is not None and k_best[0].value > best_value:
            best_value = k_best[0].value
            best_params = (k, k_best[1], k_best[2])
            best_bound = k_best[0]
            stale = 0
        else:
            stale += 1
            if patience is not None and stale >= patience:
                break

    if best_params is None:
        empty = BoundResult(0.0, "T4", {"note": "no feasible parameters"}, applicable=False)
        return OptimizationReport(0.0, (0, 1.0, 1.0), evaluations, trace, empty, failures)
    if abs(best_params[1] - alpha_max) < 10 * alpha_tol:
        warnings.warn(
            f"optimal alpha0={best_params[1]:.6f} sits at the bracket edge "
            f"alpha_max={alpha_max}; consider widening",
            stacklevel=2,
        )
    return OptimizationReport(best_value, best_params, evaluations, trace, best_bound, failures)


def _local_max_brackets(ys, eps: float = 1e-9):
    """Bracket indexes around the scan's local maxima.

    Solver noise makes flat stretches wiggle at the 1e-8 level, so only
    maxima that beat both neighbors by ``eps`` count as separate peaks;
    the bracket around the global argmax is always included.
    """
    n = len(ys)
    top = max(range(n), key=lambda i: ys[i])
    brackets = {(max(top - 1, 0), min(top + 1, n - 1))}
    for i in range(n):
        left = ys[i - 1] if i > 0 else -math.inf
        right = ys[i + 1] if i < n - 1 else -math.inf
        if ys[i] > left + eps and ys[i] > right + eps:
            brackets.add((max(i - 1, 0), min(i + 1, n - 1)))
    return sorted(brackets)


def optimize_theorem4(
    problem,
    n: int,
    k_candidates=None,
    k_start: int | None = None,
    patience: int | None = None,
    alpha_max: float = ALPHA_MAX,
    alpha_tol: float = 1e-6,
    keep_trace: bool = False,
) -> OptimizationReport:
    """Maximize the two-channel weighted trace-distance bound over (k, alpha0).

    ``problem`` is a TwoAdcInstance (fast single-qubit evaluations) or a
    two-channel DiscriminationProblem.  Defaults scan every k in 0..n;
    sweeps warm-start by passing ``k_start`` (the previous point's best k,
    assuming the optimum is non-decreasing along the sweep) together with a
    ``patience`` early-stop.
    """
    if isinstance(problem, TwoAdcInstance):
        p0, p1 = problem.p0, problem.p1
        evaluate = lambda k, a0, a1: two_adc_trace_bound(problem, n, k, a0, a1)
    elif isinstance(problem, DiscriminationProblem):
        if len(problem.oracles) != 2:
            raise ValueError("theorem 4 needs exactly two channels")
        p0, p1 = problem.priors
        evaluate = lambda k, a0, a1: theorem4_via_sdp(problem, n, k, a0, a1)
    else:
        raise TypeError(f"unsupported problem type {type(problem)!r}")
    if k_candidates is None:
        k_candidates = range(k_start or 0, n + 1)
        if k_start is not None and patience is None:
            patience = 3
    return _optimize(
        evaluate,
        lambda k: _theorem4_parameterization(p0, p1, n, k),
        k_candidates,
        alpha_max,
        alpha_tol,
        patience,
        keep_trace,
    )


def optimize_theorem2(
    problem,
    ref,
    n: int,
    k_candidates=None,
    k_start: int | None = None,
    patience: int | None = None,
    alpha_max: float = ALPHA_MAX,
    alpha_tol: float = 1e-6,
    keep_trace: bool = False,
) -> OptimizationReport:
    """Maximize the group weighted trace-distance bound over (k, alpha0).

    ``problem`` is a DiscriminationProblem with a reference channel, or a
    CpfInstance (``ref`` ignored), in which case the single-qubit reduction
    evaluates each point with two small SDPs regardless of ell.
    """
    if isinstance(problem, CpfInstance):
        evaluate = lambda k, a0, a1: cpf_bound(problem, n, k, a0, a1)
    elif isinstance(problem, DiscriminationProblem):
        evaluate = lambda k, a0, a1: theorem2_via_sdp(problem, ref, n, k, a0, a1)
    else:
        raise TypeError(f"unsupported problem type {type(problem)!r}")
    if k_candidates is None:
        k_candidates = range(k_start or 0, n + 1)
        if k_start is not None and patience is None:
            patience = 3
    return _optimize(
        evaluate,
        lambda k: _theorem2_parameterization(n, k),
        k_candidates,
        alpha_max,
        alpha_tol,
        patience,
        keep_trace,
    )
