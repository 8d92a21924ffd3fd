"""Derivative-free brute-force verifiers for the SDP quantities.

Random-restart hill climbing over pure input states, vectorized across
restarts.  Max-type searches always under-estimate the SDP maxima and
min-type searches over-estimate the minima, so pairing a search with the
corresponding program brackets the true value from both sides (the
"sandwich" checks).  Results are deterministic for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import DiscriminationProblem
from .qmat import KrausChannel, channel_tensor, extend_with_identity


@dataclass(frozen=True)
class SearchConfig:
    """Restart count, step budget and proposal step schedule for the search.

    When ``step_schedule`` is omitted, the step size starts at 0.3 and
    halves every 200 steps.
    """

    restarts: int = 64
    steps: int = 2000
    step_schedule: tuple | None = None
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("need at least one restart")
        if self.steps < 1:
            raise ValueError("need at least one step")

    def step_size(self, i: int) -> float:
        if self.step_schedule is not None:
            return self.step_schedule[min(i, len(self.step_schedule) - 1)]
        return 0.3 * 0.5 ** (i // 200)


def _random_states(rng, count: int, dim: int) -> np.ndarray:
    v = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _hill_climb(objective, dim: int, cfg: SearchConfig, maximize: bool) -> float:
    """Best objective value over batched random-restart hill climbing."""
    rng = np.random.default_rng(cfg.seed)
    states = _random_states(rng, cfg.restarts, dim)
    vals = objective(states)
    sign = 1.0 if maximize else -1.0
    for i in range(cfg.steps):
        step = cfg.step_size(i)
        noise = rng.normal(size=states.shape) + 1j * rng.normal(size=states.shape)
        cand = states + step * noise
        cand /= np.linalg.norm(cand, axis=1, keepdims=True)
        cand_vals = objective(cand)
        better = sign * cand_vals > sign * vals
        states[better] = cand[better]
        vals[better] = cand_vals[better]
    return float(vals.max() if maximize else vals.min())


def _projectors(states: np.ndarray) -> np.ndarray:
    return np.einsum("ri,rj->rij", states, states.conj())


def _apply_batch(kraus_mats, rhos: np.ndarray) -> np.ndarray:
    out = np.zeros_like(rhos)
    for k in kraus_mats:
        out += (k @ rhos) @ k.conj().T
    return out


def _herm_trace_norms(mats: np.ndarray) -> np.ndarray:
    return np.abs(np.linalg.eigvalsh(mats)).sum(axis=-1)


def _fidelities(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Batched fidelity of PSD matrix pairs, eigenvalues clamped at 0."""
    w, v = np.linalg.eigh(a)
    w = np.clip(w, 0.0, None)
    sqrt_a = np.einsum("rij,rj,rkj->rik", v, np.sqrt(w), v.conj())
    inner = sqrt_a @ b @ sqrt_a
    eigs = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    return np.sqrt(eigs).sum(axis=-1)


def _extended(ch: KrausChannel, dim_ref: int):
    return [np.kron(k, np.eye(dim_ref)) for k in ch.kraus]


def max_weighted_trace_norm_search(
    ch0: KrausChannel, ch1: KrausChannel, alpha: float, cfg: SearchConfig = SearchConfig()
) -> float:
    """Search estimate (from below) of max_phi ||(ch0 - alpha*ch1)(phi phi)||_1.

    The working system has the input dimension, which provably suffices;
    the result never exceeds the weighted-diamond SDP value.
    """
    if ch0.dim_in != ch1.dim_in or ch0.dim_out != ch1.dim_out:
        raise ValueError("channels must act on matching spaces")
    d_ref = ch0.dim_in
    ops0 = _extended(ch0, d_ref)
    ops1 = _extended(ch1, d_ref)

    def objective(states):
        rhos = _projectors(states)
        m = _apply_batch(ops0, rhos) - alpha * _apply_batch(ops1, rhos)
        return _herm_trace_norms(m)

    return _hill_climb(objective, ch0.dim_in * d_ref, cfg, maximize=True)


def max_avg_weighted_trace_norm_search(
    oracles,
    ref: KrausChannel,
    alpha: float,
    side: str = "oracle_minus_ref",
    cfg: SearchConfig = SearchConfig(),
) -> float:
    """Search estimate of the averaged theta quantity (with its factor 1/2).

    Mirrors the averaged weighted-diamond program: the shared input state
    maximizes sum_xi p_xi (1/2)||D_xi(phi phi)||_1 for D_xi the selected
    weighted difference with the reference channel.
    """
    if side not in ("oracle_minus_ref", "ref_minus_oracle"):
        raise ValueError(f"bad side {side!r}")
    d_ref = ref.dim_in
    ops_ref = _extended(ref, d_ref)
    terms = [(p, _extended(ch, d_ref)) for p, ch in oracles]

    def objective(states):
        rhos = _projectors(states)
        out_ref = _apply_batch(ops_ref, rhos)
        total = np.zeros(states.shape[0])
        for p_xi, ops in terms:
            out = _apply_batch(ops, rhos)
            diff = out - alpha * out_ref if side == "oracle_minus_ref" else alpha * out - out_ref
            total += p_xi * 0.5 * _herm_trace_norms(diff)
        return total

    return _hill_climb(objective, ref.dim_in * d_ref, cfg, maximize=True)


def min_avg_fidelity_search(
    oracles, ref: KrausChannel, cfg: SearchConfig = SearchConfig()
) -> float:
    """Search estimate (from above) of min_phi sum_xi p_xi F(O^xi(phi), ref(phi)).

    Pairs with the averaged trace-norm program, which computes the same
    quantity exactly: search >= SDP within tolerance certifies both sides.
    """
    d_ref = ref.dim_in
    ops_ref = _extended(ref, d_ref)
    terms = [(p, _extended(ch, d_ref)) for p, ch in oracles]

    def objective(states):
        rhos = _projectors(states)
        out_ref = _apply_batch(ops_ref, rhos)
        total = np.zeros(states.shape[0])
        for p_xi, ops in terms:
            total += p_xi * _fidelities(_apply_batch(ops, rhos), out_ref)
        return total

    return _hill_climb(objective, ref.dim_in * d_ref, cfg, maximize=False)


def exhaustive_small_check(
    prob: DiscriminationProblem, n: int, cfg: SearchConfig = SearchConfig()
) -> float:
    """Achievable error probability for tiny two-channel instances.

    For n=1 this searches the exact one-query error (Holevo-Helstrom over
    purified inputs); for n=2 it is the best found non-adaptive strategy
    with a full-size working system.  Either way the value is attained by
    an explicit strategy, so every theorem lower bound must stay below it.
    """
    if len(prob.oracles) != 2 or set(prob.groups) != {(0,), (1,)}:
        raise ValueError("unsupported configuration: need a plain two-channel problem")
    if n not in (1, 2):
        raise ValueError("only n = 1 or 2 are supported")
    (p0, ch0), (p1, ch1) = prob.oracles
    if n == 2:
        ch0 = channel_tensor(ch0, ch0)
        ch1 = channel_tensor(ch1, ch1)
    d_ref = prob.dim_in**n
    lam0 = extend_with_identity(ch0, d_ref)
    lam1 = extend_with_identity(ch1, d_ref)

    def objective(states):
        rhos = _projectors(states)
        m = p0 * _apply_batch(lam0.kraus, rhos) - p1 * _apply_batch(lam1.kraus, rhos)
        return _herm_trace_norms(m)

    best = _hill_climb(objective, ch0.dim_in * d_ref, cfg, maximize=True)
    return 0.5 * (1.0 - min(best, 1.0))
