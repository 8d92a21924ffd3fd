"""Command-line front end: figure sweeps as CSV, one-off bounds, verification.

Subcommands
-----------
fig-two-adc-r0   damping-rate sweep of the two-channel bounds (CSV)
fig-two-adc-n    query-count sweep of the two-channel bounds (CSV)
fig-cpf          channel-position-finding sweeps (CSV)
grover           closed-form search bounds vs. algorithm success (CSV)
bound            evaluate one bound on a problem-spec JSON file (JSON)
verify           run the randomized verification suites

CSV output is RFC-4180 style with LF line endings and '.' decimals; all
bound columns are probabilities (dimensionless) and columns suffixed
``_rad`` are angles in radians.  Reruns with identical arguments produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import io
import json
import sys

import numpy as np

from . import sdp as _sdp
from .applications import (
    CpfInstance,
    GroverInstance,
    TwoAdcInstance,
    adc_channel,
    bhattacharyya_angle,
    grover_bound,
    grover_oracle_unitary,
    grover_success,
    two_adc_bures_bound,
)
from .bounds import (
    DiscriminationProblem,
    theorem1_via_sdp,
    theorem2_via_sdp,
    theorem3_via_sdp,
    theorem4_via_sdp,
    unitary_exact_error,
)
from .optimize import optimize_theorem2, optimize_theorem4
from .qmat import KrausChannel
from .verification import run_suites

_STATUS_ORDER = {"optimal": 0, "near_optimal": 1, "infeasible": 2, "numerical_failure": 3}


class InputError(ValueError):
    """User input problem; reported with exit code 2."""


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def _write_csv(path, header, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    data = buf.getvalue()
    if path is None or path == "-":
        sys.stdout.write(data)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(data)


def _worst_status(*bounds) -> str:
    worst = "optimal"
    for b in bounds:
        for v in b.diagnostics.values():
            if isinstance(v, str) and v in _STATUS_ORDER:
                if _STATUS_ORDER[v] > _STATUS_ORDER[worst]:
                    worst = v
    return worst


def _float_range(start: float, stop: float, step: float):
    count = int(round((stop - start) / step)) + 1
    return [start + i * step for i in range(count) if start + i * step <= stop + 1e-12]


def _chunks(items, jobs: int):
    jobs = max(1, min(jobs, len(items)))
    bounds = np.linspace(0, len(items), jobs + 1).astype(int)
    return [items[bounds[i] : bounds[i + 1]] for i in range(jobs) if bounds[i] < bounds[i + 1]]


def _run_chunked(worker, points, jobs: int):
    """Contiguous chunks feed a worker pool; rows come back in sweep order.

    Warm-start chains (the previous point's best k) run within a chunk, so
    a single-job run chains across the whole sweep.
    """
    chunks = _chunks(points, jobs)
    if len(chunks) == 1:
        return worker(chunks[0])
    rows = []
    with concurrent.futures.ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        for part in pool.map(worker, chunks):
            rows.extend(part)
    return rows


# -- two-ADC sweeps -----------------------------------------------------------


def _two_adc_rows(points):
    rows = []
    warm = None
    for r0, r1, p0, n in points:
        inst = TwoAdcInstance(p0, 1.0 - p0, r0, r1)
        t3 = two_adc_bures_bound(inst, n)
        half = optimize_theorem4(inst, n, k_candidates=[n // 2])
        opt = optimize_theorem4(inst, n, k_start=warm, patience=3 if warm is not None else 6)
        warm = opt.best_params[0]
        rows.append(
            [
                r0,
                r1,
                n,
                bhattacharyya_angle(r0, r1),
                t3.value,
                t3.applicable,
                half.best_value,
                half.best_params[1],
                opt.best_value,
                opt.best_params[0],
                opt.best_params[1],
                opt.best_params[2],
                _worst_status(half.bound, opt.bound),
            ]
        )
    return rows


_TWO_ADC_HEADER = [
    "r0",
    "r1",
    "n",
    "bhattacharyya_angle_rad",
    "theorem3_bound",
    "theorem3_applicable",
    "theorem4_half_k_bound",
    "theorem4_half_k_alpha0",
    "theorem4_opt_bound",
    "theorem4_opt_k",
    "theorem4_opt_alpha0",
    "theorem4_opt_alpha1",
    "solver_status",
]


def cmd_fig_two_adc_r0(args) -> int:
    if args.r0_step <= 0 or args.r0_stop < args.r0_start:
        raise InputError("invalid r0 range")
    points = [
        (r0, r0 + args.delta_r, args.p0, args.n)
        for r0 in _float_range(args.r0_start, args.r0_stop, args.r0_step)
    ]
    if any(r1 > 1.0 for _, r1, _, _ in points):
        raise InputError("r0 + delta-r exceeds 1 somewhere in the range")
    rows = _run_chunked(_two_adc_rows, points, args.jobs)
    _write_csv(args.out, _TWO_ADC_HEADER, rows)
    return 0


def cmd_fig_two_adc_n(args) -> int:
    if args.n_stop < args.n_start or args.n_start < 0:
        raise InputError("invalid n range")
    if not (0.0 <= args.r0 <= 1.0 and 0.0 <= args.r1 <= 1.0):
        raise InputError("damping rates must lie in [0, 1]")
    points = [(args.r0, args.r1, args.p0, n) for n in range(args.n_start, args.n_stop + 1)]
    rows = _run_chunked(_two_adc_rows, points, args.jobs)
    _write_csv(args.out, _TWO_ADC_HEADER, rows)
    return 0


# -- CPF sweeps ---------------------------------------------------------------


def _cpf_rows(points):
    rows = []
    warm = None
    for ell, r0, r1, n in points:
        inst = CpfInstance(ell, r0, r1)
        half = optimize_theorem2(inst, None, n, k_candidates=[n // 2])
        opt = optimize_theorem2(inst, None, n, k_start=warm, patience=3 if warm is not None else 6)
        warm = opt.best_params[0]
        rows.append(
            [
                r0,
                r1,
                ell,
                n,
                half.best_value,
                half.best_params[1],
                opt.best_value,
                opt.best_params[0],
                opt.best_params[1],
                opt.best_params[2],
                _worst_status(half.bound, opt.bound),
            ]
        )
    return rows


_CPF_HEADER = [
    "r0",
    "r1",
    "ell",
    "n",
    "theorem2_half_k_bound",
    "theorem2_half_k_alpha0",
    "theorem2_opt_bound",
    "theorem2_opt_k",
    "theorem2_opt_alpha0",
    "theorem2_opt_alpha1",
    "solver_status",
]


def cmd_fig_cpf(args) -> int:
    if args.mode == "sweep-r0":
        if args.r0_step <= 0 or args.r0_stop < args.r0_start:
            raise InputError("invalid r0 range")
        points = [
            (args.ell, r0, r0 + args.delta_r, args.n)
            for r0 in _float_range(args.r0_start, args.r0_stop, args.r0_step)
        ]
        if any(r1 > 1.0 for _, _, r1, _ in points):
            raise InputError("r0 + delta-r exceeds 1 somewhere in the range")
    else:
        if args.n_stop < args.n_start or args.n_start < 0:
            raise InputError("invalid n range")
        points = [(args.ell, args.r0, args.r1, n) for n in range(args.n_start, args.n_stop + 1)]
    rows = _run_chunked(_cpf_rows, points, args.jobs)
    _write_csv(args.out, _CPF_HEADER, rows)
    return 0


# -- Grover -------------------------------------------------------------------


def cmd_grover(args) -> int:
    inst = GroverInstance(args.N, args.k)
    if args.n_stop is None:
        # extend to the edge of the closed-form window
        n = max(args.n_start, 0)
        while grover_bound(inst, n + 1).applicable:
            n += 1
        args.n_stop = n
    rows = []
    for n in range(args.n_start, args.n_stop + 1):
        lb = grover_bound(inst, n)
        if lb.applicable:
            succ = grover_success(inst, n)
            gap = abs(lb.value + succ - 1.0)
            rows.append([n, lb.value, succ, gap, True])
        else:
            rows.append([n, lb.value, "", "", False])
    _write_csv(args.out, ["n", "lower_bound", "grover_success", "gap", "applicable"], rows)
    return 0


# -- problem-spec files and one-off bounds ------------------------------------


def _parse_complex_matrix(obj, where: str) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}: not a numeric matrix of [re, im] pairs ({exc})")
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise InputError(f"{where}: expected rows of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _parse_channel(obj, where: str) -> KrausChannel:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: channel must be an object")
    try:
        if "kraus" in obj:
            ops = [
                _parse_complex_matrix(k, f"{where}.kraus[{i}]") for i, k in enumerate(obj["kraus"])
            ]
            return KrausChannel(tuple(ops))
        kind = obj.get("kind")
        if kind == "amplitude_damping":
            return adc_channel(float(obj["r"]))
        if kind == "grover_oracle":
            return KrausChannel.from_unitary(
                grover_oracle_unitary(int(obj["N"]), [int(u) for u in obj["marked"]])
            )
    except InputError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}")
    raise InputError(f"{where}: need 'kraus' or a known 'kind'")


def parse_problem_file(path):
    """Load a problem-spec JSON file; returns (problem, reference_channel|None)."""
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}")
    if not isinstance(spec, dict):
        raise InputError(f"{path}: top level must be an object")
    channels = spec.get("channels")
    priors = spec.get("priors")
    if not isinstance(channels, list) or not channels:
        raise InputError(f"{path}: 'channels' must be a nonempty list")
    if not isinstance(priors, list) or len(priors) != len(channels):
        raise InputError(f"{path}: 'priors' must list one probability per channel")
    parsed = [_parse_channel(ch, f"channels[{i}]") for i, ch in enumerate(channels)]
    try:
        pr = [float(p) for p in priors]
    except (TypeError, ValueError):
        raise InputError(f"{path}: priors must be numbers")
    groups = spec.get("groups")
    try:
        if groups is None:
            prob = DiscriminationProblem.simple(tuple(zip(pr, parsed)))
        else:
            prob = DiscriminationProblem(
                tuple(zip(pr, parsed)), tuple(tuple(g) for g in groups)
            )
    except ValueError as exc:
        raise InputError(f"{path}: {exc}")
    ref = None
    if spec.get("reference_channel") is not None:
        ref = _parse_channel(spec["reference_channel"], "reference_channel")
    return prob, ref


def cmd_bound(args) -> int:
    prob, ref = parse_problem_file(args.spec)
    if ref is None:
        ref = KrausChannel.identity(prob.dim_in)

    def need(name):
        v = getattr(args, name)
        if v is None:
            raise InputError(f"--{name.replace('_', '-')} is required for {args.theorem}")
        return v

    if args.theorem == "t1":
        result = theorem1_via_sdp(prob, ref, args.n, m=args.m or 0, p_err_m_lb=args.p_err_m_lb, tol=args.tol)
    elif args.theorem == "t2":
        result = theorem2_via_sdp(
            prob, ref, args.n, int(need("k")), need("alpha0"), need("alpha1"),
            m=args.m or 0, p_err_m_lb=args.p_err_m_lb, tol=args.tol,
        )
    elif args.theorem == "t3":
        if len(prob.oracles) != 2:
            raise InputError("theorem t3 needs exactly two channels")
        result = theorem3_via_sdp(prob, args.n, tol=args.tol)
    elif args.theorem == "t4":
        if len(prob.oracles) != 2:
            raise InputError("theorem t4 needs exactly two channels")
        result = theorem4_via_sdp(
            prob, args.n, int(need("k")), need("alpha0"), need("alpha1"), tol=args.tol
        )
    else:  # c1
        if len(prob.oracles) != 2:
            raise InputError("c1 needs exactly two channels")
        chs = prob.channels
        if any(len(ch.kraus) != 1 for ch in chs):
            raise InputError("c1 needs unitary channels (single Kraus operator)")
        (p0, _), (p1, _) = prob.oracles
        result = unitary_exact_error(args.n, p0, p1, chs[0].kraus[0], chs[1].kraus[0])

    payload = {
        "value": result.value,
        "theorem": result.theorem,
        "params": {k: (float(v) if isinstance(v, (int, float, np.floating)) else v) for k, v in result.params.items()},
        "applicable": result.applicable,
        "diagnostics": result.diagnostics,
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out in (None, "-"):
        print(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    statuses = [v for v in result.diagnostics.values() if isinstance(v, str)]
    if any(s in ("infeasible", "numerical_failure") for s in statuses):
        return 1
    return 0


def cmd_verify(args) -> int:
    sizes = {
        "small": {"sandwich": {"instances": 4}, "triangle": {"triples": 100},
                  "fidelity": {"count": 100}, "fuchs": {"count": 100}, "oneshot": {"count": 10}},
        "full": {"sandwich": {"instances": 25}, "triangle": {"triples": 500},
                 "fidelity": {"count": 500}, "fuchs": {"count": 500}, "oneshot": {"count": 50}},
    }[args.scale]
    if args.tol is not None:
        sizes.setdefault("sandwich", {})["tol"] = args.tol
    results = run_suites(args.suite, seed=args.seed, **sizes)
    failed = False
    for r in results:
        print(r.line())
        failed = failed or not r.passed
    print("FAIL" if failed else "OK")
    return 1 if failed else 0


# -- entry point ---------------------------------------------------------------


def _add_common(p, tol=True):
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    if tol:
        p.add_argument("--tol", type=float, default=_sdp.TOL_SDP, help="SDP solver tolerance")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="chandis",
        description="Lower bounds on the error probability of adaptive quantum channel discrimination",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fig-two-adc-r0", help="two-ADC bounds vs damping rate")
    p.add_argument("--r0-start", type=float, default=0.01)
    p.add_argument("--r0-stop", type=float, default=0.85)
    p.add_argument("--r0-step", type=float, default=0.01)
    p.add_argument("--delta-r", type=float, default=0.01, help="r1 = r0 + delta")
    p.add_argument("--n", type=int, default=90)
    p.add_argument("--p0", type=float, default=0.5)
    _add_common(p)
    p.set_defaults(func=cmd_fig_two_adc_r0)

    p = sub.add_parser("fig-two-adc-n", help="two-ADC bounds vs query count")
    p.add_argument("--n-start", type=int, default=1)
    p.add_argument("--n-stop", type=int, default=90)
    p.add_argument("--r0", type=float, default=0.10)
    p.add_argument("--r1", type=float, default=0.11)
    p.add_argument("--p0", type=float, default=0.5)
    _add_common(p)
    p.set_defaults(func=cmd_fig_two_adc_n)

    p = sub.add_parser("fig-cpf", help="channel position finding bounds")
    p.add_argument("--mode", choices=["sweep-r0", "sweep-n"], default="sweep-n")
    p.add_argument("--ell", type=int, default=3)
    p.add_argument("--n", type=int, default=15, help="query count for sweep-r0")
    p.add_argument("--r0-start", type=float, default=0.01)
    p.add_argument("--r0-stop", type=float, default=0.85)
    p.add_argument("--r0-step", type=float, default=0.01)
    p.add_argument("--delta-r", type=float, default=0.01)
    p.add_argument("--n-start", type=int, default=0)
    p.add_argument("--n-stop", type=int, default=15)
    p.add_argument("--r0", type=float, default=0.10)
    p.add_argument("--r1", type=float, default=0.11)
    _add_common(p)
    p.set_defaults(func=cmd_fig_cpf)

    p = sub.add_parser("grover", help="Grover search bound and success probability")
    p.add_argument("--N", type=int, required=True, help="number of search elements")
    p.add_argument("--k", type=int, default=1, help="number of marked elements")
    p.add_argument("--n-start", type=int, default=0)
    p.add_argument("--n-stop", type=int, default=None)
    _add_common(p, tol=False)
    p.set_defaults(func=cmd_grover)

    p = sub.add_parser("bound", help="evaluate one bound on a problem-spec file")
    p.add_argument("spec", help="problem-spec JSON file")
    p.add_argument("--theorem", choices=["t1", "t2", "t3", "t4", "c1"], required=True)
    p.add_argument("--n", type=int, required=True, help="number of queries")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--alpha0", type=float, default=None)
    p.add_argument("--alpha1", type=float, default=None)
    p.add_argument("--p-err-m-lb", type=float, default=None,
                   help="certified lower bound on p_err(m) when m > 0")
    _add_common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="run the randomized verification suites")
    p.add_argument("--suite", nargs="+", default=["all"],
                   help="suites to run: all, sandwich, triangle, fidelity, fuchs, oneshot")
    p.add_argument("--scale", choices=["small", "full"], default="small")
    _add_common(p, tol=False)
    p.add_argument("--tol", type=float, default=None,
                   help="override the sandwich search-vs-SDP agreement tolerance (default 5e-4)")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _sdp.SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
