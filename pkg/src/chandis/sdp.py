"""Conic-program construction and solving for the discrimination bounds.

All programs here optimize over complex Hermitian matrix variables but are
solved on the real symmetric cone: every complex d x d Hermitian block H
is embedded as the real symmetric 2d x 2d matrix

    [[Re H, -Im H],
     [Im H,  Re H]]

which is PSD exactly when H is.  ``SdpProblem`` is the resulting real
conic program; construction helpers accept complex constraint data and
lower it to real rows.  Objectives are stated so that the solved value
equals the complex objective directly (the factor-2 trace inflation of
the embedding is divided out at construction time).

Four programs are provided:

* ``min_trace_norm_sdp``      -- min_sigma ||Tr_B(O1 sigma O0^dag)||_1
* ``min_avg_trace_norm_sdp``  -- the prior-averaged version against a
                                 common reference isometry
* ``weighted_diamond_norm_sdp`` -- ||ch0 - alpha*ch1||_diamond (Watrous)
* ``avg_weighted_diamond_sdp``  -- prior-averaged weighted deviation from
                                   a reference channel

plus the exact two-state Holevo-Helstrom error.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .qmat import (
    DensityMatrix,
    KrausChannel,
    StinespringIsometry,
    as_complex_matrix,
    dagger,
    stinespring_from_kraus,
)

TOL_SDP = 1e-8
SAFE_ROUND = 1e-7

_SQRT2 = np.sqrt(2.0)


class SolverFailure(RuntimeError):
    """Raised when a conic solve does not produce a usable solution."""


def embed_hermitian(h) -> np.ndarray:
    """Real symmetric embedding [[Re h, -Im h], [Im h, Re h]] of a square matrix.

    The result is symmetric iff h is Hermitian, PSD iff h is PSD, and has
    trace equal to twice the real trace of h; objective values read back
    from embedded blocks must therefore be divided by 2.
    """
    a = as_complex_matrix(h)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"embedding requires a square matrix, got {a.shape}")
    re, im = a.real, a.imag
    return np.block([[re, -im], [im, re]])


def complex_from_embedded(r: np.ndarray) -> np.ndarray:
    """Inverse of :func:`embed_hermitian`, averaging over the embedding symmetry."""
    m = r.shape[0]
    if r.shape[0] != r.shape[1] or m % 2:
        raise ValueError(f"embedded matrix must be square of even size, got {r.shape}")
    d = m // 2
    p = 0.5 * (r[:d, :d] + r[d:, d:])
    q = 0.5 * (r[d:, :d] - r[:d, d:])
    return p + 1j * q


def _svec_maps(m: int):
    """Variable index and scale for each entry of an m x m symmetric matrix.

    Packing follows the scaled upper-triangle column-major convention used
    by the PSD-triangle cone: var k holds X[i,j] (i<=j), scaled by sqrt(2)
    for off-diagonal entries so inner products are preserved.
    """
    var = np.empty((m, m), dtype=np.int64)
    scale = np.empty((m, m))
    k = 0
    for j in range(m):
        for i in range(j + 1):
            var[i, j] = var[j, i] = k
            scale[i, j] = scale[j, i] = 1.0 if i == j else 1.0 / _SQRT2
            k += 1
    return var, scale


def svec(sym: np.ndarray) -> np.ndarray:
    """Scaled upper-triangle column-major vectorization of a symmetric matrix."""
    m = sym.shape[0]
    out = np.empty(m * (m + 1) // 2)
    k = 0
    for j in range(m):
        for i in range(j + 1):
            out[k] = sym[i, j] if i == j else _SQRT2 * sym[i, j]
            k += 1
    return out


def smat(vec: np.ndarray, m: int) -> np.ndarray:
    """Inverse of :func:`svec`."""
    out = np.empty((m, m))
    k = 0
    for j in range(m):
        for i in range(j + 1):
            v = vec[k]
            out[i, j] = out[j, i] = v if i == j else v / _SQRT2
            k += 1
    return out


@dataclass
class _Block:
    name: str
    complex_dim: int
    offset: int
    real_mode: bool = False

    @property
    def real_size(self) -> int:
        # a complex Hermitian block doubles under the embedding; a block
        # whose program data is entirely real can stay at native size
        return self.complex_dim if self.real_mode else 2 * self.complex_dim

    @property
    def n_vars(self) -> int:
        m = self.real_size
        return m * (m + 1) // 2


@dataclass
class SdpSolution:
    """Outcome of a conic solve, with reconstructed complex block values."""

    value: float
    block_values: dict
    status: str
    residuals: dict
    iterations: int
    solve_time: float

    @property
    def ok(self) -> bool:
        return self.status in ("optimal", "near_optimal")


class SdpProblem:
    """A real symmetric-cone program over embedded complex Hermitian blocks.

    Equality constraints are affine maps between blocks, entered in complex
    form ``sum_t coeff_t * F_t X_t G_t + K = 0`` and lowered to real rows
    on the scaled-triangle variables.  Each block automatically carries the
    structure rows that pin it to the embedded subspace (equal diagonal
    halves, antisymmetric off-diagonal half).
    """

    def __init__(self, tag: str):
        self.tag = tag
        self.blocks: dict[str, _Block] = {}
        self.n_vars = 0
        self._rows: list[int] = []
        self._cols: list[int] = []
        self._vals: list[float] = []
        self._rhs: list[float] = []
        self._c: np.ndarray | None = None
        self.sense = "min"
        self._var_maps: dict[str, tuple] = {}

    # -- construction ------------------------------------------------------

    def add_complex_psd_block(self, name: str, complex_dim: int) -> None:
        if name in self.blocks:
            raise ValueError(f"duplicate block {name}")
        blk = _Block(name, complex_dim, self.n_vars)
        self.blocks[name] = blk
        self.n_vars += blk.n_vars
        var, scale = _svec_maps(blk.real_size)
        self._var_maps[name] = (blk.offset + var, scale)
        d = complex_dim
        # structure rows: X[:d,:d] == X[d:,d:]  and  X[:d,d:] antisymmetric
        for a in range(d):
            for b in range(a, d):
                r = self._new_row(0.0)
                self._emit(name, a, b, 1.0, r)
                self._emit(name, a + d, b + d, -1.0, r)
        for a in range(d):
            for b in range(a, d):
                r = self._new_row(0.0)
                self._emit(name, a, b + d, 1.0, r)
                if a != b:
                    self._emit(name, b, a + d, 1.0, r)

    def add_real_psd_block(self, name: str, dim: int) -> None:
        """A PSD block for programs whose data is entirely real.

        Real data admits a real optimizer (conjugating any solution leaves
        feasibility and objective unchanged, and averaging is allowed), so
        the embedding doubling can be skipped.
        """
        if name in self.blocks:
            raise ValueError(f"duplicate block {name}")
        blk = _Block(name, dim, self.n_vars, real_mode=True)
        self.blocks[name] = blk
        self.n_vars += blk.n_vars
        var, scale = _svec_maps(dim)
        self._var_maps[name] = (blk.offset + var, scale)

    def _new_row(self, rhs: float) -> int:
        self._rhs.append(rhs)
        return len(self._rhs) - 1

    def _emit(self, name: str, i: int, j: int, coeff: float, row: int) -> None:
        var, scale = self._var_maps[name]
        self._rows.append(row)
        self._cols.append(int(var[i, j]))
        self._vals.append(coeff * scale[i, j])

    def add_complex_eq(self, terms, k_const=None, hermitian_valued: bool = False) -> None:
        """Add the complex matrix equation sum_t coeff*F X G + K = 0.

        ``terms`` is a list of (block_name, F, G, coeff) with F of shape
        (p, d_block) and G of shape (d_block, q).  For Hermitian-valued
        equations only the independent upper-triangle rows are emitted.
        """
        p = terms[0][1].shape[0]
        q = terms[0][2].shape[1]
        if k_const is None:
            k_const = np.zeros((p, q), dtype=np.complex128)
        k_const = np.asarray(k_const, dtype=np.complex128)
        # W[t][i,j,a,b] = coeff * F[i,a] * G[b,j]
        ws = []
        for name, f, g, coeff in terms:
            d = self.blocks[name].complex_dim
            if f.shape != (p, d) or g.shape != (d, q):
                raise ValueError(f"term shape mismatch for block {name}")
            ws.append((name, coeff * np.einsum("ia,bj->ijab", f, g)))
        for i in range(p):
            for j in range(q):
                if hermitian_valued and j < i:
                    continue
                self._eq_row(ws, k_const[i, j].real, i, j, imag_part=False)
                if hermitian_valued and i == j:
                    continue
                self._eq_row(ws, k_const[i, j].imag, i, j, imag_part=True)

    def _eq_row(self, ws, k_entry: float, i: int, j: int, imag_part: bool) -> None:
        row = self._new_row(-k_entry)
        before = len(self._vals)
        for name, w in ws:
            if imag_part:
                self._scatter(name, w[i, j].imag, -w[i, j].real, row)
            else:
                self._scatter(name, w[i, j].real, w[i, j].imag, row)
        if len(self._vals) == before and abs(k_entry) < 1e-14:
            # all coefficients vanished (e.g. imaginary parts of an all-real
            # program); drop the empty row
            self._rhs.pop()

    def _scatter(self, name: str, coeff_p: np.ndarray, coeff_x12: np.ndarray, row: int) -> None:
        # contribution of one term to one row: coeff_p couples to the
        # Hermitian real part (the block itself in real mode), coeff_x12 to
        # the raw X[:d, d:] entries of an embedded block (which hold -Im via
        # the structure rows)
        var, scale = self._var_maps[name]
        blk = self.blocks[name]
        d = blk.complex_dim
        parts = [(coeff_p, var[:d, :d], scale[:d, :d])]
        if not blk.real_mode:
            parts.append((coeff_x12, var[:d, d:], scale[:d, d:]))
        for coeffs, vv, ss in parts:
            nz = np.abs(coeffs) > 1e-14
            if not nz.any():
                continue
            n = int(nz.sum())
            self._rows.extend([row] * n)
            self._cols.extend(vv[nz].tolist())
            self._vals.extend((coeffs[nz] * ss[nz]).tolist())

    def set_complex_objective(self, sense: str, coefficients: dict) -> None:
        """Objective sum_b Re Tr(C_b X_b) over the named blocks.

        Each complex coefficient matrix must be Hermitian; it is embedded
        and halved so the solved value matches the complex objective.
        """
        if sense not in ("min", "max"):
            raise ValueError(f"bad sense {sense!r}")
        self.sense = sense
        c = np.zeros(self.n_vars)
        for name, cc in coefficients.items():
            blk = self.blocks[name]
            cc = as_complex_matrix(cc)
            if np.abs(cc - dagger(cc)).max() > 1e-12:
                raise ValueError("objective coefficient matrix must be Hermitian")
            if blk.real_mode:
                if np.abs(cc.imag).max() > 1e-14:
                    raise ValueError(f"block {name} is real but the objective is complex")
                c_real = cc.real
            else:
                c_real = embed_hermitian(cc) / 2.0
            c[blk.offset : blk.offset + blk.n_vars] = svec(c_real)
        self._c = c

    # -- solving -----------------------------------------------------------

    def _assemble(self):
        m_eq = len(self._rhs)
        a_eq = sp.coo_matrix(
            (self._vals, (self._rows, self._cols)), shape=(m_eq, self.n_vars)
        )
        import clarabel

        cones = [clarabel.ZeroConeT(m_eq)]
        sel_rows = []
        for blk in self.blocks.values():
            t = blk.n_vars
            sel_rows.append(
                sp.coo_matrix(
                    (-np.ones(t), (np.arange(t), blk.offset + np.arange(t))),
                    shape=(t, self.n_vars),
                )
            )
            cones.append(clarabel.PSDTriangleConeT(blk.real_size))
        a = sp.vstack([a_eq] + sel_rows, format="csc")
        b = np.concatenate([np.asarray(self._rhs), np.zeros(a.shape[0] - m_eq)])
        return a, b, cones, m_eq

    def solve(self, tol: float = TOL_SDP, max_iter: int = 200) -> SdpSolution:
        if self._c is None:
            raise ValueError("objective not set")
        import clarabel

        a, b, cones, m_eq = self._assemble()
        q = self._c if self.sense == "min" else -self._c
        settings = clarabel.DefaultSettings()
        settings.verbose = False
        settings.tol_gap_abs = tol
        settings.tol_gap_rel = tol
        settings.tol_feas = tol
        settings.max_iter = max_iter
        solver = clarabel.DefaultSolver(
            sp.csc_matrix((self.n_vars, self.n_vars)), q, a, b, cones, settings
        )
        raw = solver.solve()
        status = _map_status(raw.status)
        x = np.asarray(raw.x)
        value = float(self._c @ x)
        blocks = {}
        min_eig = np.inf
        for blk in self.blocks.values():
            real = smat(x[blk.offset : blk.offset + blk.n_vars], blk.real_size)
            blocks[blk.name] = (
                real.astype(np.complex128) if blk.real_mode else complex_from_embedded(real)
            )
            if blk.real_size:
                min_eig = min(min_eig, float(np.linalg.eigvalsh(real).min()))
        eq_res = float(np.abs(a[:m_eq] @ x - b[:m_eq]).max()) if m_eq else 0.0
        gap = abs(float(raw.obj_val) - float(raw.obj_val_dual))
        residuals = {"equality": eq_res, "min_block_eig": min_eig, "gap": gap}
        if status == "optimal" and (eq_res > tol or min_eig < -tol or gap > max(tol, tol * abs(value))):
            status = "near_optimal"
        return SdpSolution(
            value=value,
            block_values=blocks,
            status=status,
            residuals=residuals,
            iterations=int(raw.iterations),
            solve_time=float(raw.solve_time),
        )

    # -- debugging ---------------------------------------------------------

    def dump_json(self, path) -> None:
        """Self-describing dump of the real conic program for external checks."""
        payload = {
            "format": (
                "real symmetric-cone SDP; variables are scaled upper-triangle "
                "column-major vectorizations (off-diagonals x sqrt(2)) of the "
                "PSD blocks, concatenated in block order; equality rows satisfy "
                "A x = b; objective is sense(c . x)"
            ),
            "tag": self.tag,
            "sense": self.sense,
            "blocks": [
                {
                    "name": blk.name,
                    "complex_dim": blk.complex_dim,
                    "real_size": blk.real_size,
                    "var_offset": blk.offset,
                    "n_vars": blk.n_vars,
                }
                for blk in self.blocks.values()
            ],
            "objective": (self._c if self._c is not None else np.zeros(self.n_vars)).tolist(),
            "equalities": {
                "rows": len(self._rhs),
                "entries": [
                    [int(r), int(c), float(v)]
                    for r, c, v in zip(self._rows, self._cols, self._vals)
                ],
                "rhs": list(map(float, self._rhs)),
            },
        }
        with open(path, "w") as fh:
            json.dump(payload, fh)


def _map_status(raw_status) -> str:
    name = str(raw_status)
    if name == "Solved":
        return "optimal"
    if name == "AlmostSolved":
        return "near_optimal"
    if "Infeasible" in name:
        return "infeasible"
    return "numerical_failure"


# -- shared pieces of the four programs -------------------------------------


def _project_to_density(h: np.ndarray) -> DensityMatrix:
    """Nearest valid density matrix (hermitize, clip spectrum, renormalize)."""
    h = 0.5 * (h + dagger(h))
    eigs, vecs = np.linalg.eigh(h)
    eigs = np.clip(eigs, 0.0, None)
    total = eigs.sum()
    if total <= 0.0:
        return DensityMatrix.maximally_mixed(h.shape[0])
    return DensityMatrix((vecs * (eigs / total)) @ dagger(vecs))


def pad_environment(iso: StinespringIsometry, dim_env: int) -> StinespringIsometry:
    """Extend the environment with zero rows (the isometry property is kept)."""
    if dim_env < iso.dim_env:
        raise ValueError("cannot shrink the environment")
    if dim_env == iso.dim_env:
        return iso
    v = np.zeros((iso.dim_out * dim_env, iso.dim_in), dtype=np.complex128)
    for b in range(iso.dim_out):
        v[b * dim_env : b * dim_env + iso.dim_env, :] = iso.matrix[
            b * iso.dim_env : (b + 1) * iso.dim_env, :
        ]
    return StinespringIsometry(v, dim_out=iso.dim_out, dim_env=dim_env)


def stack_environments(v0: StinespringIsometry, v1: StinespringIsometry, c0: float, c1: float):
    """Direct-sum environment stacking c0*V0 (+) c1*V1 as a raw matrix.

    With S = stack(V0, V1, 1, sqrt(a)) and T = stack(V0, V1, 1, -sqrt(a)),
    Tr_E(S rho T^dag) realizes (ch0 - a*ch1)(rho): the cross terms vanish
    because the two environment sectors are orthogonal.
    """
    if v0.dim_in != v1.dim_in or v0.dim_out != v1.dim_out:
        raise ValueError("isometries must share input and output dimensions")
    e = v0.dim_env + v1.dim_env
    m = np.zeros((v0.dim_out * e, v0.dim_in), dtype=np.complex128)
    for b in range(v0.dim_out):
        m[b * e : b * e + v0.dim_env, :] = c0 * v0.matrix[
            b * v0.dim_env : (b + 1) * v0.dim_env, :
        ]
        m[b * e + v0.dim_env : (b + 1) * e, :] = c1 * v1.matrix[
            b * v1.dim_env : (b + 1) * v1.dim_env, :
        ]
    return m, e


def _env_bra_factors(mat: np.ndarray, dim_out: int, dim_env: int):
    """List over the B basis of (<j|_B (x) I_E) mat, each of shape (E, A)."""
    out = []
    for j in range(dim_out):
        out.append(mat[j * dim_env : (j + 1) * dim_env, :])
    return out


def _big_selectors(dim_env: int):
    top = np.zeros((dim_env, 2 * dim_env), dtype=np.complex128)
    top[:, :dim_env] = np.eye(dim_env)
    bot = np.zeros((dim_env, 2 * dim_env), dtype=np.complex128)
    bot[:, dim_env:] = np.eye(dim_env)
    return top, bot


def _add_trace_one(prob: SdpProblem, name: str, dim: int) -> None:
    terms = []
    for a in range(dim):
        e = np.zeros((1, dim), dtype=np.complex128)
        e[0, a] = 1.0
        terms.append((name, e, e.conj().T, 1.0))
    prob.add_complex_eq(terms, -np.ones((1, 1), dtype=np.complex128), hermitian_valued=True)


def _off_diag_objective(dim_env: int) -> np.ndarray:
    c = np.zeros((2 * dim_env, 2 * dim_env), dtype=np.complex128)
    c[:dim_env, dim_env:] = 0.5 * np.eye(dim_env)
    c[dim_env:, :dim_env] = 0.5 * np.eye(dim_env)
    return c


def _all_real(*mats) -> bool:
    return all(np.abs(m.imag).max() == 0.0 for m in mats if m.size)


@dataclass(frozen=True)
class ProgramResult:
    """Value, optimizer certificate and solver diagnostics of one program.

    ``safe_value`` is the value widened by ``SAFE_ROUND`` in the direction
    that keeps downstream lower bounds valid against solver error
    (minimizations are shifted down, maximizations up).
    """

    value: float
    safe_value: float
    sigma: DensityMatrix
    solution: SdpSolution

    @property
    def status(self) -> str:
        return self.solution.status


def _finish_min(sol: SdpSolution, sigma_name: str) -> ProgramResult:
    if not sol.ok:
        raise SolverFailure(f"solver returned status {sol.status}")
    value = min(max(sol.value, 0.0), 1.0)
    safe = max(value - SAFE_ROUND, 0.0)
    return ProgramResult(value, safe, _project_to_density(sol.block_values[sigma_name]), sol)


def _finish_max(sol: SdpSolution, sigma_name: str) -> ProgramResult:
    if not sol.ok:
        raise SolverFailure(f"solver returned status {sol.status}")
    value = max(sol.value, 0.0)
    return ProgramResult(value, value + SAFE_ROUND, _project_to_density(sol.block_values[sigma_name]), sol)


# -- program 1: min trace norm ----------------------------------------------


def min_trace_norm_sdp(
    o0: StinespringIsometry, o1: StinespringIsometry, tol: float = TOL_SDP
) -> ProgramResult:
    """min over density operators sigma of ||Tr_B(O1 sigma O0^dag)||_1.

    The value is cos of the Bures-angle quantity for the two channels;
    environments are padded with zero rows to a common dimension.
    """
    if o0.dim_in != o1.dim_in or o0.dim_out != o1.dim_out:
        raise ValueError("isometries must act on matching spaces")
    d_env = max(o0.dim_env, o1.dim_env)
    o0 = pad_environment(o0, d_env)
    o1 = pad_environment(o1, d_env)
    d_a = o0.dim_in

    prob = SdpProblem("min_trace_norm")
    add_block = (
        prob.add_real_psd_block if _all_real(o0.matrix, o1.matrix) else prob.add_complex_psd_block
    )
    add_block("w", 2 * d_env)
    add_block("sigma", d_a)
    prob.set_complex_objective("min", {"w": 0.5 * np.eye(2 * d_env, dtype=np.complex128)})

    top, bot = _big_selectors(d_env)
    terms = [("w", top, bot.conj().T, 1.0)]
    f1 = _env_bra_factors(o1.matrix, o1.dim_out, d_env)
    f0 = _env_bra_factors(o0.matrix, o0.dim_out, d_env)
    for j in range(o0.dim_out):
        terms.append(("sigma", -f1[j], dagger(f0[j]), 1.0))
    prob.add_complex_eq(terms)
    _add_trace_one(prob, "sigma", d_a)
    return _finish_min(prob.solve(tol=tol), "sigma")


# -- program 2: prior-averaged min trace norm --------------------------------


def _check_priors(priors) -> None:
    p = np.asarray(priors, dtype=float)
    if (p < -1e-15).any() or abs(p.sum() - 1.0) > 1e-12:
        raise ValueError("priors must be nonnegative and sum to 1")


def min_avg_trace_norm_sdp(oracles, v: StinespringIsometry, tol: float = TOL_SDP) -> ProgramResult:
    """min over sigma of sum_xi p_xi ||Tr_B(O^xi sigma V^dag)||_1.

    ``oracles`` is a list of (prior, StinespringIsometry) sharing the input
    space of the reference isometry V; the optimizing sigma is shared.
    """
    _check_priors([p for p, _ in oracles])
    isos = [iso for _, iso in oracles]
    for iso in isos:
        if iso.dim_in != v.dim_in or iso.dim_out != v.dim_out:
            raise ValueError("oracle isometries must match the reference spaces")
    d_env = max([v.dim_env] + [iso.dim_env for iso in isos])
    v = pad_environment(v, d_env)
    isos = [pad_environment(iso, d_env) for iso in isos]
    d_a = v.dim_in

    prob = SdpProblem("min_avg_trace_norm")
    add_block = (
        prob.add_real_psd_block
        if _all_real(v.matrix, *(iso.matrix for iso in isos))
        else prob.add_complex_psd_block
    )
    coeffs = {}
    for idx, (p_xi, _) in enumerate(oracles):
        name = f"w{idx}"
        add_block(name, 2 * d_env)
        coeffs[name] = 0.5 * p_xi * np.eye(2 * d_env, dtype=np.complex128)
    add_block("sigma", d_a)
    prob.set_complex_objective("min", coeffs)

    top, bot = _big_selectors(d_env)
    fv = _env_bra_factors(v.matrix, v.dim_out, d_env)
    for idx, iso in enumerate(isos):
        terms = [(f"w{idx}", top, bot.conj().T, 1.0)]
        fo = _env_bra_factors(iso.matrix, iso.dim_out, d_env)
        for j in range(v.dim_out):
            terms.append(("sigma", -fo[j], dagger(fv[j]), 1.0))
        prob.add_complex_eq(terms)
    _add_trace_one(prob, "sigma", d_a)
    return _finish_min(prob.solve(tol=tol), "sigma")


# -- program 3: weighted diamond norm (Watrous) -------------------------------


def weighted_diamond_norm_sdp(
    ch0: KrausChannel, ch1: KrausChannel, alpha: float, tol: float = TOL_SDP
) -> ProgramResult:
    """Diamond norm of the weighted difference ch0 - alpha*ch1.

    Uses the direct-sum stacking S = O0 (+) sqrt(a) O1, T = O0 (+) -sqrt(a) O1
    so that Tr_E(S rho T^dag) = ch0(rho) - alpha*ch1(rho); the returned sigma
    is the optimizing input marginal.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if ch0.dim_in != ch1.dim_in or ch0.dim_out != ch1.dim_out:
        raise ValueError("channels must act on matching spaces")
    v0 = stinespring_from_kraus(ch0)
    v1 = stinespring_from_kraus(ch1)
    root = np.sqrt(alpha)
    s, d_env = stack_environments(v0, v1, 1.0, root)
    t, _ = stack_environments(v0, v1, 1.0, -root)
    return _watrous_program("weighted_diamond", [(1.0, s, t)], d_env, ch0.dim_out, ch0.dim_in, 1.0, tol)


def avg_weighted_diamond_sdp(
    oracles,
    ref: KrausChannel,
    alpha: float,
    side: str = "oracle_minus_ref",
    tol: float = TOL_SDP,
) -> ProgramResult:
    """max over a shared input of sum_xi p_xi (1/2)||D_xi(phi)||_1.

    Here D_xi = O^xi - alpha*ref when side == "oracle_minus_ref" and
    D_xi = alpha*O^xi - ref when side == "ref_minus_oracle"; this is the
    theta-type quantity of the group bounds (note the factor 1/2, so a
    single oracle reduces to half the weighted diamond norm).
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if side not in ("oracle_minus_ref", "ref_minus_oracle"):
        raise ValueError(f"bad side {side!r}")
    _check_priors([p for p, _ in oracles])
    v_ref = stinespring_from_kraus(ref)
    root = np.sqrt(alpha)
    triples = []
    d_env = None
    for p_xi, ch in oracles:
        if ch.dim_in != ref.dim_in or ch.dim_out != ref.dim_out:
            raise ValueError("oracle channels must match the reference spaces")
        v = stinespring_from_kraus(ch)
        if side == "oracle_minus_ref":
            s, e = stack_environments(v, v_ref, 1.0, root)
            t, _ = stack_environments(v, v_ref, 1.0, -root)
        else:
            s, e = stack_environments(v, v_ref, root, 1.0)
            t, _ = stack_environments(v, v_ref, -root, 1.0)
        if d_env is None:
            d_env = e
        triples.append((p_xi, s, t))
    return _watrous_program(
        "avg_weighted_diamond", triples, d_env, ref.dim_out, ref.dim_in, 0.5, tol
    )


def _watrous_program(tag, weighted_pairs, d_env, dim_b, dim_a, objective_scale, tol):
    prob = SdpProblem(tag)
    add_block = (
        prob.add_real_psd_block
        if _all_real(*(m for _, s, t in weighted_pairs for m in (s, t)))
        else prob.add_complex_psd_block
    )
    coeffs = {}
    for idx, (p_xi, _, _) in enumerate(weighted_pairs):
        name = f"w{idx}"
        add_block(name, 2 * d_env)
        coeffs[name] = objective_scale * p_xi * _off_diag_objective(d_env)
    add_block("sigma", dim_a)
    prob.set_complex_objective("max", coeffs)

    top, bot = _big_selectors(d_env)
    for idx, (_, s, t) in enumerate(weighted_pairs):
        name = f"w{idx}"
        fs = _env_bra_factors(s, dim_b, d_env)
        ft = _env_bra_factors(t, dim_b, d_env)
        terms_y = [(name, top, top.conj().T, 1.0)]
        terms_z = [(name, bot, bot.conj().T, 1.0)]
        for j in range(dim_b):
            terms_y.append(("sigma", -fs[j], dagger(fs[j]), 1.0))
            terms_z.append(("sigma", -ft[j], dagger(ft[j]), 1.0))
        prob.add_complex_eq(terms_y, hermitian_valued=True)
        prob.add_complex_eq(terms_z, hermitian_valued=True)
    _add_trace_one(prob, "sigma", dim_a)
    return _finish_max(prob.solve(tol=tol), "sigma")


# -- Holevo-Helstrom ----------------------------------------------------------


def helstrom_error(p0: float, rho0: DensityMatrix, p1: float, rho1: DensityMatrix) -> float:
    """Exact two-state discrimination error (1/2)(1 - ||p0 rho0 - p1 rho1||_1)."""
    if abs(p0 + p1 - 1.0) > 1e-12 or p0 < 0 or p1 < 0:
        raise ValueError("priors must be nonnegative and sum to 1")
    if rho0.dim != rho1.dim:
        raise ValueError("states must share a dimension")
    m = p0 * rho0.matrix - p1 * rho1.matrix
    val = 0.5 * (1.0 - float(np.abs(np.linalg.eigvalsh(m)).sum()))
    return min(max(val, 0.0), 0.5)
