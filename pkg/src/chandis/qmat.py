"""Dense complex linear algebra: quantum states, channels and distance measures.

Conventions used throughout the package:

* Matrices are ``numpy.ndarray`` with ``complex128`` entries, row-major.
* Tensor products are left-factor-major: in ``kron(A, B)`` the slot-1
  index (A) varies slowest.  All partial traces take explicit dimension
  tuples, never an implicit qubit factorization.
* A Stinespring isometry of a channel with Kraus operators ``K_i`` maps
  ``|psi> -> sum_i (K_i |psi>) (x) |i>_E``, so the output is ordered
  (system, environment) and the environment dimension equals the number
  of Kraus operators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL_HERM = 1e-9
TOL_TRACE = 1e-9
TOL_PSD = 1e-8
TOL_CPTP = 1e-9


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-D complex array (the raw operator type)."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {a.ndim}")
    if not np.all(np.isfinite(a.view(np.float64))):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def is_hermitian(m: np.ndarray, tol: float = TOL_HERM) -> bool:
    return m.shape[0] == m.shape[1] and np.abs(m - dagger(m)).max() <= tol


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density operator (Hermitian, PSD, unit trace)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_complex_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got {m.shape}")
        if not is_hermitian(m, TOL_HERM):
            raise ValueError("density matrix is not Hermitian within tolerance")
        eigs = np.linalg.eigvalsh(m)
        if eigs.min() < -TOL_PSD:
            raise ValueError(f"density matrix has negative eigenvalue {eigs.min():.3e}")
        tr = np.trace(m).real
        if abs(tr - 1.0) > max(TOL_TRACE, 1e-12 * m.shape[0]):
            raise ValueError(f"density matrix trace {tr} != 1")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @staticmethod
    def maximally_mixed(dim: int) -> "DensityMatrix":
        return DensityMatrix(np.eye(dim) / dim)


@dataclass(frozen=True, eq=False)
class PureState:
    """A normalized state vector."""

    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if not np.all(np.isfinite(v.view(np.float64))):
            raise ValueError("state vector has non-finite entries")
        n = np.linalg.norm(v)
        if abs(n - 1.0) > TOL_TRACE:
            raise ValueError(f"state vector norm {n} != 1")
        object.__setattr__(self, "amplitudes", v)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self) -> DensityMatrix:
        return DensityMatrix(self.projector())

    @staticmethod
    def basis(dim: int, index: int) -> "PureState":
        v = np.zeros(dim, dtype=np.complex128)
        v[index] = 1.0
        return PureState(v)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A CPTP map stored as a list of Kraus operators (each dim_out x dim_in)."""

    kraus: tuple

    def __post_init__(self):
        ops = tuple(as_complex_matrix(k) for k in self.kraus)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise ValueError("Kraus operators must share a common shape")
        acc = np.zeros((shape[1], shape[1]), dtype=np.complex128)
        for k in ops:
            acc += dagger(k) @ k
        if np.abs(acc - np.eye(shape[1])).max() > TOL_CPTP:
            raise ValueError("Kraus operators do not satisfy trace preservation")
        object.__setattr__(self, "kraus", ops)

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    @staticmethod
    def identity(dim: int) -> "KrausChannel":
        return KrausChannel((np.eye(dim, dtype=np.complex128),))

    @staticmethod
    def from_unitary(u) -> "KrausChannel":
        u = as_complex_matrix(u)
        if np.abs(dagger(u) @ u - np.eye(u.shape[1])).max() > TOL_CPTP:
            raise ValueError("matrix is not unitary")
        return KrausChannel((u,))


@dataclass(frozen=True, eq=False)
class StinespringIsometry:
    """An isometry V: A -> B (x) E with V^dag V = I on the input space."""

    matrix: np.ndarray
    dim_out: int
    dim_env: int

    def __post_init__(self):
        m = as_complex_matrix(self.matrix)
        if m.shape[0] != self.dim_out * self.dim_env:
            raise ValueError(
                f"isometry has {m.shape[0]} rows, expected dim_out*dim_env = "
                f"{self.dim_out * self.dim_env}"
            )
        gram = dagger(m) @ m
        if np.abs(gram - np.eye(m.shape[1])).max() > TOL_CPTP:
            raise ValueError("matrix is not an isometry within tolerance")
        object.__setattr__(self, "matrix", m)

    @property
    def dim_in(self) -> int:
        return self.matrix.shape[1]


def trace_norm(m) -> float:
    """Trace norm (sum of singular values), computed by SVD."""
    a = as_complex_matrix(m)
    return float(np.linalg.svd(a, compute_uv=False).sum())


def _herm_trace_norm(m: np.ndarray) -> float:
    # fast path for Hermitian arguments: sum of |eigenvalues|
    return float(np.abs(np.linalg.eigvalsh(m)).sum())


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Trace distance (1/2)||rho - sigma||_1 in [0, 1]."""
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    return 0.5 * _herm_trace_norm(rho.matrix - sigma.matrix)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    eigs, vecs = np.linalg.eigh(m)
    eigs = np.clip(eigs, 0.0, None)
    return (vecs * np.sqrt(eigs)) @ dagger(vecs)


def fidelity_matrices(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Fidelity ||sqrt(rho) sqrt(sigma)||_1 for raw PSD matrices.

    Computed from the eigenvalues of sqrt(rho) sigma sqrt(rho), with
    eigenvalue clamping at 0 so tiny negative roundoff cannot produce NaN.
    """
    s = _psd_sqrt(rho)
    inner = s @ sigma @ s
    eigs = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    return float(np.sqrt(eigs).sum())


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Fidelity of two quantum states.

    For density matrices this is ||sqrt(rho) sqrt(sigma)||_1; for pure
    states it reduces to the absolute overlap of the vectors.  Symmetric,
    and 1 exactly when the states coincide.
    """
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    return fidelity_matrices(rho.matrix, sigma.matrix)


def bures_angle(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Bures angle arccos F(rho, sigma), in [0, pi/2].

    The fidelity is clamped to [0, 1] before the arccos so floating-point
    overshoot cannot produce NaN.
    """
    f = min(max(fidelity(rho, sigma), 0.0), 1.0)
    return float(np.arccos(f))


def bures_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Bures distance 2 sin(theta/2) for theta the Bures angle."""
    return 2.0 * float(np.sin(bures_angle(rho, sigma) / 2.0))


def sine_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Sine distance sin(theta) for theta the Bures angle."""
    return float(np.sin(bures_angle(rho, sigma)))


def partial_trace(m, dims: tuple, keep: int) -> np.ndarray:
    """Partial trace of a bipartite operator.

    Args:
        m: a (d1*d2) x (d1*d2) matrix on the tensor product, slot 1 major.
        dims: (d1, d2) subsystem dimensions.
        keep: 0 to return the slot-1 reduction (trace out slot 2), 1 for
            the slot-2 reduction.

    The result has the same trace as the input.
    """
    a = as_complex_matrix(m)
    d1, d2 = dims
    if a.shape != (d1 * d2, d1 * d2):
        raise ValueError(f"matrix shape {a.shape} does not match dims {dims}")
    t = a.reshape(d1, d2, d1, d2)
    if keep == 0:
        return np.einsum("ikjk->ij", t)
    if keep == 1:
        return np.einsum("kikj->ij", t)
    raise ValueError("keep must be 0 or 1")


def apply_kraus(kraus, mat: np.ndarray) -> np.ndarray:
    """Apply sum_i K_i M K_i^dag to a raw matrix (no validation)."""
    out = np.zeros((kraus[0].shape[0], kraus[0].shape[0]), dtype=np.complex128)
    for k in kraus:
        out += k @ mat @ dagger(k)
    return out


def apply_channel(ch: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """Apply a channel to a state, returning a validated DensityMatrix."""
    if rho.dim != ch.dim_in:
        raise ValueError(f"state dim {rho.dim} != channel input dim {ch.dim_in}")
    return DensityMatrix(apply_kraus(ch.kraus, rho.matrix))


def stinespring_from_kraus(ch: KrausChannel) -> StinespringIsometry:
    """Stinespring dilation V|psi> = sum_i (K_i|psi>) (x) |i>_E.

    Round trip: Tr_E(V rho V^dag) reproduces the Kraus action, and the
    environment dimension equals the number of Kraus operators.
    """
    n_env = len(ch.kraus)
    v = np.zeros((ch.dim_out * n_env, ch.dim_in), dtype=np.complex128)
    for i, k in enumerate(ch.kraus):
        v[i::n_env, :] = k
    return StinespringIsometry(v, dim_out=ch.dim_out, dim_env=n_env)


def tensor(a, b) -> np.ndarray:
    """Kronecker product, slot 1 (left factor) varying slowest."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def channel_tensor(a: KrausChannel, b: KrausChannel) -> KrausChannel:
    """Tensor product channel; Kraus set is all pairwise products K_i (x) L_j."""
    ops = tuple(np.kron(ka, kb) for ka in a.kraus for kb in b.kraus)
    return KrausChannel(ops)


def extend_with_identity(ch: KrausChannel, dim_ref: int) -> KrausChannel:
    """The channel ch (x) id acting on (input (x) reference)."""
    eye = np.eye(dim_ref, dtype=np.complex128)
    return KrausChannel(tuple(np.kron(k, eye) for k in ch.kraus))
