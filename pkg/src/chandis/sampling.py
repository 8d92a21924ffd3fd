"""Seeded random generators for states, channels and unitaries.

Used by the test suite and by the ``verify`` CLI command; all functions
take an explicit ``numpy.random.Generator`` so runs are reproducible.
"""

from __future__ import annotations

import numpy as np

from .qmat import DensityMatrix, KrausChannel, PureState, dagger


def random_pure_state(rng: np.random.Generator, dim: int) -> PureState:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return PureState(v / np.linalg.norm(v))


def random_density_matrix(rng: np.random.Generator, dim: int, rank: int | None = None) -> DensityMatrix:
    """Ginibre-induced random density matrix (full rank by default)."""
    r = rank or dim
    g = rng.normal(size=(dim, r)) + 1j * rng.normal(size=(dim, r))
    m = g @ dagger(g)
    return DensityMatrix(m / np.trace(m).real)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_channel(
    rng: np.random.Generator, dim_in: int, dim_out: int | None = None, n_kraus: int = 2
) -> KrausChannel:
    """Random CPTP channel with the given number of Kraus operators.

    Gaussian Kraus candidates are normalized by the inverse square root of
    sum_i G_i^dag G_i, which enforces trace preservation exactly.
    """
    dim_out = dim_out or dim_in
    gs = [
        rng.normal(size=(dim_out, dim_in)) + 1j * rng.normal(size=(dim_out, dim_in))
        for _ in range(n_kraus)
    ]
    acc = np.zeros((dim_in, dim_in), dtype=np.complex128)
    for g in gs:
        acc += dagger(g) @ g
    eigs, vecs = np.linalg.eigh(acc)
    inv_sqrt = (vecs / np.sqrt(eigs)) @ dagger(vecs)
    return KrausChannel(tuple(g @ inv_sqrt for g in gs))
