import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def basis_dm(dim, index):
    m = np.zeros((dim, dim), dtype=np.complex128)
    m[index, index] = 1.0
    return m


def pure_dm(vec):
    v = np.asarray(vec, dtype=np.complex128)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())
