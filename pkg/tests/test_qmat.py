import math

import numpy as np
import pytest

from chandis.qmat import (
    DensityMatrix,
    KrausChannel,
    PureState,
    StinespringIsometry,
    apply_channel,
    bures_angle,
    bures_distance,
    channel_tensor,
    extend_with_identity,
    fidelity,
    partial_trace,
    sine_distance,
    stinespring_from_kraus,
    tensor,
    trace_distance,
    trace_norm,
)
from chandis.sampling import random_channel, random_density_matrix, random_pure_state

from conftest import basis_dm, pure_dm

PLUS = np.array([1.0, 1.0]) / math.sqrt(2.0)


class TestTraceNorm:
    def test_diagonal(self):
        assert trace_norm(np.diag([1.0, -2.0])) == pytest.approx(3.0)

    def test_zero(self):
        assert trace_norm(np.zeros((3, 3))) == 0.0

    def test_nilpotent(self):
        # single singular value 1
        assert trace_norm(np.array([[0.0, 1.0], [0.0, 0.0]])) == pytest.approx(1.0)

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            trace_norm(np.array([[np.nan, 0.0], [0.0, 1.0]]))


class TestDistances:
    def test_trace_distance_identical(self):
        rho = DensityMatrix(pure_dm([1, 1j]))
        assert trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-12)

    def test_trace_distance_orthogonal(self):
        d0 = DensityMatrix(basis_dm(2, 0))
        d1 = DensityMatrix(basis_dm(2, 1))
        assert trace_distance(d0, d1) == pytest.approx(1.0)

    def test_trace_distance_plus(self):
        d0 = DensityMatrix(basis_dm(2, 0))
        dp = DensityMatrix(pure_dm(PLUS))
        assert trace_distance(d0, dp) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            trace_distance(DensityMatrix(basis_dm(2, 0)), DensityMatrix(basis_dm(3, 0)))

    def test_fidelity_identical(self, rng):
        rho = random_density_matrix(rng, 3)
        assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-9)

    def test_fidelity_orthogonal(self):
        assert fidelity(DensityMatrix(basis_dm(2, 0)), DensityMatrix(basis_dm(2, 1))) == pytest.approx(
            0.0, abs=1e-9
        )

    def test_fidelity_plus(self):
        d0 = DensityMatrix(basis_dm(2, 0))
        dp = DensityMatrix(pure_dm(PLUS))
        assert fidelity(d0, dp) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-12)

    def test_fidelity_symmetric(self, rng):
        a = random_density_matrix(rng, 3)
        b = random_density_matrix(rng, 3)
        assert fidelity(a, b) == pytest.approx(fidelity(b, a), abs=1e-10)

    def test_fidelity_pure_overlap(self, rng):
        u = random_pure_state(rng, 4)
        v = random_pure_state(rng, 4)
        overlap = abs(np.vdot(u.amplitudes, v.amplitudes))
        # rank-deficient inputs cost a little precision in the eigh route
        assert fidelity(u.density(), v.density()) == pytest.approx(overlap, abs=1e-8)

    def test_bures_angle_values(self):
        d0 = DensityMatrix(basis_dm(2, 0))
        d1 = DensityMatrix(basis_dm(2, 1))
        dp = DensityMatrix(pure_dm(PLUS))
        assert bures_angle(d0, d0) == pytest.approx(0.0, abs=1e-6)
        assert bures_angle(d0, d1) == pytest.approx(math.pi / 2.0)
        assert bures_angle(d0, dp) == pytest.approx(math.pi / 4.0, abs=1e-12)

    def test_derived_distances(self, rng):
        a = random_density_matrix(rng, 3)
        b = random_density_matrix(rng, 3)
        theta = bures_angle(a, b)
        assert bures_distance(a, b) == pytest.approx(2.0 * math.sin(theta / 2.0))
        assert sine_distance(a, b) == pytest.approx(math.sin(theta))


class TestPartialTrace:
    def test_keep_first(self):
        m = np.kron(basis_dm(2, 0), basis_dm(2, 0))
        np.testing.assert_allclose(partial_trace(m, (2, 2), 0), basis_dm(2, 0))

    def test_factorized(self, rng):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        np.testing.assert_allclose(
            partial_trace(np.kron(a, b), (2, 3), 1), np.trace(a) * b, atol=1e-12
        )

    def test_bell_state(self):
        bell = pure_dm([1, 0, 0, 1])
        np.testing.assert_allclose(partial_trace(bell, (2, 2), 1), np.eye(2) / 2, atol=1e-12)

    def test_trace_preserved(self, rng):
        m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        assert np.trace(partial_trace(m, (2, 3), 0)) == pytest.approx(np.trace(m))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            partial_trace(np.eye(5), (2, 3), 0)


class TestChannels:
    def test_identity_apply(self, rng):
        rho = random_density_matrix(rng, 3)
        out = apply_channel(KrausChannel.identity(3), rho)
        np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-12)

    def test_output_is_state(self, rng):
        ch = random_channel(rng, 3, n_kraus=3)
        out = apply_channel(ch, random_density_matrix(rng, 3))
        assert np.trace(out.matrix).real == pytest.approx(1.0, abs=1e-9)

    def test_cptp_validation(self):
        with pytest.raises(ValueError):
            KrausChannel((np.eye(2) * 0.5,))

    def test_stinespring_identity(self):
        iso = stinespring_from_kraus(KrausChannel.identity(2))
        assert iso.dim_env == 1
        np.testing.assert_allclose(iso.matrix, np.eye(2))

    def test_stinespring_roundtrip(self, rng):
        ch = random_channel(rng, 4, n_kraus=3)
        iso = stinespring_from_kraus(ch)
        rho = random_density_matrix(rng, 4)
        lifted = iso.matrix @ rho.matrix @ iso.matrix.conj().T
        reduced = partial_trace(lifted, (ch.dim_out, iso.dim_env), 0)
        np.testing.assert_allclose(reduced, apply_channel(ch, rho).matrix, atol=1e-12)

    def test_isometry_validation(self):
        with pytest.raises(ValueError):
            StinespringIsometry(np.ones((4, 2)), dim_out=2, dim_env=2)

    def test_tensor_roundtrip(self, rng):
        rho = random_density_matrix(rng, 3).matrix
        lifted = tensor(np.eye(2) / 2, rho)
        np.testing.assert_allclose(partial_trace(lifted, (2, 3), 1), rho, atol=1e-12)

    def test_channel_tensor_identity(self, rng):
        ch = channel_tensor(KrausChannel.identity(2), KrausChannel.identity(3))
        rho = random_density_matrix(rng, 6)
        np.testing.assert_allclose(apply_channel(ch, rho).matrix, rho.matrix, atol=1e-12)

    def test_channel_tensor_factorized(self, rng):
        ch = random_channel(rng, 2, n_kraus=2)
        big = extend_with_identity(ch, 3)
        rho = random_density_matrix(rng, 2).matrix
        sig = random_density_matrix(rng, 3).matrix
        out = np.zeros((6, 6), dtype=np.complex128)
        for k in big.kraus:
            out += k @ np.kron(rho, sig) @ k.conj().T
        expected = np.kron(
            apply_channel(ch, DensityMatrix(rho)).matrix, sig
        )
        np.testing.assert_allclose(out, expected, atol=1e-12)


class TestValidation:
    def test_density_requires_unit_trace(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.eye(2))

    def test_density_requires_psd(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.diag([1.5, -0.5]))

    def test_density_requires_hermitian(self):
        m = np.array([[0.5, 0.3], [0.0, 0.5]], dtype=np.complex128)
        with pytest.raises(ValueError):
            DensityMatrix(m)

    def test_pure_state_norm(self):
        with pytest.raises(ValueError):
            PureState(np.array([1.0, 1.0]))
