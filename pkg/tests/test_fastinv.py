"""Inversion of diagonal / diagonalized / one-sparse operators.

Every encoding is checked against the dense inverse computed by numpy,
which never sees the oracle-side shortcut being tested.
"""

import numpy as np
import pytest

from qprecon import (
    extract,
    DiagonalOracle,
    OneSparseMatrix,
    build_elliptic,
    fast_invert_diagonal,
    fast_invert_normal,
    fast_invert_one_sparse,
    inversion_success_probability,
    qft_matrix,
)
from qprecon.fastinv import SingularOneSparseError, ZeroDiagonalError
from qprecon.numlin import DimensionMismatchError, NotUnitaryError


def _unitarity_defect(u):
    return np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]), ord=2)


def _random_values(rng, n, lo=0.2, hi=3.0):
    dim = 2**n
    mod = rng.uniform(lo, hi, size=dim)
    phase = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=dim))
    return mod * phase


class TestDiagonalOracle:
    def test_alpha_prime_is_inverse_norm(self, rng):
        values = _random_values(rng, 3)
        oracle = DiagonalOracle(n=3, values=values)
        expected = np.linalg.norm(np.diag(1.0 / values), ord=2)
        assert oracle.alpha_prime == pytest.approx(expected, rel=1e-14)

    def test_zero_entry_rejected(self):
        with pytest.raises(ZeroDiagonalError):
            DiagonalOracle(n=1, values=np.array([1.0, 0.0]))

    def test_size_mismatch_rejected(self):
        with pytest.raises(DimensionMismatchError):
            DiagonalOracle(n=2, values=np.ones(3))


class TestInvertDiagonal:
    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_extract_matches_dense_inverse(self, rng, n):
        values = _random_values(rng, n)
        oracle = DiagonalOracle(n=n, values=values)
        enc = fast_invert_diagonal(oracle)
        target = np.diag(1.0 / values)
        assert np.linalg.norm(extract(enc) - target, ord=2) < 1e-12
        assert enc.alpha == pytest.approx(oracle.alpha_prime)
        assert enc.m == 1
        assert _unitarity_defect(enc.unitary) < 1e-10

    def test_real_positive_diagonal(self):
        oracle = DiagonalOracle(n=2, values=np.array([1.0, 2.0, 4.0, 8.0]))
        enc = fast_invert_diagonal(oracle)
        assert enc.alpha == pytest.approx(1.0)
        block = enc.unitary[:4, :4]
        assert np.allclose(np.diag(block), [1.0, 0.5, 0.25, 0.125])


class TestInvertNormal:
    def test_fourier_diagonalized_operator(self, rng):
        n = 3
        values = _random_values(rng, n, lo=0.5, hi=2.0)
        oracle = DiagonalOracle(n=n, values=values)
        v = qft_matrix(n)
        enc, report = fast_invert_normal(v, oracle)
        dense = (v * values) @ v.conj().T
        err = np.linalg.norm(extract(enc) - np.linalg.inv(dense), ord=2)
        assert err < 1e-9
        assert report.primitive_gate_proxy == 4

    def test_random_unitary_basis(self, rng, make_hermitian):
        n = 2
        v = np.linalg.qr(
            rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        )[0]
        oracle = DiagonalOracle(n=n, values=_random_values(rng, n))
        enc, _ = fast_invert_normal(v, oracle)
        dense = (v * oracle.values) @ v.conj().T
        assert np.linalg.norm(extract(enc) - np.linalg.inv(dense), ord=2) < 1e-9

    def test_nonunitary_basis_rejected(self, rng):
        oracle = DiagonalOracle(n=1, values=np.array([1.0, 2.0]))
        with pytest.raises(NotUnitaryError):
            fast_invert_normal(np.array([[1.0, 0.5], [0.0, 1.0]]), oracle)

    def test_basis_shape_mismatch(self):
        oracle = DiagonalOracle(n=2, values=np.ones(4))
        with pytest.raises(DimensionMismatchError):
            fast_invert_normal(np.eye(2), oracle)


class TestSuccessProbability:
    def test_matches_direct_formula(self, rng):
        oracle = DiagonalOracle(n=3, values=_random_values(rng, 3))
        b = rng.normal(size=8) + 1j * rng.normal(size=8)
        p = inversion_success_probability(oracle, b)
        b_hat = b / np.linalg.norm(b)
        expected = np.linalg.norm(b_hat / oracle.values) ** 2 / oracle.alpha_prime**2
        assert p == pytest.approx(expected, rel=1e-13)
        assert 0.0 < p <= 1.0 + 1e-12

    def test_uniform_modulus_gives_unity(self):
        # all diagonal entries of equal modulus: the encoded inverse is
        # unitary up to phase, so the ancilla always reads 0
        values = 0.7 * np.exp(1j * np.array([0.1, 1.3, -2.0, 0.5]))
        oracle = DiagonalOracle(n=2, values=values)
        p = inversion_success_probability(oracle, np.array([1.0, 2.0, 0.0, -1.0]))
        assert p == pytest.approx(1.0, abs=1e-13)

    def test_zero_state_rejected(self):
        oracle = DiagonalOracle(n=1, values=np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            inversion_success_probability(oracle, np.zeros(2))


class TestOneSparse:
    def test_dense_round_trip(self, rng):
        f = rng.permutation(8)
        values = _random_values(rng, 3)
        mat = OneSparseMatrix(f=f, values=values)
        again = OneSparseMatrix.from_dense(mat.to_dense())
        assert np.array_equal(again.f, mat.f)
        assert np.allclose(again.values, mat.values)

    def test_non_permutation_rejected(self):
        with pytest.raises(SingularOneSparseError):
            OneSparseMatrix(f=np.array([0, 0]), values=np.array([1.0, 1.0]))

    def test_zero_value_rejected(self):
        with pytest.raises(SingularOneSparseError):
            OneSparseMatrix(f=np.array([1, 0]), values=np.array([1.0, 0.0]))

    def test_from_dense_rejects_two_nonzeros_per_row(self):
        a = np.array([[1.0, 1.0], [0.0, 1.0]])
        with pytest.raises(SingularOneSparseError):
            OneSparseMatrix.from_dense(a)

    def test_from_dense_rejects_nonsquare(self):
        with pytest.raises(DimensionMismatchError):
            OneSparseMatrix.from_dense(np.ones((2, 3)))

    def test_length_mismatch_rejected(self):
        with pytest.raises(DimensionMismatchError):
            OneSparseMatrix(f=np.array([0, 1]), values=np.array([1.0]))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_inverse_encoding(self, rng, n):
        dim = 2**n
        mat = OneSparseMatrix(f=rng.permutation(dim), values=_random_values(rng, n))
        enc, report = fast_invert_one_sparse(mat)
        target = np.linalg.inv(mat.to_dense())
        assert np.linalg.norm(extract(enc) - target, ord=2) < 1e-12
        assert enc.alpha == pytest.approx(np.linalg.norm(target, ord=2), rel=1e-13)
        assert _unitarity_defect(enc.unitary) < 1e-10
        assert report.primitive_gate_proxy == 4

    def test_non_power_of_two_rejected(self):
        mat = OneSparseMatrix(f=np.array([2, 0, 1]), values=np.ones(3))
        with pytest.raises(DimensionMismatchError):
            fast_invert_one_sparse(mat)


class TestEllipticSystem:
    def test_matrix_against_fft_oracle(self):
        sys = build_elliptic(1, 3, 0.5)
        m_pts = 8
        # independent assembly: apply -Laplacian + 1 via numpy's FFT
        ident = np.eye(m_pts)
        freq = 2.0 * np.pi * np.fft.fftfreq(m_pts, d=0.5)
        applied = np.fft.ifft(
            (freq**2 + 1.0)[:, None] * np.fft.fft(ident, axis=0), axis=0
        )
        assert np.linalg.norm(sys.matrix() - applied, ord=2) < 1e-12

    def test_eigenvalues_are_shifted_wavenumbers(self):
        sys = build_elliptic(2, 2, 1.0)
        eig = np.linalg.eigvalsh(sys.matrix())
        assert np.allclose(np.sort(sys.oracle.values.real), eig)
        assert np.min(sys.oracle.values.real) == pytest.approx(1.0)
        assert sys.norm_a == pytest.approx(np.max(eig))
        assert sys.norm_a_inv == pytest.approx(1.0 / np.min(eig))

    def test_constant_rhs_has_unit_solution_ratio(self):
        sys = build_elliptic(1, 4, 0.3)
        assert sys.xi == 1.0
        # the constant vector is the ground eigenvector (eigenvalue 1)
        sol = np.linalg.solve(sys.matrix(), sys.rhs)
        assert np.linalg.norm(sol - sys.rhs) < 1e-12

    def test_exp_decay_rhs_ratio(self):
        sys = build_elliptic(1, 4, 0.5, rhs="exp_decay")
        sol = np.linalg.solve(sys.matrix(), sys.rhs)
        expected = np.linalg.norm(sol) / np.linalg.norm(sys.rhs)
        assert sys.xi == pytest.approx(expected, rel=1e-12)
        assert 0.0 < sys.xi < 1.0

    def test_qubit_cap(self):
        with pytest.raises(DimensionMismatchError):
            build_elliptic(3, 5, 1.0)

    def test_bad_rhs_name(self):
        with pytest.raises(ValueError, match="unknown rhs"):
            build_elliptic(1, 2, 1.0, rhs="gaussian")

    def test_bad_geometry(self):
        with pytest.raises(ValueError):
            build_elliptic(0, 2, 1.0)
        with pytest.raises(ValueError):
            build_elliptic(1, 2, -1.0)
