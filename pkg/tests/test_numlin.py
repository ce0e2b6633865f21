"""Encoding algebra checked against dense linear-algebra oracles."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qprecon.numlin import (
    MAX_TOTAL_QUBITS,
    BlockEncoding,
    CostReport,
    DimensionMismatchError,
    DimensionTooLargeError,
    EmptyCombinationError,
    LogicalOperator,
    NormTooLargeError,
    NotUnitaryError,
    be_lcu,
    be_product,
    block_encoding_from_json,
    block_encoding_to_json,
    dilate_hermitian,
    extract,
    identity_encoding,
    matrix_from_json,
    matrix_to_json,
    qft_matrix,
    spectral_norm,
    to_block_encoding,
    to_logical,
    unitary_completion,
)

UNITARITY_TOL = 1e-10


def _random_block(rng, n, norm=0.9):
    dim = 2**n
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return norm * g / spectral_norm(g)


def _unitarity_defect(u):
    return spectral_norm(u.conj().T @ u - np.eye(u.shape[0]))


def test_spectral_norm_matches_svd(rng):
    a = rng.standard_normal((7, 5)) + 1j * rng.standard_normal((7, 5))
    assert spectral_norm(a) == pytest.approx(
        float(np.linalg.svd(a, compute_uv=False)[0]), rel=1e-13
    )


# ---------------------------------------------------------------------------
# completion
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("n,m", [(1, 1), (2, 1), (2, 2), (3, 1), (3, 3)])
def test_unitary_completion_embeds_the_block(rng, n, m):
    g = _random_block(rng, n)
    enc = unitary_completion(g, m, alpha=2.5)
    dim = 2**n
    assert enc.unitary.shape == (2 ** (n + m),) * 2
    assert np.allclose(enc.unitary[:dim, :dim], g, atol=1e-13)
    assert _unitarity_defect(enc.unitary) <= UNITARITY_TOL
    assert np.allclose(extract(enc), 2.5 * g, atol=1e-12)


def test_unitary_completion_of_a_unitary_block(rng):
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    enc = unitary_completion(q, 1)
    # a unitary block completes with vanishing off-diagonal coupling
    assert np.allclose(enc.unitary[:4, 4:], 0.0, atol=1e-7)
    assert _unitarity_defect(enc.unitary) <= UNITARITY_TOL


def test_unitary_completion_rejects_expansion(rng):
    g = 1.5 * _random_block(rng, 2, norm=1.0)
    with pytest.raises(NormTooLargeError):
        unitary_completion(g)


def test_unitary_completion_rejects_oversized_register():
    g = np.zeros((2**13, 2**13))
    with pytest.raises(DimensionTooLargeError):
        unitary_completion(g, 2)


def test_unitary_completion_rejects_non_power_of_two():
    with pytest.raises(DimensionMismatchError):
        unitary_completion(np.zeros((3, 3)))


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 3), norm=st.floats(0.05, 1.0), seed=st.integers(0, 2**32 - 1))
def test_unitary_completion_sound_for_any_contraction(n, norm, seed):
    g = _random_block(np.random.default_rng(seed), n, norm=norm)
    enc = unitary_completion(g, 1, alpha=1.0 / max(norm, 0.05))
    dim = 2**n
    assert spectral_norm(enc.unitary[:dim, :dim] - g) <= 1e-12
    assert _unitarity_defect(enc.unitary) <= UNITARITY_TOL


# ---------------------------------------------------------------------------
# encoding containers
# ---------------------------------------------------------------------------

def test_block_encoding_rejects_non_unitary():
    u = np.eye(4, dtype=np.complex128)
    u[0, 0] = 1.1
    with pytest.raises(NotUnitaryError):
        BlockEncoding(unitary=u, n=1, m=1, alpha=1.0)


def test_block_encoding_rejects_bad_alpha():
    with pytest.raises(ValueError, match="alpha"):
        BlockEncoding(unitary=np.eye(4, dtype=np.complex128), n=1, m=1, alpha=0.0)


def test_block_encoding_enforces_qubit_cap():
    with pytest.raises(DimensionTooLargeError):
        identity_encoding(MAX_TOTAL_QUBITS, 1)


def test_logical_operator_norm_bookkeeping(rng):
    a = _random_block(rng, 2, norm=1.8)
    with pytest.raises(NormTooLargeError):
        LogicalOperator(matrix=a, alpha=1.0)
    lo = LogicalOperator(matrix=a, alpha=2.0)
    assert np.array_equal(extract(lo), a)


def test_logical_operator_allows_vanishing_term():
    lo = LogicalOperator(matrix=np.zeros((4, 4)), alpha=0.0)
    assert lo.alpha == 0.0


def test_conversion_roundtrip(rng):
    a = _random_block(rng, 2, norm=1.2)
    lo = LogicalOperator(matrix=a, alpha=1.5)
    back = to_logical(to_block_encoding(lo, m=2))
    assert spectral_norm(back.matrix - a) <= 1e-12
    assert back.alpha == lo.alpha


# ---------------------------------------------------------------------------
# products and combinations
# ---------------------------------------------------------------------------

def test_be_product_multiplies_blocks_and_bookkeeping(rng):
    ga, gb = _random_block(rng, 2), _random_block(rng, 2)
    ea = unitary_completion(ga, 1, alpha=2.0)
    eb = unitary_completion(gb, 2, alpha=0.5)
    prod = be_product(ea, eb)
    assert prod.alpha == pytest.approx(1.0)
    assert prod.m == 3
    assert spectral_norm(extract(prod) - extract(ea) @ extract(eb)) <= 1e-12
    assert _unitarity_defect(prod.unitary) <= UNITARITY_TOL


def test_be_product_rejects_mismatched_systems(rng):
    ea = unitary_completion(_random_block(rng, 1), 1)
    eb = unitary_completion(_random_block(rng, 2), 1)
    with pytest.raises(DimensionMismatchError):
        be_product(ea, eb)


def test_be_lcu_matches_the_dense_sum(rng):
    blocks = [_random_block(rng, 2) for _ in range(3)]
    alphas = [1.0, 2.0, 0.7]
    encs = [unitary_completion(g, 1, alpha=al) for g, al in zip(blocks, alphas)]
    coeffs = np.array([0.5, -1.25, 0.3 + 0.4j])
    comb = be_lcu(coeffs, encs)

    target = sum(c * al * g for c, al, g in zip(coeffs, alphas, blocks))
    assert comb.alpha == pytest.approx(sum(abs(c) * al for c, al in zip(coeffs, alphas)))
    assert spectral_norm(extract(comb) - target) <= 1e-11
    assert _unitarity_defect(comb.unitary) <= UNITARITY_TOL


def test_be_lcu_drops_zero_terms_and_rejects_empty(rng):
    enc = unitary_completion(_random_block(rng, 1), 1, alpha=1.3)
    single = be_lcu(np.array([0.0, -2.0]), [enc, enc])
    assert single.alpha == pytest.approx(2.0 * 1.3)
    assert spectral_norm(extract(single) + 2.0 * extract(enc)) <= 1e-12
    with pytest.raises(EmptyCombinationError):
        be_lcu(np.array([0.0, 0.0]), [enc, enc])


def test_dilate_hermitian_spectrum(rng):
    a = _random_block(rng, 2, norm=0.8)
    lo = LogicalOperator(matrix=a, alpha=1.0)
    dil = dilate_hermitian(lo)
    assert spectral_norm(dil.matrix - dil.matrix.conj().T) == 0.0
    eigs = np.sort(np.linalg.eigvalsh(dil.matrix))
    svals = np.linalg.svd(a, compute_uv=False)
    expected = np.sort(np.concatenate([svals, -svals]))
    assert np.allclose(eigs, expected, atol=1e-12)


# ---------------------------------------------------------------------------
# small utilities
# ---------------------------------------------------------------------------

def test_identity_encoding_block():
    enc = identity_encoding(2, m=2)
    assert np.array_equal(extract(enc), np.eye(4))


@pytest.mark.parametrize("n", [1, 2, 4])
def test_qft_matrix_is_the_dft(n):
    dim = 2**n
    j = np.arange(dim)
    oracle = np.exp(2j * np.pi * np.outer(j, j) / dim) / np.sqrt(dim)
    f = qft_matrix(n)
    assert np.allclose(f, oracle, atol=1e-13)
    assert _unitarity_defect(f) <= UNITARITY_TOL


def test_matrix_json_roundtrip(rng):
    a = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    assert np.array_equal(matrix_from_json(matrix_to_json(a)), a)


def test_block_encoding_json_roundtrip(rng):
    enc = unitary_completion(_random_block(rng, 2), 1, alpha=1.7, eps=1e-9)
    back = block_encoding_from_json(block_encoding_to_json(enc))
    assert np.array_equal(back.unitary, enc.unitary)
    assert (back.n, back.m, back.alpha, back.eps) == (enc.n, enc.m, enc.alpha, enc.eps)


def test_cost_report_defaults_to_zero():
    rep = CostReport()
    assert rep.queries_ua_prime == 0
    assert rep.queries_ub == 0
    assert rep.achieved_error_budget == 0.0
