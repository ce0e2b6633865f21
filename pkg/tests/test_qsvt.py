"""Certified inverse polynomials and singular-value transforms."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qprecon.numlin import LogicalOperator, spectral_norm, unitary_completion
from qprecon.qsvt import (
    ConvergenceFailureError,
    OddPolynomial,
    SingularError,
    inverse_poly,
    qsvt_solve,
    svt_apply,
)

# Degrees the search lands on, pinned against the measured values; the cap
# is the documented ceiling 10 log(1/eps') / delta.
PINNED_DEGREES = [
    (0.5, 1e-3, 77),
    (0.25, 1e-4, 249),
    (0.1, 1e-6, 909),
]


@pytest.mark.parametrize("delta,eps_prime,degree", PINNED_DEGREES)
def test_inverse_poly_pinned_degrees(delta, eps_prime, degree):
    poly = inverse_poly(delta, eps_prime)
    assert poly.degree == degree
    assert poly.degree <= 10.0 * np.log(1.0 / eps_prime) / delta


@pytest.mark.parametrize("delta,eps_prime", [(0.5, 1e-3), (0.1, 1e-6)])
def test_inverse_poly_certificate_holds(delta, eps_prime):
    poly = inverse_poly(delta, eps_prime)
    # odd in the Chebyshev basis: every even coefficient vanishes
    assert np.max(np.abs(poly.cheb_coeffs[0::2])) == 0.0

    x = np.linspace(-1.0, 1.0, 40_001)
    assert np.max(np.abs(poly.evaluate(x))) <= 1.0 + 1e-8

    window = np.linspace(delta, 1.0, 20_001)
    err = np.max(np.abs(poly.evaluate(window) - 0.75 * delta / window))
    assert err <= eps_prime * 1.0000001


def test_inverse_poly_rejects_bad_inputs():
    with pytest.raises(ValueError):
        inverse_poly(0.0, 1e-4)
    with pytest.raises(ValueError):
        inverse_poly(1.5, 1e-4)
    with pytest.raises(ValueError):
        inverse_poly(0.1, 0.5)


def test_odd_polynomial_json_roundtrip():
    poly = inverse_poly(0.5, 1e-3)
    back = OddPolynomial.from_json(poly.to_json())
    assert back.delta == poly.delta
    assert back.eps_prime == poly.eps_prime
    assert np.array_equal(back.cheb_coeffs, poly.cheb_coeffs)


# ---------------------------------------------------------------------------
# singular-value transforms
# ---------------------------------------------------------------------------

def test_svt_apply_is_the_matrix_function_on_hermitian_input(make_hermitian):
    h = make_hermitian(8, norm=0.9)
    h = h + 1.2 * np.eye(8)  # positive definite, norm <= 2.1
    lo = LogicalOperator(matrix=h, alpha=2.2)

    out = svt_apply(lambda x: x**3, lo)
    evals, vecs = np.linalg.eigh(h / 2.2)
    oracle = (vecs * evals**3) @ vecs.conj().T
    assert spectral_norm(out.matrix - oracle) <= 1e-12
    assert out.alpha == 1.0


def test_svt_apply_adjoint_flips_the_frame(rng):
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    lo = LogicalOperator(matrix=a, alpha=spectral_norm(a) * 1.1)
    f = lambda x: 0.5 * x - 0.1 * x**3  # noqa: E731 - tiny local target
    fwd = svt_apply(f, lo)
    adj = svt_apply(f, lo, adjoint=True)
    assert spectral_norm(adj.matrix - fwd.matrix.conj().T) <= 1e-12


def test_svt_apply_with_inverse_poly_inverts(make_invertible):
    w = make_invertible(6, smin=0.6, smax=1.4)
    alpha = 2.0  # singular values of w/alpha sit inside [0.3, 0.7]
    poly = inverse_poly(0.3, 1e-6)
    out = svt_apply(poly, LogicalOperator(matrix=w, alpha=alpha), adjoint=True)
    approx = (4.0 / (3.0 * poly.delta)) * out.matrix / alpha
    assert spectral_norm(approx - np.linalg.inv(w)) <= 1e-5


def test_svt_apply_block_encoding_stays_explicit(rng):
    g = rng.standard_normal((4, 4))
    g = 0.8 * g / spectral_norm(g)
    enc = unitary_completion(g, 1)
    out = svt_apply(lambda x: x, enc)
    assert out.m == enc.m + 1
    u, s, vh = np.linalg.svd(g)
    assert spectral_norm(out.alpha * out.block() - (u * s) @ vh) <= 1e-10


# ---------------------------------------------------------------------------
# end-to-end solves
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("dim", [2, 5, 12])
def test_qsvt_solve_matches_dense_solve(make_invertible, dim):
    a = make_invertible(dim, smin=0.5, smax=2.0)
    rng = np.random.default_rng(dim)
    b = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    x, report = qsvt_solve(a, b, eps=1e-8)
    exact = np.linalg.solve(a, b)
    exact = exact / np.linalg.norm(exact)
    assert np.linalg.norm(x - exact) <= 1e-8
    assert report.queries_ua_prime >= 1
    assert report.achieved_error_budget <= 1e-8


def test_qsvt_solve_rejects_singular_and_zero_rhs():
    a = np.diag([1.0, 0.0])
    with pytest.raises(SingularError):
        qsvt_solve(a, np.ones(2), 1e-4)
    with pytest.raises(ValueError, match="zero"):
        qsvt_solve(np.eye(2), np.zeros(2), 1e-4)


@settings(max_examples=15, deadline=None)
@given(dim=st.integers(2, 8), seed=st.integers(0, 2**32 - 1))
def test_qsvt_solve_property(dim, seed):
    rng = np.random.default_rng(seed)
    q1, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    q2, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    a = (q1 * rng.uniform(0.4, 1.6, dim)) @ q2.T
    b = rng.standard_normal(dim)
    x, _ = qsvt_solve(a, b, eps=1e-6)
    exact = np.linalg.solve(a, b)
    assert np.linalg.norm(x - exact / np.linalg.norm(exact)) <= 1e-6
