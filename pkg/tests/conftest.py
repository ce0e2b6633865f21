"""Shared fixtures: seeded generators and random-operator factories."""
import numpy as np
import pytest


@pytest.fixture
def rng():
    """Fresh deterministic generator; reseed locally when a test needs more."""
    return np.random.default_rng(1724)


@pytest.fixture
def make_hermitian(rng):
    """Factory for a random Hermitian matrix of given dimension and norm."""

    def make(dim, norm=1.0, generator=None):
        g = generator if generator is not None else rng
        raw = g.standard_normal((dim, dim)) + 1j * g.standard_normal((dim, dim))
        h = (raw + raw.conj().T) / 2.0
        return norm * h / np.linalg.norm(h, ord=2)

    return make


@pytest.fixture
def make_invertible(rng):
    """Factory for a random matrix with singular values in [smin, smax]."""

    def make(dim, smin=0.5, smax=2.0, generator=None):
        g = generator if generator is not None else rng
        q1, _ = np.linalg.qr(
            g.standard_normal((dim, dim)) + 1j * g.standard_normal((dim, dim))
        )
        q2, _ = np.linalg.qr(
            g.standard_normal((dim, dim)) + 1j * g.standard_normal((dim, dim))
        )
        s = g.uniform(smin, smax, dim)
        return (q1 * s) @ q2.conj().T

    return make
