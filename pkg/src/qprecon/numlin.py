"""Dense block-encoding algebra.

A block encoding represents a (generally non-unitary) matrix ``A`` as the
upper-left block of a larger unitary ``U``: with ``m`` ancilla qubits on top
of ``n`` system qubits,

    || alpha * (<0^m| x I) U (|0^m> x I) - A || <= eps.

Everything here is explicit dense linear algebra: unitaries are square numpy
arrays, the ancilla register is the *major* index (basis ordering
``|ancilla> x |system>``), and the encoded block is literally
``U[:2**n, :2**n]``.  The module provides the completion that turns a
contraction into a unitary, extraction, products, linear combinations, the
Hermitian dilation, and explicit Fourier matrices, plus a matrix-level
``LogicalOperator`` form for sizes where carrying the full unitary around is
pointless.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "MAX_TOTAL_QUBITS",
    "UNITARITY_TOL",
    "DimensionMismatchError",
    "DimensionTooLargeError",
    "EmptyCombinationError",
    "NormTooLargeError",
    "NotUnitaryError",
    "CostReport",
    "BlockEncoding",
    "LogicalOperator",
    "spectral_norm",
    "matrix_to_json",
    "matrix_from_json",
    "block_encoding_to_json",
    "block_encoding_from_json",
    "unitary_completion",
    "extract",
    "to_logical",
    "to_block_encoding",
    "identity_encoding",
    "be_product",
    "be_lcu",
    "dilate_hermitian",
    "qft_matrix",
]

#: Hard cap on n + m for explicit unitaries (memory guard: 2^14 x 2^14 complex).
MAX_TOTAL_QUBITS = 14

#: Every explicit unitary must satisfy ||U^dag U - I|| below this.
UNITARITY_TOL = 1e-10


class DimensionMismatchError(ValueError):
    """Operands do not act on compatible spaces."""


class DimensionTooLargeError(ValueError):
    """The construction would exceed the explicit-unitary qubit cap."""


class EmptyCombinationError(ValueError):
    """A linear combination was requested over no terms."""


class NormTooLargeError(ValueError):
    """A block that must be a contraction has spectral norm above one."""


class NotUnitaryError(ValueError):
    """A matrix that must be unitary fails the unitarity tolerance."""


def _as_matrix(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D complex array with finite entries."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionMismatchError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def spectral_norm(a: np.ndarray) -> float:
    """Largest singular value of ``a``."""
    a = np.atleast_2d(np.asarray(a, dtype=np.complex128))
    return float(np.linalg.norm(a, 2))


def _check_power_of_two(dim: int, name: str) -> int:
    n = int(dim).bit_length() - 1
    if dim <= 0 or 2**n != dim:
        raise DimensionMismatchError(f"{name} dimension {dim} is not a power of two")
    return n


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def matrix_to_json(a: np.ndarray) -> dict:
    """Serialize a dense complex matrix as row-major real/imaginary parts."""
    a = _as_matrix(a)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "re": a.real.tolist(),
        "im": a.imag.tolist(),
    }


def matrix_from_json(d: dict) -> np.ndarray:
    """Inverse of :func:`matrix_to_json`."""
    re = np.asarray(d["re"], dtype=np.float64)
    im = np.asarray(d["im"], dtype=np.float64)
    a = re + 1j * im
    if a.shape != (d["rows"], d["cols"]):
        raise DimensionMismatchError(
            f"declared shape ({d['rows']}, {d['cols']}) does not match data {a.shape}"
        )
    return a


# ---------------------------------------------------------------------------
# core types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CostReport:
    """Abstract query/gate tallies for one algorithmic run.

    Counts are conceptual oracle uses (what a coherent implementation would
    consume), not wall-clock measurements.  ``achieved_error_budget`` is the
    total error bound the producing routine claims for its output.
    """

    queries_ua_prime: int = 0      # uses of the (inverse-)A encoding
    queries_ub: int = 0            # uses of the B encoding
    queries_rhs_prep: int = 0      # uses of the right-hand-side preparation
    queries_state_prep: int = 0    # uses of the reference-state preparation
    primitive_gate_proxy: int = 0  # proxy for additional primitive gates
    achieved_error_budget: float = 0.0


@dataclass(frozen=True)
class BlockEncoding:
    """An explicit ``(alpha, m, eps)`` block encoding on ``n`` system qubits.

    Parameters
    ----------
    unitary:
        Square array of dimension ``2**(n+m)``; validated against
        :data:`UNITARITY_TOL` on construction.
    n, m:
        System and ancilla qubit counts.
    alpha:
        Subnormalization factor (positive).
    eps:
        Declared error bound on the encoded block (non-negative).
    """

    unitary: np.ndarray
    n: int
    m: int
    alpha: float
    eps: float = 0.0

    def __post_init__(self) -> None:
        u = _as_matrix(self.unitary, "unitary")
        object.__setattr__(self, "unitary", u)
        if self.n < 0 or self.m < 0:
            raise DimensionMismatchError(f"negative qubit counts n={self.n}, m={self.m}")
        if self.n + self.m > MAX_TOTAL_QUBITS:
            raise DimensionTooLargeError(
                f"n + m = {self.n + self.m} exceeds the cap of {MAX_TOTAL_QUBITS} qubits"
            )
        dim = 2 ** (self.n + self.m)
        if u.shape != (dim, dim):
            raise DimensionMismatchError(
                f"unitary has shape {u.shape}, expected ({dim}, {dim}) for n={self.n}, m={self.m}"
            )
        defect = spectral_norm(u.conj().T @ u - np.eye(dim))
        if defect > UNITARITY_TOL:
            raise NotUnitaryError(f"unitarity defect {defect:.3e} exceeds {UNITARITY_TOL:.1e}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.eps < 0:
            raise ValueError(f"eps must be non-negative, got {self.eps}")

    @property
    def dim(self) -> int:
        """System-space dimension ``2**n``."""
        return 2**self.n

    def block(self) -> np.ndarray:
        """Normalized encoded block ``(<0^m| x I) U (|0^m> x I)``."""
        d = self.dim
        return self.unitary[:d, :d]


@dataclass(frozen=True)
class LogicalOperator:
    """Matrix-level stand-in for a block encoding.

    Carries the encoded matrix itself together with the ``(alpha, eps)``
    bookkeeping, for pipelines whose ancilla growth would push an explicit
    unitary past :data:`MAX_TOTAL_QUBITS`.  Invariant:
    ``||matrix|| <= alpha + eps`` (up to roundoff).
    """

    matrix: np.ndarray
    alpha: float
    eps: float = 0.0

    def __post_init__(self) -> None:
        a = _as_matrix(self.matrix, "matrix")
        if a.shape[0] != a.shape[1]:
            raise DimensionMismatchError(f"matrix must be square, got {a.shape}")
        object.__setattr__(self, "matrix", a)
        # alpha = 0 is the legitimate degenerate case of a vanishing term
        # (for instance B = 0 in a perturbative split).
        if self.alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        if self.eps < 0:
            raise ValueError(f"eps must be non-negative, got {self.eps}")
        nrm = spectral_norm(a)
        if nrm > self.alpha + self.eps + 1e-9:
            raise NormTooLargeError(
                f"||matrix|| = {nrm:.12g} exceeds alpha + eps = {self.alpha + self.eps:.12g}"
            )

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def block(self) -> np.ndarray:
        """Normalized block ``matrix / alpha`` (what a unitary would encode)."""
        return self.matrix / self.alpha


Encoding = BlockEncoding | LogicalOperator


def block_encoding_to_json(be: BlockEncoding) -> dict:
    """Serialize an explicit block encoding (matrix fields plus metadata)."""
    d = matrix_to_json(be.unitary)
    d.update({"n": be.n, "m": be.m, "alpha": be.alpha, "eps": be.eps})
    return d


def block_encoding_from_json(d: dict) -> BlockEncoding:
    return BlockEncoding(
        unitary=matrix_from_json(d),
        n=int(d["n"]),
        m=int(d["m"]),
        alpha=float(d["alpha"]),
        eps=float(d["eps"]),
    )


# ---------------------------------------------------------------------------
# completion / extraction / conversion
# ---------------------------------------------------------------------------

def unitary_completion(
    block: np.ndarray,
    m: int = 1,
    *,
    alpha: float = 1.0,
    eps: float = 0.0,
) -> BlockEncoding:
    """Complete a contraction ``G`` to an explicit block encoding.

    Builds the two-block dilation

        [[ G,             (I - G G^dag)^{1/2} ],
         [ (I - G^dag G)^{1/2},    -G^dag     ]]

    through the SVD of ``G`` (square roots act on the singular values, so the
    off-diagonal blocks are the principal PSD square roots), embedded in the
    ancilla values {0, 1} of an ``m``-qubit ancilla register with identity on
    the rest.  ``alpha`` and ``eps`` are bookkeeping only: the returned
    encoding represents ``alpha * G`` with declared error ``eps``.

    Raises
    ------
    NormTooLargeError
        If ``||G|| > 1`` beyond roundoff.
    DimensionTooLargeError
        If ``n + m`` exceeds :data:`MAX_TOTAL_QUBITS`.
    """
    g = _as_matrix(block, "block")
    if g.shape[0] != g.shape[1]:
        raise DimensionMismatchError(f"block must be square, got {g.shape}")
    n = _check_power_of_two(g.shape[0], "block")
    if m < 1:
        raise DimensionMismatchError(f"need at least one ancilla qubit, got m={m}")
    if n + m > MAX_TOTAL_QUBITS:
        raise DimensionTooLargeError(
            f"n + m = {n + m} exceeds the cap of {MAX_TOTAL_QUBITS} qubits"
        )
    w, s, vh = np.linalg.svd(g)
    if s.size and s[0] > 1.0 + 1e-12:
        raise NormTooLargeError(f"block norm {s[0]:.12g} exceeds 1")
    root = np.sqrt(np.clip(1.0 - np.clip(s, 0.0, 1.0) ** 2, 0.0, None))
    # (I - G G^dag)^{1/2} = W diag(root) W^dag ; (I - G^dag G)^{1/2} = V diag(root) V^dag
    top_right = (w * root) @ w.conj().T
    bottom_left = (vh.conj().T * root) @ vh
    d = 2**n
    u = np.eye(2 ** (n + m), dtype=np.complex128)
    u[:d, :d] = g
    u[:d, d : 2 * d] = top_right
    u[d : 2 * d, :d] = bottom_left
    u[d : 2 * d, d : 2 * d] = -g.conj().T
    return BlockEncoding(unitary=u, n=n, m=m, alpha=alpha, eps=eps)


def extract(enc: Encoding) -> np.ndarray:
    """Encoded matrix estimate, ``alpha`` times the normalized block."""
    if isinstance(enc, BlockEncoding):
        return enc.alpha * enc.block()
    return np.array(enc.matrix, copy=True)


def to_logical(be: BlockEncoding) -> LogicalOperator:
    """Forget the unitary, keep the encoded matrix and bookkeeping."""
    return LogicalOperator(matrix=extract(be), alpha=be.alpha, eps=be.eps)


def to_block_encoding(lo: LogicalOperator, m: int = 1) -> BlockEncoding:
    """Rebuild an explicit encoding from a matrix-level one via completion.

    Round trip with :func:`to_logical` preserves the encoded matrix to
    completion accuracy (~1e-14) whenever the dimensions admit an explicit
    unitary.
    """
    block = lo.matrix / lo.alpha
    nrm = spectral_norm(block)
    if nrm > 1.0 + 1e-12:
        # The eps slack allows ||matrix|| slightly above alpha; renormalize the
        # contraction rather than refusing an otherwise valid operator.
        block = block / nrm
    return unitary_completion(block, m, alpha=lo.alpha, eps=lo.eps)


def identity_encoding(n: int, m: int = 1) -> BlockEncoding:
    """A ``(1, m, 0)`` encoding of the identity on ``n`` qubits."""
    if n + m > MAX_TOTAL_QUBITS:
        raise DimensionTooLargeError(
            f"n + m = {n + m} exceeds the cap of {MAX_TOTAL_QUBITS} qubits"
        )
    return BlockEncoding(
        unitary=np.eye(2 ** (n + m), dtype=np.complex128), n=n, m=m, alpha=1.0, eps=0.0
    )


# ---------------------------------------------------------------------------
# calculus
# ---------------------------------------------------------------------------

def be_product(a: BlockEncoding, b: BlockEncoding) -> BlockEncoding:
    """Encoding of the product ``A @ B`` from encodings of ``A`` and ``B``.

    The ancilla registers are kept separate (ordering ``|anc_A> |anc_B>
    |system>``), so the result is an
    ``(alpha_A alpha_B, m_A + m_B, alpha_A eps_B + alpha_B eps_A)`` encoding.
    """
    if a.n != b.n:
        raise DimensionMismatchError(
            f"system sizes differ: {a.n} vs {b.n} qubits"
        )
    n = a.n
    m = a.m + b.m
    if n + m > MAX_TOTAL_QUBITS:
        raise DimensionTooLargeError(
            f"n + m = {n + m} exceeds the cap of {MAX_TOTAL_QUBITS} qubits"
        )
    da, db, ds = 2**a.m, 2**b.m, 2**n
    ua = a.unitary.reshape(da, ds, da, ds)
    ub = b.unitary.reshape(db, ds, db, ds)
    # apply B's unitary first, then A's; contract over the intermediate system index
    u = np.einsum("iujv,kvls->ikujls", ua, ub).reshape(da * db * ds, da * db * ds)
    return BlockEncoding(
        unitary=u,
        n=n,
        m=m,
        alpha=a.alpha * b.alpha,
        eps=a.alpha * b.eps + b.alpha * a.eps,
    )


def _prepare_unitary(amplitudes: np.ndarray) -> np.ndarray:
    """Real unitary whose first column is the given non-negative unit vector.

    Householder reflection mapping ``e_0`` to the target; the identity when
    the target already is ``e_0``.
    """
    v = np.asarray(amplitudes, dtype=np.float64)
    k = v.size
    e0 = np.zeros(k)
    e0[0] = 1.0
    w = v - e0
    nw = np.linalg.norm(w)
    if nw < 1e-15:
        return np.eye(k)
    w = w / nw
    return np.eye(k) - 2.0 * np.outer(w, w)


def be_lcu(coeffs: np.ndarray, encodings: list[BlockEncoding]) -> BlockEncoding:
    """Encoding of the linear combination ``sum_k c_k A_k``.

    Uses a prepare/select/unprepare sandwich: a selector register of
    ``ceil(log2 K)`` qubits is prepared with amplitudes
    ``sqrt(|c_k| alpha_k / s)`` where ``s = sum_k |c_k| alpha_k``; the select
    unitary applies ``(c_k/|c_k|) U_k`` controlled on the selector.  The
    result is an ``(s, a + max_k m_k, sum_k |c_k| eps_k)`` encoding.  Terms
    with ``c_k = 0`` are dropped; a single surviving term returns its encoding
    with only a phase applied (no selector qubits).
    """
    coeffs = np.asarray(coeffs, dtype=np.complex128).ravel()
    if coeffs.size != len(encodings):
        raise DimensionMismatchError(
            f"{coeffs.size} coefficients for {len(encodings)} encodings"
        )
    keep = [k for k in range(coeffs.size) if coeffs[k] != 0]
    if not keep:
        raise EmptyCombinationError("linear combination over no (nonzero) terms")
    coeffs = coeffs[keep]
    encodings = [encodings[k] for k in keep]
    n = encodings[0].n
    if any(e.n != n for e in encodings):
        raise DimensionMismatchError("encodings act on different system sizes")

    kk = len(encodings)
    m_anc = max(e.m for e in encodings)
    a_sel = 0 if kk == 1 else max(1, (kk - 1).bit_length())
    m = a_sel + m_anc
    if n + m > MAX_TOTAL_QUBITS:
        raise DimensionTooLargeError(
            f"n + m = {n + m} exceeds the cap of {MAX_TOTAL_QUBITS} qubits"
        )

    weights = np.abs(coeffs) * np.array([e.alpha for e in encodings])
    s_tot = float(weights.sum())
    phases = coeffs / np.abs(coeffs)

    d_anc, d_sys = 2**m_anc, 2**n
    d_blk = d_anc * d_sys

    def padded(e: BlockEncoding) -> np.ndarray:
        pad = m_anc - e.m
        if pad == 0:
            return e.unitary
        return np.kron(np.eye(2**pad, dtype=np.complex128), e.unitary)

    if kk == 1:
        u = phases[0] * padded(encodings[0])
        return BlockEncoding(
            unitary=u, n=n, m=m, alpha=s_tot, eps=float(encodings[0].eps * np.abs(coeffs[0]))
        )

    d_sel = 2**a_sel
    select = np.eye(d_sel * d_blk, dtype=np.complex128)
    for k, e in enumerate(encodings):
        lo = k * d_blk
        select[lo : lo + d_blk, lo : lo + d_blk] = phases[k] * padded(e)

    amp = np.zeros(d_sel)
    amp[:kk] = np.sqrt(weights / s_tot)
    prep = np.kron(_prepare_unitary(amp), np.eye(d_blk, dtype=np.complex128))
    u = prep.conj().T @ select @ prep
    eps = float(np.sum(np.abs(coeffs) * np.array([e.eps for e in encodings])))
    return BlockEncoding(unitary=u, n=n, m=m, alpha=s_tot, eps=eps)


def dilate_hermitian(lo: LogicalOperator) -> LogicalOperator:
    """Hermitian dilation ``[[0, A], [A^dag, 0]]`` with the same bookkeeping.

    The dilation's eigenvalues are plus/minus the singular values of ``A``, so
    eigenvalue machinery applies to arbitrary square operators.
    """
    a = lo.matrix
    z = np.zeros_like(a)
    return LogicalOperator(
        matrix=np.block([[z, a], [a.conj().T, z]]), alpha=lo.alpha, eps=lo.eps
    )


def qft_matrix(n: int) -> np.ndarray:
    """Discrete Fourier transform unitary on ``n`` qubits.

    ``F[j, k] = omega^(jk) / sqrt(2^n)`` with ``omega = exp(2 pi i / 2^n)``.
    Capped at ``n <= 12`` (dense 4096 x 4096).
    """
    if n < 1:
        raise DimensionMismatchError(f"need n >= 1, got {n}")
    if n > 12:
        raise DimensionTooLargeError(f"explicit Fourier matrix capped at n=12, got {n}")
    dim = 2**n
    j = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(j, j) / dim) / np.sqrt(dim)
