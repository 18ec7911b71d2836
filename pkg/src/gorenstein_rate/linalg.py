"""Dense exact linear algebra over a prime field F_p.

Matrices are plain ``numpy.int64`` arrays with entries in ``[0, p)``.  Every
function returns fresh arrays; inputs are never modified.  Subspaces are
passed around as row bases (one vector per row), which is the convention for
all graded-piece computations in this package.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels

DEFAULT_PRIME = 32003

# float64 represents integers exactly below 2**53
_EXACT_FLOAT = 2**53


class DimensionError(ValueError):
    pass


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a word-sized prime ``p``."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not _is_prime(int(self.p)):
            raise ValueError(f"modulus {self.p!r} is not a prime")
        if self.p >= 2**31:
            raise ValueError("modulus must fit in 31 bits")

    def matrix(self, entries, shape=None):
        """Coerce ``entries`` to a reduced int64 array."""
        return as_matrix(entries, self.p, shape)

    def rank(self, M):
        return rank(M, self.p)

    def rref(self, M):
        return rref(M, self.p)

    def kernel_basis(self, M):
        return kernel_basis(M, self.p)

    def solve(self, M, b):
        return solve(M, b, self.p)


def as_matrix(entries, p, shape=None):
    A = np.array(entries, dtype=np.int64)
    if shape is not None:
        A = A.reshape(shape)
    if A.ndim == 1 and shape is None and A.size == 0:
        A = A.reshape(0, 0)
    if A.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {A.shape}")
    return A % p


def matmul_mod(A, B, p):
    """``A @ B mod p`` with both operands already reduced."""
    if A.shape[1] != B.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    if A.size == 0 or B.size == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    if (p - 1) ** 2 * A.shape[1] < _EXACT_FLOAT:
        C = A.astype(np.float64) @ B.astype(np.float64)
        return np.fmod(C, p).astype(np.int64)
    return (A @ B) % p


def rref(M, p):
    """Reduced row echelon form and pivot columns."""
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {A.shape}")
    A %= p
    r, piv = _kernels.rref_inplace(A, p, True)
    return A, [int(c) for c in piv]


def row_basis(M, p):
    """Reduced echelon row basis of the row space of ``M`` (zero rows dropped)."""
    R, piv = rref(M, p)
    return R[: len(piv)], piv


def rank(M, p):
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {A.shape}")
    # the narrow side determines the elimination cost
    if A.shape[0] > A.shape[1]:
        A = np.ascontiguousarray(A.T)
    A %= p
    r, _ = _kernels.rref_inplace(A, p, False)
    return r


def kernel_from_rref(R, piv, cols, p):
    pivset = set(piv)
    free = [c for c in range(cols) if c not in pivset]
    K = np.zeros((len(free), cols), dtype=np.int64)
    if not free:
        return K
    free_idx = np.asarray(free)
    K[np.arange(len(free)), free_idx] = 1
    if piv:
        K[:, piv] = (-R[: len(piv)][:, free_idx].T) % p
    return K


def kernel_basis(M, p):
    """Basis of the right null space ``{x : M x = 0}``, one vector per row.

    One vector per free column of the reduced echelon form, with a 1 in that
    column and zeros in the other free columns.
    """
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {M.shape}")
    R, piv = rref(M, p)
    return kernel_from_rref(R, piv, M.shape[1], p)


def solve(M, b, p):
    """One solution of ``M x = b`` or ``None`` when the system is inconsistent."""
    M = np.asarray(M, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if M.ndim != 2 or b.shape[0] != M.shape[0]:
        raise DimensionError(f"right-hand side of length {b.shape[0]} does not match {M.shape}")
    cols = M.shape[1]
    R, piv = rref(np.hstack([M % p, (b % p)[:, None]]), p)
    if piv and piv[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for r, c in enumerate(piv):
        x[c] = R[r, cols]
    return x


def reduce_modulo(V, basis, pivots, p):
    """Reduce the rows of ``V`` modulo an rref row ``basis`` with ``pivots``."""
    V = np.asarray(V, dtype=np.int64) % p
    if not pivots or V.shape[0] == 0:
        return V
    coef = V[:, pivots]
    return (V - matmul_mod(coef, basis, p)) % p


def independent_rows(V, p):
    """Indices of the lex-first maximal independent subset of the rows of ``V``."""
    if V.shape[0] == 0:
        return []
    _, piv = rref(np.ascontiguousarray(V.T), p)
    return piv


def complete_basis(span, candidates, p):
    """Indices of candidate rows that extend ``span`` to a larger space.

    Candidates are taken greedily in row order, so the result is
    deterministic.  ``span`` may be any matrix whose rows span the subspace.
    """
    candidates = np.asarray(candidates, dtype=np.int64)
    if span is None or np.asarray(span).shape[0] == 0:
        return independent_rows(candidates % p, p)
    B, piv = row_basis(span, p)
    return independent_rows(reduce_modulo(candidates, B, piv, p), p)
