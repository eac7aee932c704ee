"""Exact linear algebra over prime fields F_p.

Matrices are ``int64`` numpy arrays with entries reduced into ``[0, p)``.
The modulus is kept below 2**31 so a single product never overflows; the
matrix product helper splits the inner dimension when sums could overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._accel import rref_inplace

DEFAULT_PRIME = 1_000_003
MAX_PRIME = 2**31 - 1


class InconsistentSystem(ValueError):
    """Raised by :func:`solve` when the right-hand side is outside the column space."""


class NotASubspace(ValueError):
    """Raised by :func:`quotient_basis` when the subspace is not contained in the span."""


class NoRootOfUnity(ValueError):
    pass


@dataclass(frozen=True)
class FieldScalar:
    value: int
    p: int

    def __post_init__(self):
        if not (0 <= self.value < self.p):
            raise ValueError(f"{self.value} is not reduced mod {self.p}")

    def __int__(self) -> int:
        return self.value


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p > MAX_PRIME:
        raise ValueError(f"modulus {p} exceeds the supported bound {MAX_PRIME}")
    return p


def prime_congruent_one(m: int, above: int = 10**6) -> int:
    """Smallest prime ``p > above`` with ``p = 1 (mod m)``."""
    p = above + 1
    p += (1 - p) % m
    while not is_prime(p):
        p += m
    return p


def as_matrix(M, p: int) -> np.ndarray:
    A = np.array(M, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(1, -1) if A.size else A.reshape(0, 0)
    if A.ndim != 2:
        raise ValueError(f"expected a matrix, got an array of shape {A.shape}")
    return A % p


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """``A @ B mod p`` without int64 overflow."""
    k = A.shape[-1]
    if k == 0:
        return np.zeros(A.shape[:-1] + B.shape[-1:], dtype=np.int64)
    chunk = max(1, (2**62) // ((p - 1) ** 2 + 1))
    if k <= chunk:
        return (A @ B) % p
    out = np.zeros(A.shape[:-1] + B.shape[-1:], dtype=np.int64)
    for s in range(0, k, chunk):
        out = (out + (A[..., s:s + chunk] @ B[s:s + chunk]) % p) % p
    return out


def inv_scalar(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("zero has no inverse")
    return pow(a, p - 2, p)


def rref(M, p: int) -> tuple[np.ndarray, int, np.ndarray]:
    """Reduced row echelon form: ``(R, rank, pivot_columns)``.

    Pivot search is column-major and takes the first nonzero row, so the
    output is deterministic.
    """
    R = as_matrix(M, p).copy()
    rk, piv = rref_inplace(R, p)
    return R, rk, piv


def rank(M, p: int) -> int:
    A = as_matrix(M, p)
    if A.size == 0:
        return 0
    return rref_inplace(A.copy(), p)[0]


def nullspace(M, p: int) -> np.ndarray:
    """Rows of the result form a basis of ``{x : M x = 0}``."""
    A = as_matrix(M, p)
    cols = A.shape[1]
    R = A.copy()
    rk, piv = rref_inplace(R, p) if A.size else (0, np.empty(0, dtype=np.int64))
    free = np.setdiff1d(np.arange(cols), piv)
    K = np.zeros((free.size, cols), dtype=np.int64)
    for t, f in enumerate(free):
        K[t, f] = 1
        K[t, piv] = (-R[:rk, f]) % p
    return K


def solve(M, b, p: int) -> tuple[np.ndarray, np.ndarray]:
    """One solution of ``M x = b`` plus a kernel basis (rows).

    Raises :class:`InconsistentSystem` when ``b`` is not in the column space.
    """
    A = as_matrix(M, p)
    rows, cols = A.shape
    bb = np.array(b, dtype=np.int64).reshape(rows) % p
    aug = np.concatenate([A, bb.reshape(-1, 1)], axis=1)
    rk, piv = rref_inplace(aug, p)
    if rk and piv[-1] == cols:
        raise InconsistentSystem("right-hand side not in the column space")
    x = np.zeros(cols, dtype=np.int64)
    x[piv] = aug[:rk, cols]
    return x, nullspace(A, p)


def row_basis(V, p: int) -> np.ndarray:
    """Nonzero rows of the rref of ``V``: a canonical basis of the row span."""
    A = as_matrix(V, p)
    if A.size == 0:
        return A.reshape(0, A.shape[1] if A.ndim == 2 else 0)
    R = A.copy()
    rk, _ = rref_inplace(R, p)
    return R[:rk]


def quotient_basis(span, subspace, p: int) -> np.ndarray:
    """Coset representatives (rows, taken from ``span``) of ``span / subspace``.

    The returned rows together with any basis of ``subspace`` form a basis of
    the row span of ``span``.
    """
    S = as_matrix(span, p)
    W = as_matrix(subspace, p)
    n = S.shape[1] if S.ndim == 2 and S.shape[1] else (W.shape[1] if W.ndim == 2 else 0)
    if S.size == 0:
        if W.size and rank(W, p):
            raise NotASubspace("subspace is not contained in the span")
        return np.zeros((0, n), dtype=np.int64)
    if W.size == 0:
        W = np.zeros((0, n), dtype=np.int64)
    rs = rank(S, p)
    rw = rank(W, p)
    if rank(np.vstack([S, W]), p) != rs:
        raise NotASubspace("subspace is not contained in the span")
    # greedy extension of a basis of W by rows of S, done in one elimination:
    # columns of [W; S]^T ordered W first, pivots beyond W pick the representatives
    stacked = np.vstack([W, S]).T.copy()
    _, piv = rref_inplace(stacked, p)
    chosen = [int(c) - W.shape[0] for c in piv if c >= W.shape[0]]
    reps = S[chosen]
    assert reps.shape[0] == rs - rw
    return reps


def inverse(M, p: int) -> np.ndarray:
    A = as_matrix(M, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix is not square")
    aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    rk, piv = rref_inplace(aug, p)
    if rk < n or piv[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return aug[:, n:].copy()


def coordinates(basis, vectors, p: int) -> np.ndarray:
    """Coordinates of ``vectors`` (rows) in terms of ``basis`` (rows, independent).

    Raises :class:`InconsistentSystem` if some vector is outside the span.
    """
    B = as_matrix(basis, p)
    V = as_matrix(vectors, p)
    k = B.shape[0]
    if k == 0:
        if V.size and V.any():
            raise InconsistentSystem("vector outside the span")
        return np.zeros((V.shape[0], 0), dtype=np.int64)
    aug = np.concatenate([B.T, V.T], axis=1)
    rk, piv = rref_inplace(aug, p)
    if np.any(piv >= k):
        raise InconsistentSystem("vector outside the span")
    if rk < k:
        raise ValueError("basis rows are not independent")
    return aug[:k, k:].T.copy()


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def multiplicative_order(x: int, p: int) -> int:
    x %= p
    if x == 0:
        raise ValueError("zero has no multiplicative order")
    order = p - 1
    for q in _prime_factors(p - 1):
        while order % q == 0 and pow(x, order // q, p) == 1:
            order //= q
    return order


def primitive_root_of_unity(p: int, m: int) -> int:
    """Smallest element of ``F_p`` of multiplicative order exactly ``m``."""
    if m < 1 or (p - 1) % m:
        raise NoRootOfUnity(f"no primitive {m}-th root of unity in F_{p}")
    if m == 1:
        return 1
    g = next(x for x in range(2, p) if multiplicative_order(x, p) == p - 1)
    base = pow(g, (p - 1) // m, p)
    return min(pow(base, k, p) for k in range(1, m) if math.gcd(k, m) == 1)
