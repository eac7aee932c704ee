import numpy as np
import pytest
from hypothesis import given, strategies as st

from siltkit import linalg
from siltkit._accel import numba_enabled, use_numba


def ref_rank(rows, p):
    """Plain-Python elimination used as an independent oracle."""
    M = [[x % p for x in r] for r in rows]
    rk = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        inv = pow(M[rk][c], p - 2, p)
        M[rk] = [x * inv % p for x in M[rk]]
        for i in range(len(M)):
            if i != rk and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[rk])]
        rk += 1
    return rk


matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 12), min_size=c, max_size=c), min_size=r, max_size=r)))
primes = st.sampled_from([2, 3, 5, 7, 13, 1000003])


def test_rref_rank_one_over_f5():
    R, rk, piv = linalg.rref([[1, 2], [2, 4]], 5)
    assert R.tolist() == [[1, 2], [0, 0]]
    assert rk == 1 and piv.tolist() == [0]


def test_rref_identity_and_zero():
    R, rk, _ = linalg.rref(np.eye(3, dtype=np.int64), 7)
    assert rk == 3 and np.array_equal(R, np.eye(3))
    R, rk, piv = linalg.rref(np.zeros((2, 3), dtype=np.int64), 7)
    assert rk == 0 and not R.any() and piv.size == 0


def test_solve_underdetermined():
    x, K = linalg.solve([[1, 1]], [1], 7)
    assert x.tolist() == [1, 0]
    assert K.shape == (1, 2)
    assert (np.array([[1, 1]]) @ K.T % 7).tolist() == [[0]]


def test_solve_inconsistent():
    with pytest.raises(linalg.InconsistentSystem):
        linalg.solve([[1, 1], [2, 2]], [1, 0], 5)


def test_quotient_basis_counts():
    S = np.eye(4, dtype=np.int64)
    W = np.array([[1, 1, 0, 0]])
    Q = linalg.quotient_basis(S, W, 7)
    assert Q.shape == (3, 4)
    assert linalg.rank(np.vstack([Q, W]), 7) == 4


def test_quotient_basis_rejects_non_subspace():
    with pytest.raises(linalg.NotASubspace):
        linalg.quotient_basis([[1, 0, 0]], [[0, 1, 0]], 5)


@pytest.mark.parametrize("p,m,root", [(5, 2, 4), (13, 4, 5), (7, 1, 1)])
def test_primitive_roots(p, m, root):
    z = linalg.primitive_root_of_unity(p, m)
    assert z == root
    assert linalg.multiplicative_order(z, p) == m


def test_no_root_of_unity():
    with pytest.raises(linalg.NoRootOfUnity):
        linalg.primitive_root_of_unity(7, 4)


def test_check_prime_rejects_composites_and_oversized():
    assert linalg.check_prime(1000003) == 1000003
    with pytest.raises(ValueError):
        linalg.check_prime(15)
    with pytest.raises(ValueError):
        linalg.check_prime(2**61 - 1)


def test_prime_congruent_one():
    q = linalg.prime_congruent_one(12, above=100)
    assert q > 100 and q % 12 == 1 and linalg.is_prime(q)


def test_matmul_no_overflow_near_max_prime():
    p = linalg.MAX_PRIME
    A = np.full((3, 50), p - 1, dtype=np.int64)
    B = np.full((50, 2), p - 1, dtype=np.int64)
    assert (linalg.matmul(A, B, p) == 50 % p).all()


def test_inverse_roundtrip():
    M = np.array([[2, 1], [1, 1]])
    Mi = linalg.inverse(M, 11)
    assert (linalg.matmul(M, Mi, 11) == np.eye(2)).all()
    with pytest.raises(ZeroDivisionError):
        linalg.inverse([[1, 2], [2, 4]], 5)


@given(matrices, primes)
def test_rank_matches_reference(M, p):
    assert linalg.rank(M, p) == ref_rank(M, p)


@given(matrices, primes)
def test_rref_is_idempotent(M, p):
    R, rk, _ = linalg.rref(M, p)
    R2, rk2, _ = linalg.rref(R, p)
    assert rk == rk2 and np.array_equal(R, R2)


@given(matrices, primes)
def test_nullspace_is_kernel(M, p):
    K = linalg.nullspace(M, p)
    A = linalg.as_matrix(M, p)
    assert K.shape[0] == A.shape[1] - linalg.rank(A, p)
    if K.size:
        assert not linalg.matmul(A, K.T, p).any()


@given(matrices, primes, st.data())
def test_solve_recovers_consistent_rhs(M, p, data):
    A = linalg.as_matrix(M, p)
    x0 = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=A.shape[1], max_size=A.shape[1])))
    b = linalg.matmul(A, x0.reshape(-1, 1), p).ravel()
    x, _ = linalg.solve(A, b, p)
    assert np.array_equal(linalg.matmul(A, x.reshape(-1, 1), p).ravel(), b)


@given(matrices, primes)
def test_numba_and_numpy_kernels_agree(M, p):
    before = numba_enabled()
    try:
        use_numba(True)
        a = linalg.rref(M, p)
        use_numba(False)
        b = linalg.rref(M, p)
    finally:
        use_numba(before)
    assert np.array_equal(a[0], b[0]) and a[1] == b[1] and np.array_equal(a[2], b[2])


def test_rejects_higher_rank_arrays():
    with pytest.raises(ValueError):
        linalg.rank(np.zeros((2, 2, 2), dtype=np.int64), 5)
