import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from gorenstein_rate import _kernels
from gorenstein_rate.linalg import (
    DimensionError,
    PrimeField,
    complete_basis,
    independent_rows,
    kernel_basis,
    matmul_mod,
    rank,
    row_basis,
    rref,
    solve,
)

PRIMES = [2, 5, 7, 101, 32003]


def matrices(p, max_side=7):
    shape = st.tuples(st.integers(1, max_side), st.integers(1, max_side))
    return shape.flatmap(lambda s: arrays(np.int64, s, elements=st.integers(0, p - 1)))


# ------------------------------------------------------------------ examples


def test_rank_examples():
    assert rank(np.eye(3, dtype=np.int64), 5) == 3
    assert rank(np.zeros((4, 7), dtype=np.int64), 5) == 0
    assert rank([[1, 2, 3], [2, 4, 6]], 5) == 1


def test_kernel_examples():
    assert kernel_basis(np.eye(2, dtype=np.int64), 7).shape == (0, 2)
    assert kernel_basis(np.zeros((1, 3), dtype=np.int64), 7).shape == (3, 3)
    K = kernel_basis([[1, 1]], 7)
    assert K.tolist() == [[6, 1]]


def test_rref_examples():
    R, piv = rref(np.eye(3, dtype=np.int64), 5)
    assert R.tolist() == np.eye(3).tolist() and piv == [0, 1, 2]
    R, piv = rref(np.zeros((2, 3), dtype=np.int64), 5)
    assert not R.any() and piv == []
    R, piv = rref([[2, 4], [1, 2]], 5)
    assert R.tolist() == [[1, 2], [0, 0]] and piv == [0]


def test_solve_examples():
    assert solve(np.eye(2, dtype=np.int64), [3, 4], 5).tolist() == [3, 4]
    assert solve(np.zeros((2, 2), dtype=np.int64), [1, 0], 5) is None
    assert solve([[1, 1], [0, 1]], [3, 5], 7).tolist() == [5, 5]


def test_solve_rejects_mismatched_rhs():
    with pytest.raises(DimensionError):
        solve(np.eye(2, dtype=np.int64), [1, 2, 3], 5)


def test_non_matrix_input_is_rejected():
    with pytest.raises(DimensionError):
        rank(np.zeros(3, dtype=np.int64), 5)
    with pytest.raises(DimensionError):
        rref(np.zeros((2, 2, 2), dtype=np.int64), 5)


def test_field_rejects_composite_modulus():
    with pytest.raises(ValueError):
        PrimeField(6)
    F = PrimeField(7)
    assert F.rank([[1, 1]]) == 1
    assert F.solve([[1, 1], [0, 1]], [3, 5]).tolist() == [5, 5]


def test_matmul_handles_large_inner_dimension():
    # inner dimension past the exact float64 range switches to integer arithmetic
    p = 32003
    rng = np.random.Generator(np.random.PCG64(3))
    A = rng.integers(0, p, size=(2, 9000), dtype=np.int64)
    B = rng.integers(0, p, size=(9000, 2), dtype=np.int64)
    want = (A.astype(object) @ B.astype(object)) % p
    assert matmul_mod(A, B, p).tolist() == want.tolist()


def test_independent_rows_and_complete_basis():
    V = np.array([[1, 0, 0], [2, 0, 0], [0, 1, 0], [1, 1, 0]], dtype=np.int64)
    assert independent_rows(V, 7) == [0, 2]
    assert complete_basis(V[:1], V, 7) == [2]
    assert complete_basis(None, V, 7) == [0, 2]


# ---------------------------------------------------------------- properties


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(st.just(p), matrices(p))))
def test_rank_nullity(pm):
    p, M = pm
    K = kernel_basis(M, p)
    assert rank(M, p) + K.shape[0] == M.shape[1]
    assert not (M.astype(object) @ K.T.astype(object) % p).any()
    assert rank(M, p) == oracles.rank_mod(M, p)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(st.just(p), matrices(p))))
def test_rref_idempotent_and_row_space_preserved(pm):
    p, M = pm
    R, piv = rref(M, p)
    R2, piv2 = rref(R, p)
    assert R2.tolist() == R.tolist() and piv2 == piv
    B, _ = row_basis(M, p)
    assert rank(np.vstack([B, M]), p) == rank(M, p) == len(piv)


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from(PRIMES).flatmap(
        lambda p: st.tuples(st.just(p), matrices(p, 6), st.lists(st.integers(0, p - 1), min_size=6, max_size=6))
    )
)
def test_solution_satisfies_system(data):
    p, M, b = data
    b = np.array(b[: M.shape[0]], dtype=np.int64)
    x = solve(M, b, p)
    consistent = rank(np.hstack([M, b[:, None]]), p) == rank(M, p)
    assert (x is not None) == consistent
    if x is not None:
        assert ((M.astype(object) @ x.astype(object)) % p).tolist() == b.tolist()


# ------------------------------------------------------------------- kernels


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(st.just(p), matrices(p, 9))))
def test_kernels_agree(pm):
    if _kernels.rref_inplace_numba is None:
        pytest.skip("numba not installed")
    p, M = pm
    for reduced in (True, False):
        A, B = M.copy(), M.copy()
        r1, p1 = _kernels.rref_inplace_numpy(A, p, reduced)
        r2, p2 = _kernels.rref_inplace_numba(B, np.int64(p), reduced)
        assert r1 == r2 and list(p1) == list(p2)
        assert A.tolist() == B.tolist()


def test_numpy_fallback_selected_by_environment(tmp_path):
    script = (
        "from gorenstein_rate import _kernels\n"
        "from gorenstein_rate.inverse_system import generic_algebra\n"
        "A = generic_algebra(4, 4, 1)\n"
        "print(_kernels.backend_name(), list(A.hf_vector), A.ideal.generator_degrees())\n"
    )
    env = dict(os.environ, GORENSTEIN_RATE_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", script], env=env, capture_output=True, text=True, check=True)
    backend, rest = out.stdout.split(" ", 1)
    assert backend == "numpy"
    assert rest.strip() == "[1, 4, 10, 4, 1] {3: 16}"


def test_inverse_mod():
    for p in PRIMES:
        for a in (1, 2, p - 1):
            if a % p:
                assert a * _kernels.inverse_mod(a, p) % p == 1
