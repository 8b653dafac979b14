import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from koszul_plane.linalg import (MatrixError, RankOptions, SparseMatrix, berlekamp_massey, dense_rank,
                                 nullspace, rref, sparse_rank, wiedemann_rank)

P = 2147483647


def textbook_rank(rows, p):
    """Plain row reduction on Python lists, kept independent of the library."""
    a = [[v % p for v in r] for r in rows]
    rank, ncols = 0, len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        for i in range(len(a)):
            if i != rank and a[i][c]:
                f = a[i][c] * inv % p
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def random_low_rank(rng, nr, nc, k, p=P, sparse=0.0):
    left = [[rng.randrange(p) if rng.random() >= sparse else 0 for _ in range(k)] for _ in range(nr)]
    right = [[rng.randrange(p) if rng.random() >= sparse else 0 for _ in range(nc)] for _ in range(k)]
    return [[sum(left[i][t] * right[t][j] for t in range(k)) % p for j in range(nc)] for i in range(nr)]


def test_identity_and_zero():
    assert sparse_rank(SparseMatrix.identity(3, P)) == 3
    assert sparse_rank(SparseMatrix.zeros(4, 5, P)) == 0


def test_malformed_input_rejected():
    with pytest.raises(MatrixError):
        SparseMatrix.from_triplets(2, 2, [(0, 0, 1), (0, 0, 2)], P)
    with pytest.raises(MatrixError):
        SparseMatrix.from_triplets(2, 2, [(2, 0, 1)], P)


def test_zeros_are_not_stored():
    m = SparseMatrix.from_triplets(2, 2, [(0, 0, P), (1, 1, 3)], P)
    assert m.nnz == 1


@pytest.mark.parametrize("seed", range(8))
def test_rank_matches_textbook_oracle(seed):
    rng = random.Random(seed)
    nr, nc = rng.randrange(1, 30), rng.randrange(1, 30)
    k = rng.randrange(0, min(nr, nc) + 1)
    rows = random_low_rank(rng, nr, nc, k, sparse=0.6)
    m = SparseMatrix.from_dense(rows, P)
    want = textbook_rank(rows, P)
    assert sparse_rank(m) == want
    assert dense_rank(np.array(rows, dtype=np.int64), P) == want


def test_sparse_and_dense_paths_agree():
    rng = random.Random(3)
    rows = random_low_rank(rng, 60, 70, 35, sparse=0.8)
    m = SparseMatrix.from_dense(rows, P)
    want = textbook_rank(rows, P)
    assert sparse_rank(m, RankOptions(dense_density=2.0)) == want  # never switch to dense
    assert sparse_rank(m, RankOptions(dense_density=0.0, dense_min_rows=0)) == want


def test_wiedemann_agrees_with_elimination():
    rng = random.Random(5)
    for nr, nc, k in [(20, 20, 20), (25, 18, 11), (15, 30, 9), (12, 12, 0)]:
        rows = random_low_rank(rng, nr, nc, k, sparse=0.5)
        m = SparseMatrix.from_dense(rows, P)
        assert wiedemann_rank(m, seed=1) == textbook_rank(rows, P)
    rows = random_low_rank(rng, 30, 30, 17)
    forced = sparse_rank(SparseMatrix.from_dense(rows, P), RankOptions(wiedemann_entries=1))
    assert forced == 17


def test_berlekamp_massey_fibonacci():
    seq = [0, 1]
    for _ in range(20):
        seq.append((seq[-1] + seq[-2]) % P)
    c = berlekamp_massey(seq, P)
    assert len(c) - 1 == 2  # connection polynomial of degree 2


def test_nullspace_is_annihilated():
    rng = random.Random(9)
    rows = random_low_rank(rng, 6, 10, 4)
    null = nullspace(rows, 10, P)
    assert len(null) == 10 - textbook_rank(rows, P)
    for v in null:
        for r in rows:
            assert sum(a * b for a, b in zip(r, v)) % P == 0
    red, piv = rref(rows, P)
    assert len(piv) == 4


matrices = st.integers(0, 10_000).map(lambda s: random.Random(s)).map(
    lambda rng: random_low_rank(rng, rng.randrange(1, 15), rng.randrange(1, 15), rng.randrange(0, 8), sparse=0.5))


@settings(max_examples=40, deadline=None)
@given(matrices, st.randoms(use_true_random=False))
def test_rank_invariant_under_permutation(rows, rnd):
    m = SparseMatrix.from_dense(rows, P)
    rp, cp = list(range(m.nrows)), list(range(m.ncols))
    rnd.shuffle(rp)
    rnd.shuffle(cp)
    assert sparse_rank(m.permute(rp, cp)) == sparse_rank(m)
    assert sparse_rank(m.transpose()) == sparse_rank(m)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_rank_of_product_bounded(seed):
    rng = random.Random(seed)
    n, k, l = rng.randrange(1, 12), rng.randrange(1, 12), rng.randrange(1, 12)
    a = SparseMatrix.from_dense(random_low_rank(rng, n, k, rng.randrange(0, 6), sparse=0.4), P)
    b = SparseMatrix.from_dense(random_low_rank(rng, k, l, rng.randrange(0, 6), sparse=0.4), P)
    assert sparse_rank(a.matmul(b)) <= min(sparse_rank(a), sparse_rank(b))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_invertible_matrices_have_full_rank(seed):
    rng = random.Random(seed)
    n = rng.randrange(1, 15)
    # unit upper triangular times unit lower triangular is invertible
    up = [[1 if i == j else (rng.randrange(P) if j > i else 0) for j in range(n)] for i in range(n)]
    lo = [[1 if i == j else (rng.randrange(P) if j < i else 0) for j in range(n)] for i in range(n)]
    m = SparseMatrix.from_dense(up, P).matmul(SparseMatrix.from_dense(lo, P))
    assert sparse_rank(m) == n


def test_integer_matrix_rank_agrees_at_two_primes():
    rng = random.Random(11)
    for _ in range(10):
        rows = [[rng.randrange(-3, 4) for _ in range(9)] for _ in range(7)]
        rows.append([a + b for a, b in zip(rows[0], rows[1])])
        r1 = sparse_rank(SparseMatrix.from_dense([[v % P for v in r] for r in rows], P))
        q = 2147483629
        r2 = sparse_rank(SparseMatrix.from_dense([[v % q for v in r] for r in rows], q))
        assert r1 == r2
