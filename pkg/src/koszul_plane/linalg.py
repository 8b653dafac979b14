"""Exact linear algebra over GF(p).

The rank of a sparse matrix is computed in three stages:

1. split the row/column incidence graph into connected components (the
   rank is additive over them);
2. structured Gaussian elimination with Markowitz-style pivoting on each
   component while the active part stays sparse;
3. dense elimination (numpy, int64) on whatever Schur complement is left.

Components above ``RankOptions.wiedemann_entries`` non-zeros are handed to
a black-box Wiedemann rank instead.  All moduli must stay below 2**31 so
that products of two residues fit in an int64.
"""
from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

MAX_NUMPY_MODULUS = 1 << 31


class MatrixError(ValueError):
    pass


@dataclass(frozen=True)
class SparseMatrix:
    """Immutable triplet matrix over GF(p).

    Entries are stored as three parallel int64 arrays; construction
    validates ranges and rejects duplicates and stored zeros.
    """

    nrows: int
    ncols: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray
    p: int

    def __post_init__(self):
        if self.nrows < 0 or self.ncols < 0:
            raise MatrixError("negative shape")
        n = len(self.rows)
        if len(self.cols) != n or len(self.vals) != n:
            raise MatrixError("triplet arrays differ in length")
        if n:
            if self.rows.min() < 0 or self.rows.max() >= self.nrows:
                raise MatrixError("row index out of range")
            if self.cols.min() < 0 or self.cols.max() >= self.ncols:
                raise MatrixError("column index out of range")
            if self.vals.min() <= 0 or self.vals.max() >= self.p:
                raise MatrixError("values must be non-zero residues in [1, p)")
            key = self.rows * self.ncols + self.cols
            if np.unique(key).size != n:
                raise MatrixError("duplicate (row, col) entries")
        for arr in (self.rows, self.cols, self.vals):
            arr.setflags(write=False)

    @classmethod
    def from_triplets(cls, nrows: int, ncols: int, triplets: Iterable[tuple[int, int, int]], p: int,
                      accumulate: bool = False) -> "SparseMatrix":
        """Build from (row, col, value) triplets; values are reduced mod p.

        With ``accumulate`` duplicate positions are summed, otherwise they
        are an error.  Zeros (after reduction) are dropped either way.
        """
        if accumulate:
            acc: dict[tuple[int, int], int] = {}
            for r, c, v in triplets:
                acc[(r, c)] = (acc.get((r, c), 0) + v) % p
            trip = [(r, c, v) for (r, c), v in acc.items() if v]
        else:
            trip = [(r, c, v % p) for r, c, v in triplets if v % p]
        if trip:
            arr = np.array(trip, dtype=np.int64)
            rows, cols, vals = arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy()
        else:
            rows = cols = vals = np.zeros(0, dtype=np.int64)
        return cls(nrows, ncols, rows, cols, vals, p)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]] | np.ndarray, p: int) -> "SparseMatrix":
        a = np.asarray(dense, dtype=object)
        if a.ndim != 2:
            a = a.reshape(len(dense), -1) if len(dense) else np.zeros((0, 0), dtype=object)
        nr, nc = a.shape
        trip = [(i, j, int(a[i, j])) for i in range(nr) for j in range(nc) if int(a[i, j]) % p]
        return cls.from_triplets(nr, nc, trip, p)

    @classmethod
    def identity(cls, n: int, p: int) -> "SparseMatrix":
        return cls.from_triplets(n, n, ((i, i, 1) for i in range(n)), p)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, p: int) -> "SparseMatrix":
        return cls.from_triplets(nrows, ncols, (), p)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def nnz(self) -> int:
        return len(self.vals)

    def triplets(self):
        return zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist())

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        out[self.rows, self.cols] = self.vals
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.ncols, self.nrows, self.cols.copy(), self.rows.copy(), self.vals.copy(), self.p)

    def permute(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "SparseMatrix":
        """Entry (i, j) moves to (row_perm[i], col_perm[j])."""
        rp = np.asarray(row_perm, dtype=np.int64)
        cp = np.asarray(col_perm, dtype=np.int64)
        rows = rp[self.rows] if self.nnz else self.rows.copy()
        cols = cp[self.cols] if self.nnz else self.cols.copy()
        return SparseMatrix(self.nrows, self.ncols, rows, cols, self.vals.copy(), self.p)

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        """Exact product self @ other over GF(p) (pure Python accumulation)."""
        if self.ncols != other.nrows:
            raise MatrixError("shape mismatch in matmul")
        if self.p != other.p:
            raise MatrixError("moduli differ")
        p = self.p
        by_row: dict[int, list[tuple[int, int]]] = {}
        for r, c, v in self.triplets():
            by_row.setdefault(c, []).append((r, v))
        acc: dict[tuple[int, int], int] = {}
        for r, c, v in other.triplets():
            for r2, v2 in by_row.get(r, ()):
                key = (r2, c)
                acc[key] = (acc.get(key, 0) + v2 * v) % p
        return SparseMatrix.from_triplets(self.nrows, other.ncols,
                                          ((r, c, v) for (r, c), v in acc.items() if v), p)

    def is_zero(self) -> bool:
        return self.nnz == 0

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """y = A x mod p for an int64 vector with entries in [0, p)."""
        if self.nnz == 0:
            return np.zeros(self.nrows, dtype=np.int64)
        prod = (self.vals * x[self.cols]) % self.p
        y = np.zeros(self.nrows, dtype=np.int64)
        # Each summand is < 2**31, so int64 accumulation is exact for < 2**32 terms.
        np.add.at(y, self.rows, prod)
        return y % self.p


# --------------------------------------------------------------------------
# dense kernels


def dense_rank(a: np.ndarray, p: int) -> int:
    """Rank of a dense integer matrix over GF(p) by row reduction."""
    if p >= MAX_NUMPY_MODULUS:
        raise MatrixError("modulus too large for int64 elimination")
    a = np.array(a, dtype=np.int64) % p
    m, n = a.shape
    if m == 0 or n == 0:
        return 0
    if m < n:
        a = a.T.copy()
        m, n = n, m
    rank = 0
    for col in range(n):
        if rank == m:
            break
        nz = np.flatnonzero(a[rank:, col])
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), -1, p)
        prow = a[rank, col:] * inv % p
        a[rank, col:] = prow
        below = rank + 1 + np.flatnonzero(a[rank + 1:, col])
        if below.size:
            f = a[below, col]
            a[np.ix_(below, np.arange(col, n))] = (a[below, col:] - np.outer(f, prow) % p) % p
        rank += 1
    return rank


def rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form of a small dense matrix given as lists.

    Returns the non-zero rows and their pivot columns.  Pure Python; meant
    for the modest condition matrices of section computations.
    """
    mat = [[v % p for v in r] for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][c], -1, p)
        mat[r] = [v * inv % p for v in mat[r]]
        prow = mat[r]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [(x - f * y) % p for x, y in zip(mat[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def nullspace(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of {v : M v = 0}, one vector per free column."""
    red, pivots = rref(rows, p) if rows else ([], [])
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [0] * ncols
        v[free] = 1
        for row, pc in zip(red, pivots):
            if row[free]:
                v[pc] = (-row[free]) % p
        basis.append(v)
    return basis


# --------------------------------------------------------------------------
# sparse elimination


@dataclass
class RankOptions:
    dense_density: float = 0.15
    dense_min_rows: int = 40
    wiedemann_entries: int = 4_000_000
    seed: int = 0
    wiedemann_repeats: int = 2


@dataclass
class RankStats:
    components: int = 0
    sparse_pivots: int = 0
    dense_calls: int = 0
    wiedemann_calls: int = 0
    methods: list = field(default_factory=list)


def _markowitz(rows: list[dict[int, int]], p: int, opts: RankOptions, stats: RankStats) -> int:
    """Structured elimination on dict rows; finishes densely when fill grows."""
    col_rows: dict[int, set[int]] = {}
    for rid, row in enumerate(rows):
        for c in row:
            col_rows.setdefault(c, set()).add(rid)
    active = set(range(len(rows)))
    entries = sum(len(r) for r in rows)
    heap = [(len(r), rid) for rid, r in enumerate(rows)]
    heapq.heapify(heap)
    rank = 0
    while heap:
        n_act = len(active)
        if n_act >= opts.dense_min_rows and col_rows:
            if entries > opts.dense_density * n_act * len(col_rows):
                break
        length, rid = heapq.heappop(heap)
        if rid not in active:
            continue
        row = rows[rid]
        if len(row) != length:
            heapq.heappush(heap, (len(row), rid))
            continue
        active.discard(rid)
        if not row:
            continue
        # Markowitz: shortest row, then the sparsest column inside it.
        pc = min(row, key=lambda c: (len(col_rows[c]), c))
        inv = pow(row[pc], -1, p)
        for c in row:
            s = col_rows[c]
            s.discard(rid)
        entries -= len(row)
        targets = list(col_rows[pc])
        for t in targets:
            trow = rows[t]
            f = trow[pc] * inv % p
            before = len(trow)
            for c, v in row.items():
                nv = (trow.get(c, 0) - f * v) % p
                if nv:
                    if c not in trow:
                        col_rows[c].add(t)
                    trow[c] = nv
                elif c in trow:
                    del trow[c]
                    col_rows[c].discard(t)
            entries += len(trow) - before
            heapq.heappush(heap, (len(trow), t))
        for c in row:
            if not col_rows[c]:
                del col_rows[c]
        rank += 1
        stats.sparse_pivots += 1
    if active:
        live = [rows[r] for r in active if rows[r]]
        if live:
            cols = sorted({c for r in live for c in r})
            index = {c: j for j, c in enumerate(cols)}
            dense = np.zeros((len(live), len(cols)), dtype=np.int64)
            for i, r in enumerate(live):
                for c, v in r.items():
                    dense[i, index[c]] = v
            stats.dense_calls += 1
            rank += dense_rank(dense, p)
    return rank


def _components(m: SparseMatrix) -> list[np.ndarray]:
    """Group entry indices by connected component of the bipartite graph."""
    if m.nnz == 0:
        return []
    n = m.nrows + m.ncols
    graph = coo_matrix((np.ones(m.nnz, dtype=np.int8), (m.rows, m.cols + m.nrows)), shape=(n, n))
    ncomp, labels = connected_components(graph, directed=False)
    ent_label = labels[m.rows]
    order = np.argsort(ent_label, kind="stable")
    sorted_labels = ent_label[order]
    cuts = np.flatnonzero(np.diff(sorted_labels)) + 1
    return np.split(order, cuts)


def sparse_rank(m: SparseMatrix, opts: RankOptions | None = None, stats: RankStats | None = None) -> int:
    """Exact rank over GF(m.p).

    Deterministic for fixed options: the elimination path has no
    randomness, and the Wiedemann path draws from ``opts.seed``.
    """
    opts = opts or RankOptions()
    stats = stats if stats is not None else RankStats()
    if m.nnz == 0:
        return 0
    total = 0
    for comp in _components(m):
        stats.components += 1
        r = m.rows[comp]
        c = m.cols[comp]
        v = m.vals[comp]
        if len(comp) == 1:
            total += 1
            continue
        if len(comp) > opts.wiedemann_entries:
            ur, rinv = np.unique(r, return_inverse=True)
            uc, cinv = np.unique(c, return_inverse=True)
            sub = SparseMatrix(len(ur), len(uc), rinv.astype(np.int64), cinv.astype(np.int64), v.copy(), m.p)
            stats.wiedemann_calls += 1
            stats.methods.append("wiedemann")
            total += wiedemann_rank(sub, seed=opts.seed + stats.wiedemann_calls,
                                    repeats=opts.wiedemann_repeats)
            continue
        # rows of the component as dicts; orient so rows are the shorter side
        rows_d: dict[int, dict[int, int]] = {}
        nr = np.unique(r).size
        nc = np.unique(c).size
        if nr > nc:
            r, c = c, r
        for ri, ci, vi in zip(r.tolist(), c.tolist(), v.tolist()):
            rows_d.setdefault(ri, {})[ci] = vi
        stats.methods.append("elimination")
        total += _markowitz(list(rows_d.values()), m.p, opts, stats)
    return total


# --------------------------------------------------------------------------
# black-box rank


def berlekamp_massey(seq: Sequence[int], p: int) -> list[int]:
    """Minimal connection polynomial C (C[0] = 1) of a linearly recurrent sequence.

    Returns coefficients c_0..c_L with sum_i c_i s_{n-i} = 0 for n >= L.
    """
    c = [1]
    b = [1]
    L = 0
    m = 1
    bb = 1
    for n in range(len(seq)):
        d = seq[n]
        for i in range(1, L + 1):
            d = (d + c[i] * seq[n - i]) % p
        if d == 0:
            m += 1
            continue
        coef = d * pow(bb, -1, p) % p
        t = c[:]
        need = len(b) + m
        if len(c) < need:
            c = c + [0] * (need - len(c))
        for i, bi in enumerate(b):
            c[i + m] = (c[i + m] - coef * bi) % p
        if 2 * L <= n:
            L = n + 1 - L
            b = t
            bb = d
            m = 1
        else:
            m += 1
    c = c[:L + 1] + [0] * max(0, L + 1 - len(c))
    return c


def _minpoly_degree_estimate(apply, n: int, p: int, rng: random.Random) -> tuple[int, bool]:
    """Degree of the projected minimal polynomial and whether x divides it."""
    u = np.array([rng.randrange(p) for _ in range(n)], dtype=np.int64)
    v = np.array([rng.randrange(p) for _ in range(n)], dtype=np.int64)
    seq = []
    w = v
    for _ in range(2 * n + 2):
        seq.append(int((u * w % p).sum() % p))
        w = apply(w)
    conn = berlekamp_massey(seq, p)
    deg = len(conn) - 1
    # reversed connection polynomial is the minimal polynomial; x | minpoly iff c_L == 0
    x_divides = deg > 0 and conn[deg] == 0
    return deg, x_divides


def wiedemann_rank(m: SparseMatrix, seed: int = 0, repeats: int = 2) -> int:
    """Monte Carlo rank via the minimal polynomial of D1 A^T D2 A D1.

    With random diagonal scalings the symmetric product has the rank of A
    and a minimal polynomial of degree rank (+1 when singular).  Each trial
    can only under-estimate, so the maximum over trials is reported; the
    loop stops once ``repeats`` consecutive trials agree.
    """
    p = m.p
    if m.nnz == 0:
        return 0
    rng = random.Random(seed)
    mt = m.transpose()
    n = m.ncols
    best = 0
    agree = 0
    for _ in range(4 * repeats + 2):
        d1 = np.array([rng.randrange(1, p) for _ in range(n)], dtype=np.int64)
        d2 = np.array([rng.randrange(1, p) for _ in range(m.nrows)], dtype=np.int64)

        def apply(x, d1=d1, d2=d2):
            y = x * d1 % p
            y = m.matvec(y) * d2 % p
            y = mt.matvec(y)
            return y * d1 % p

        deg, x_div = _minpoly_degree_estimate(apply, n, p, rng)
        est = min(deg - 1 if x_div else deg, m.nrows, m.ncols)
        if est > best:
            best, agree = est, 1
        elif est == best:
            agree += 1
        if agree >= repeats:
            break
    return best
