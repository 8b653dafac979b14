"""Koszul differentials, Koszul cohomology dimensions and Betti tables.

For bundles B, L on a curve write V = H^0(L) and W_q = H^0(B (x) L^q).
The cell (p, q) is the middle of

    wedge^{p+1} V (x) W_{q-1}  ->  wedge^p V (x) W_q  ->  wedge^{p-1} V (x) W_{q+1}

and kappa_{p,q} = dim(middle) - rank(in) - rank(out).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Optional

from .bundles import BundleError, LineBundle, SectionSpace, bundle_create, context, sections
from .linalg import RankOptions, RankStats, SparseMatrix, sparse_rank


@dataclass(frozen=True)
class WedgeBasis:
    """Strictly increasing p-subsets of range(n), in lexicographic order."""

    n: int
    p: int

    @cached_property
    def tuples(self) -> list[tuple[int, ...]]:
        if self.p < 0 or self.p > self.n:
            return []
        return list(combinations(range(self.n), self.p))

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {t: i for i, t in enumerate(self.tuples)}

    def __len__(self):
        return comb(self.n, self.p) if 0 <= self.p <= self.n else 0


@dataclass
class KoszulCell:
    p: int
    q: int
    dims: tuple[int, int, int]  # (domain of incoming map, middle, codomain of outgoing map)
    rank_in: int
    rank_out: int
    millis: float = 0.0

    @property
    def kappa(self) -> int:
        return self.dims[1] - self.rank_in - self.rank_out

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "dims": list(self.dims), "rank_in": self.rank_in,
                "rank_out": self.rank_out, "kappa": self.kappa, "millis": round(self.millis, 3)}


class KoszulComplex:
    """All Koszul data of the section module R(C, B; L).

    Section spaces are memoised per curve; multiplication tables per
    weight and ranks per differential are memoised here.  Matrices are
    rebuilt on demand and not kept.
    """

    def __init__(self, B: LineBundle, L: LineBundle, rank_options: RankOptions | None = None):
        if B.curve is not L.curve:
            raise BundleError("B and L live on different curves")
        self.B = B
        self.L = L
        self.curve = L.curve
        self.p = self.curve.p
        self.rank_options = rank_options or RankOptions()
        self.rank_stats = RankStats()
        self.V = sections(L)
        self.n = self.V.h0
        self._W: dict[int, SectionSpace] = {}
        self._mult: dict[int, list[list[dict[int, int]]]] = {}
        self._ranks: dict[tuple[int, int], int] = {}
        self._cells: dict[tuple[int, int], KoszulCell] = {}

    @property
    def r(self) -> int:
        return self.n - 1

    def bundle_weight(self, q: int) -> Optional[LineBundle]:
        if q >= 0:
            return bundle_create(self.curve, self.B.twist + q * self.L.twist,
                                 self.B.minus + self.L.minus.scaled(q))
        deg = self.B.degree + q * self.L.degree
        if deg < 0:
            return None
        if self.L.minus:
            raise BundleError(f"B (x) L^{q} is not of twist-down shape")
        return bundle_create(self.curve, self.B.twist + q * self.L.twist, self.B.minus)

    def W(self, q: int) -> SectionSpace | None:
        if q not in self._W:
            b = self.bundle_weight(q)
            self._W[q] = sections(b) if b is not None else None
        return self._W[q]

    def w_dim(self, q: int) -> int:
        w = self.W(q)
        return w.h0 if w is not None else 0

    def mult_table(self, q: int) -> list[list[dict[int, int]]]:
        """table[i][s] = coordinates of v_i * w_s in W_q, for w_s in the basis of W_{q-1}."""
        if q in self._mult:
            return self._mult[q]
        src, dst = self.W(q - 1), self.W(q)
        ctx = context(self.curve)
        table: list[list[dict[int, int]]] = []
        if src is None or dst is None or src.h0 == 0:
            table = [[] for _ in range(self.n)]
        else:
            for v in self.V.basis:
                row = []
                for w in src.basis:
                    row.append(dst.coordinates(ctx.product(v, w)))
                table.append(row)
        self._mult[q] = table
        return table

    def dims(self, p: int, q: int) -> int:
        return len(WedgeBasis(self.n, p)) * self.w_dim(q)

    def differential(self, p: int, q: int) -> SparseMatrix:
        """Matrix of wedge^{p+1} V (x) W_{q-1} -> wedge^p V (x) W_q (rows: codomain).

        d(v_{i_0} ^ ... ^ v_{i_p} (x) s) = sum_j (-1)^j v_{..i_j omitted..} (x) v_{i_j} s
        """
        src_w, dst_w = self.w_dim(q - 1), self.w_dim(q)
        src_wedge, dst_wedge = WedgeBasis(self.n, p + 1), WedgeBasis(self.n, p)
        ncols = len(src_wedge) * src_w
        nrows = len(dst_wedge) * dst_w
        if ncols == 0 or nrows == 0 or p < 0:
            return SparseMatrix.zeros(max(nrows, 0), max(ncols, 0), self.p)
        table = self.mult_table(q)
        P = self.p
        didx = dst_wedge.index
        rows, cols, vals = [], [], []
        for ci, I in enumerate(src_wedge.tuples):
            col_base = ci * src_w
            for j, ij in enumerate(I):
                row_base = didx[I[:j] + I[j + 1:]] * dst_w
                neg = j & 1
                tab = table[ij]
                for s in range(src_w):
                    col = col_base + s
                    for t, c in tab[s].items():
                        rows.append(row_base + t)
                        cols.append(col)
                        vals.append(P - c if neg else c)
        import numpy as np

        return SparseMatrix(nrows, ncols, np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64),
                            np.array(vals, dtype=np.int64), P)

    def rank(self, p: int, q: int) -> int:
        """Rank of the incoming map of cell (p, q)."""
        key = (p, q)
        if key not in self._ranks:
            if p < 0 or p + 1 > self.n or self.w_dim(q - 1) == 0 or self.w_dim(q) == 0:
                self._ranks[key] = 0
            else:
                self._ranks[key] = sparse_rank(self.differential(p, q), self.rank_options, self.rank_stats)
        return self._ranks[key]

    def cell(self, p: int, q: int) -> KoszulCell:
        key = (p, q)
        if key in self._cells:
            return self._cells[key]
        t0 = time.perf_counter()
        dims = (self.dims(p + 1, q - 1), self.dims(p, q), self.dims(p - 1, q + 1))
        if dims[1] == 0:
            cell = KoszulCell(p, q, dims, 0, 0)
        else:
            cell = KoszulCell(p, q, dims, self.rank(p, q), self.rank(p - 1, q + 1))
        cell.millis = (time.perf_counter() - t0) * 1000.0
        self._cells[key] = cell
        return cell

    def kappa(self, p: int, q: int) -> int:
        return self.cell(p, q).kappa


def koszul_differential(p: int, q: int, B: LineBundle, L: LineBundle) -> SparseMatrix:
    return KoszulComplex(B, L).differential(p, q)


def koszul_dim(p: int, q: int, B: LineBundle, L: LineBundle) -> int:
    return KoszulComplex(B, L).kappa(p, q)


# --------------------------------------------------------------------------
# tables and checks


@dataclass
class BettiTable:
    curve: str
    bundle_B: str
    bundle_L: str
    prime: int
    seed: int
    r: int
    cells: dict[tuple[int, int], KoszulCell] = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def kappa(self, p: int, q: int) -> int:
        return self.cells[(p, q)].kappa

    def nonzero(self, q: int) -> list[int]:
        return sorted(p for (p, qq), c in self.cells.items() if qq == q and c.kappa)

    def row(self, q: int) -> list[int]:
        ps = sorted(p for (p, qq) in self.cells if qq == q)
        return [self.cells[(p, q)].kappa for p in ps]

    @property
    def q_max(self) -> int:
        return max(q for _, q in self.cells)

    @property
    def p_max(self) -> int:
        return max(p for p, _ in self.cells)

    def kappas(self) -> dict[str, int]:
        return {f"{p},{q}": c.kappa for (p, q), c in sorted(self.cells.items())}

    def to_json(self, include_timing: bool = True) -> dict:
        cells = []
        for _, c in sorted(self.cells.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            j = c.to_json()
            if not include_timing:
                j.pop("millis")
            cells.append(j)
        out = {"curve": self.curve, "bundle_B": self.bundle_B, "bundle_L": self.bundle_L,
               "prime": self.prime, "seed": self.seed, "r": self.r, "cells": cells, "checks": self.checks}
        if include_timing:
            out["meta"] = self.meta
        return out

    def render_table(self) -> str:
        ps = range(0, self.p_max + 1)
        head = "q\\p " + " ".join(f"{p:>6}" for p in ps)
        lines = [head]
        for q in range(0, self.q_max + 1):
            vals = []
            for p in ps:
                c = self.cells.get((p, q))
                vals.append(f"{c.kappa:>6}" if c and c.kappa else f"{'-':>6}")
            lines.append(f"{q:>3} " + " ".join(vals))
        return "\n".join(lines)

    def render_csv(self) -> str:
        lines = ["p,q,dim_in,dim_mid,dim_out,rank_in,rank_out,kappa"]
        for (p, q), c in sorted(self.cells.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            lines.append(f"{p},{q},{c.dims[0]},{c.dims[1]},{c.dims[2]},{c.rank_in},{c.rank_out},{c.kappa}")
        return "\n".join(lines)


def dsquared_check(cx: KoszulComplex, p_max: int, q_max: int) -> dict:
    """Exactly verify d o d = 0 for every adjacent pair inside the table range."""
    failures = []
    pairs = 0
    for q in range(0, q_max):
        for p in range(0, p_max + 1):
            inner = cx.differential(p + 1, q)      # wedge^{p+2} W_{q-1} -> wedge^{p+1} W_q
            outer = cx.differential(p, q + 1)      # wedge^{p+1} W_q -> wedge^p W_{q+1}
            if inner.nnz == 0 or outer.nnz == 0:
                continue
            pairs += 1
            if not outer.matmul(inner).is_zero():
                failures.append([p, q])
    return {"passed": not failures, "pairs": pairs, "failures": failures}


def _dim_S(r: int, j: int) -> int:
    return comb(r + j, r) if j >= 0 else 0


def hilbert_identity_check(table: BettiTable, B: LineBundle, L: LineBundle, m_max: int = 4,
                           cx: KoszulComplex | None = None) -> dict:
    """h0(B L^m) == sum_{p,q} (-1)^p kappa_{p,q} dim S_{m-p-q} for m <= m_max.

    Missing cells with p + q <= m are computed through ``cx`` (and added
    to the table) when a complex is supplied.
    """
    r = table.r
    if cx is not None:
        try:
            low = cx.bundle_weight(-1)
        except BundleError:
            low = None
            return {"passed": None, "applicable": False, "reason": "B (x) L^-1 not representable"}
        if low is not None and sections(low).h0:
            return {"passed": None, "applicable": False,
                    "reason": "H^0(B (x) L^-1) != 0: module has negative weights"}
    residuals = []
    ok = True
    for m in range(0, m_max + 1):
        rhs = 0
        for q in range(0, m + 1):
            for p in range(0, min(m - q, r + 1) + 1):
                if (p, q) not in table.cells:
                    if cx is None:
                        return {"passed": False, "applicable": True, "reason": f"cell ({p},{q}) missing"}
                    table.cells[(p, q)] = cx.cell(p, q)
                rhs += (-1) ** p * table.cells[(p, q)].kappa * _dim_S(r, m - p - q)
        lhs = sections(bundle_create(B.curve, B.twist + m * L.twist, B.minus + L.minus.scaled(m))).h0
        residuals.append({"m": m, "lhs": lhs, "rhs": rhs})
        if lhs != rhs:
            ok = False
    return {"passed": ok, "applicable": True, "m_max": m_max, "residuals": residuals}


def duality_check(cx: KoszulComplex, indices: Optional[list[int]] = None) -> dict:
    """kappa_{i,1}(C; L) == kappa_{r-i-1,1}(C, omega; L), both sides computed independently."""
    from .bundles import canonical_bundle, h1

    B, L = cx.B, cx.L
    if not (B.is_pure_twist and B.twist == 0):
        return {"passed": None, "applicable": False, "reason": "duality check runs for B = O_C"}
    if h1(L) != 0:
        return {"passed": None, "applicable": False, "reason": "L is special"}
    r = cx.r
    other = KoszulComplex(canonical_bundle(cx.curve), L, cx.rank_options)
    pairs = []
    ok = True
    for i in (indices if indices is not None else range(0, r)):
        a, b = cx.kappa(i, 1), other.kappa(r - i - 1, 1)
        pairs.append([i, a, b])
        ok = ok and a == b
    return {"passed": ok, "applicable": True, "pairs": pairs}


def riemann_roch_check(cx: KoszulComplex, q_max: int) -> dict:
    """h0 - h1 == deg - g + 1 for V and every W_q whose h1 has an independent route."""
    from .bundles import h1_with_route

    g = cx.curve.genus
    rows = []
    ok = True
    bundles = [("V", cx.L)] + [(f"W{q}", cx.bundle_weight(q)) for q in range(0, q_max + 2)]
    for tag, b in bundles:
        if b is None:
            continue
        hv = h1_with_route(b)
        if hv.route == "riemann-roch":
            continue  # h1 is defined by the identity itself
        h0v = sections(b).h0
        good = h0v - hv.value == b.degree - g + 1
        ok = ok and good
        rows.append({"space": tag, "bundle": b.label(), "h0": h0v, "h1": hv.value, "route": hv.route, "ok": good})
    return {"passed": ok, "spaces": rows}


def betti_table(B: LineBundle, L: LineBundle, p_max: int | None = None, q_max: int = 3,
                seed: int = 0, checks: bool = True, hilbert_m: int = 4, duality: bool = True,
                rank_options: RankOptions | None = None, cx: KoszulComplex | None = None) -> BettiTable:
    """Compute kappa_{p,q}(C, B; L) for 0 <= p <= p_max (default r(L)) and 0 <= q <= q_max."""
    opts = rank_options or RankOptions(seed=seed)
    cx = cx or KoszulComplex(B, L, opts)
    r = cx.r
    if p_max is None:
        p_max = r
    t0 = time.perf_counter()
    table = BettiTable(curve=L.curve.name or f"deg{L.curve.degree}", bundle_B=B.label(), bundle_L=L.label(),
                       prime=L.curve.p, seed=opts.seed, r=r)
    for q in range(0, q_max + 1):
        for p in range(0, p_max + 1):
            table.cells[(p, q)] = cx.cell(p, q)
    table.meta["compute_seconds"] = round(time.perf_counter() - t0, 3)
    if checks:
        t1 = time.perf_counter()
        table.checks["dsquared"] = dsquared_check(cx, p_max, q_max)
        table.checks["hilbert"] = hilbert_identity_check(table, B, L, hilbert_m, cx)
        table.checks["riemann_roch"] = riemann_roch_check(cx, q_max)
        if duality:
            table.checks["duality"] = duality_check(cx)
        table.meta["check_seconds"] = round(time.perf_counter() - t1, 3)
    table.meta["rank"] = {"components": cx.rank_stats.components, "sparse_pivots": cx.rank_stats.sparse_pivots,
                          "dense_calls": cx.rank_stats.dense_calls, "wiedemann_calls": cx.rank_stats.wiedemann_calls}
    table.meta["h0"] = {str(q): cx.w_dim(q) for q in range(0, q_max + 2)}
    return table
