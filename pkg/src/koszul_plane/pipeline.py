"""Orchestration of the four commands on a parsed specification."""
from __future__ import annotations

import random
import time
from typing import Optional

from .bundles import BundleError, h1_with_route, p_very_ample_certificate, sections
from .curve import CurveError, find_rational_points
from .field import next_prime
from .koszul import BettiTable, KoszulComplex, betti_table
from .linalg import RankOptions
from .oracles import CurveInvariants, PredictionReport, verify_report
from .specfile import CurveSpec, SpecError


def second_prime_for(seed: int, avoid: int) -> int:
    """A seeded random 31-bit prime different from ``avoid``."""
    rng = random.Random(f"second-prime:{seed}")
    while True:
        q = next_prime(rng.randrange(1 << 30, 1 << 31))
        if q != avoid and q < (1 << 31):
            return q


def build(spec: CurveSpec, prime: Optional[int] = None):
    curve = spec.build_curve(prime)
    B = spec.bundle_or_default(curve, "B", 0)
    if "L" not in spec.bundles:
        raise SpecError(0, "the specification needs a bundle named 'L'")
    L = spec.build_bundle(curve, "L")
    return curve, B, L


def run_curve_check(spec: CurveSpec, prime: Optional[int] = None, max_points: int = 8) -> dict:
    curve = spec.build_curve(prime)
    inv = CurveInvariants.of(curve)
    pts = find_rational_points(curve, max_points)
    return {"curve": curve.name or f"deg{curve.degree}", "prime": curve.p, "degree": curve.degree,
            "equation": str(curve.form), "certificate": curve.certificate.to_json(),
            "genus": inv.g, "gonality": inv.gon, "clifford_index": inv.cliff,
            "model_shear": [list(r) for r in curve.transform] if not curve.is_model_identity else None,
            "rational_points": [list(pt.coords) for pt in pts],
            "pinned_points": [list(pt) for _, pt in spec.points]}


def run_sections(spec: CurveSpec, prime: Optional[int] = None, names: Optional[list[str]] = None,
                 very_ample_p: Optional[int] = None) -> dict:
    curve = spec.build_curve(prime)
    out = []
    for name in names or list(spec.bundles):
        b = spec.build_bundle(curve, name)
        space = sections(b)
        hv = h1_with_route(b)
        entry = {"name": name, "bundle": b.describe(), "h0": space.h0, "h1": hv.value, "h1_route": hv.route,
                 "riemann_roch_ok": space.h0 - hv.value == b.degree - curve.genus + 1,
                 "basis": [str(f) for f in space.forms()]}
        if very_ample_p is not None and b.is_pure_twist:
            entry["very_ample"] = p_very_ample_certificate(b, very_ample_p).to_json()
        out.append(entry)
    return {"curve": curve.name or f"deg{curve.degree}", "prime": curve.p, "genus": curve.genus, "bundles": out}


def two_prime_check(spec: CurveSpec, table: BettiTable, prime2: int, seed: int = 0) -> dict:
    """Recompute every cell of ``table`` at a second prime and compare."""
    if prime2 == table.prime:
        return {"passed": None, "applicable": False, "reason": "second prime equals the first"}
    try:
        curve, B, L = build(spec, prime2)
    except (SpecError, CurveError, BundleError, ValueError) as e:
        # pinned coordinates rarely lift; a curve may also degenerate modulo a bad prime
        return {"passed": None, "applicable": False, "second_prime": prime2, "reason": str(e)}
    cx = KoszulComplex(B, L, RankOptions(seed=seed))
    mism = []
    for (p, q), cell in sorted(table.cells.items()):
        k2 = cx.kappa(p, q)
        if k2 != cell.kappa:
            mism.append({"p": p, "q": q, "kappa": cell.kappa, "kappa_second": k2})
    return {"passed": not mism, "applicable": True, "second_prime": prime2, "cells": len(table.cells),
            "mismatches": mism}


def run_betti(spec: CurveSpec, prime: Optional[int] = None, second_prime: Optional[int] = None,
              p_max: Optional[int] = None, q_max: int = 3, seed: int = 0, checks: bool = True) -> BettiTable:
    curve, B, L = build(spec, prime)
    table = betti_table(B, L, p_max=p_max, q_max=q_max, seed=seed, checks=checks)
    table.curve = curve.name or table.curve
    if checks:
        t0 = time.perf_counter()
        p2 = second_prime if second_prime is not None else second_prime_for(seed, curve.p)
        table.checks["two_prime"] = two_prime_check(spec, table, p2, seed)
        table.meta["two_prime_seconds"] = round(time.perf_counter() - t0, 3)
    return table


def checks_passed(table: BettiTable) -> bool:
    return all(c.get("passed") is not False for c in table.checks.values())


def run_verify(spec: CurveSpec, prime: Optional[int] = None, p_max: Optional[int] = None, q_max: int = 3,
               seed: int = 0) -> PredictionReport:
    curve, B, L = build(spec, prime)
    return verify_report(curve, B, L, p_max=p_max, q_max=q_max, seed=seed)
