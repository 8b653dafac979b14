"""Arithmetic predictions for Koszul cohomology of curves, and their comparison
against computed Betti tables.

Every ``predict_*`` function is a pure predicate on numerical invariants.
Hypothesis failures raise :class:`NotApplicable` carrying the violated
inequality.  :func:`verify_report` gathers the invariants of a concrete
(curve, B, L), runs every applicable predicate and compares the claims with
computed dimensions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .bundles import BundleError, LineBundle, bundle_create, h0, h1, p_very_ample_certificate
from .curve import PlaneCurve


class NotApplicable(Exception):
    """A hypothesis of a prediction is not satisfied."""


@dataclass(frozen=True)
class CurveInvariants:
    g: int
    d: int
    gon: int
    cliff: int

    @classmethod
    def of(cls, curve: PlaneCurve) -> "CurveInvariants":
        return cls.plane(curve.degree)

    @classmethod
    def plane(cls, d: int) -> "CurveInvariants":
        # plane-curve values stored verbatim; Cliff is 0 by convention for g <= 3
        g = (d - 1) * (d - 2) // 2
        return cls(g=g, d=d, gon=d - 1, cliff=d - 4 if d >= 5 else 0)

    def r(self, deg: int, h0_value: Optional[int] = None) -> int:
        """r(L) = h0(L) - 1, by Riemann-Roch when deg L >= 2g - 1."""
        if deg >= 2 * self.g - 1:
            return deg - self.g
        if h0_value is None:
            raise NotApplicable(f"deg {deg} < 2g-1 = {2 * self.g - 1}: r(L) needs h0 from sections")
        return h0_value - 1


@dataclass(frozen=True)
class Claim:
    p: int
    q: int
    nonzero: Optional[bool] = None
    value: Optional[int] = None  # exact dimension when known

    def holds_for(self, kappa: int) -> bool:
        if self.value is not None:
            return kappa == self.value
        return (kappa != 0) == self.nonzero

    def to_json(self) -> dict:
        out = {"p": self.p, "q": self.q}
        if self.value is not None:
            out["kappa"] = self.value
        else:
            out["nonzero"] = self.nonzero
        return out


# --------------------------------------------------------------------------
# pure predicates


def predict_weight_one(g: int, gon: int, deg_L: int, is_plane_omega_H: bool = False,
                       is_omega_xi: bool = False) -> set[int]:
    """{p : K_{p,1}(C; L) != 0} once deg L >= 2g + gon - 2."""
    if g < 2:
        raise NotApplicable(f"g = {g} < 2")
    if deg_L <= 2 * g - 2:
        raise NotApplicable(f"deg L = {deg_L} <= 2g-2: L may be special")
    if deg_L < 2 * g + gon - 2:
        raise NotApplicable(f"deg L = {deg_L} < 2g+gon-2 = {2 * g + gon - 2}")
    r = deg_L - g
    top = r - gon
    if is_plane_omega_H and deg_L == 2 * g + gon - 1:
        top += 1
    elif is_omega_xi and deg_L == 2 * g + gon - 2:
        top += 1
    return set(range(1, top + 1))


def predict_weight_one_3g(g: int, gon: int, deg_L: int, plane_degree: Optional[int] = None,
                          is_omega_squared: bool = False, is_omega_squared_minus_point: bool = False) -> set[int]:
    """Weight-one range for deg L >= 3g - 2; exceptions live only on plane quartics and in genus 2."""
    if g < 2:
        raise NotApplicable(f"g = {g} < 2")
    if deg_L < 3 * g - 2:
        raise NotApplicable(f"deg L = {deg_L} < 3g-2 = {3 * g - 2}")
    r = deg_L - g
    top = r - gon
    quartic = plane_degree == 4 and g == 3
    if quartic and ((is_omega_squared and deg_L == 8) or (is_omega_squared_minus_point and deg_L == 7)):
        top += 1
    elif g == 2 and is_omega_squared and deg_L == 4:
        top += 1
    return set(range(1, top + 1))


def predict_green(g: int, deg_L: int, p: int) -> bool:
    """True when K_{p,2}(C; L) is forced to vanish (deg L >= 2g + 1 + p)."""
    if g < 2:
        raise NotApplicable(f"g = {g} < 2")
    return 0 <= p <= deg_L - 2 * g - 1


def predict_green_window(g: int, deg_L: int) -> set[int]:
    """{p : K_{p,2}(C; L) != 0} = [r - g, r - 1] once deg L >= 3g - 2."""
    if g < 2:
        raise NotApplicable(f"g = {g} < 2")
    if deg_L < 3 * g - 2:
        raise NotApplicable(f"deg L = {deg_L} < 3g-2 = {3 * g - 2}")
    r = deg_L - g
    return set(range(r - g, r))


def predict_gl_nonvanishing(r1: int, r2: int) -> set[int]:
    """K_{p,1}(C; M1 M2) != 0 for 1 <= p <= r1 + r2 - 1."""
    if r1 < 1 or r2 < 1:
        raise NotApplicable(f"r1 = {r1}, r2 = {r2}: both must be >= 1")
    return set(range(1, r1 + r2))


def vanishing_bound(g: int, p: int, h0_L_minus_B: int, h1_B: int) -> int:
    return 2 * g + p + h0_L_minus_B - h1_B


def predict_weight_one_vanishing(g: int, deg_B: int, h1_B: int, h0_L_minus_B: int, deg_L: int, p: int) -> bool:
    """True when K_{p,1}(C, B; L) = 0 is guaranteed for p-very ample B.

    deg L >= 2g + p + h0(L - B) - h1(B), equivalently h1(L - B) <= r(B) - p - 1.
    ``deg_B`` only enters through the equivalence and is kept for the record.
    """
    return deg_L >= vanishing_bound(g, p, h0_L_minus_B, h1_B)


def predict_canonical_twist(g: int, p: int, deg_L: int, h1_L_minus_omega: int) -> bool:
    """K_{p,1}(C, omega; L) != 0  iff  h1(L - omega) >= g - p - 1 (omega p-very ample, deg L >= 2g + p)."""
    if g < 2:
        raise NotApplicable(f"g = {g} < 2")
    if deg_L < 2 * g + p:
        raise NotApplicable(f"deg L = {deg_L} < 2g+p = {2 * g + p}")
    return h1_L_minus_omega >= g - p - 1


def predict_canonical_twist_next(g: int, p: int, deg_L: int) -> bool:
    """K_{p+1,1}(C, omega; L) != 0 when omega is not (p+1)-very ample; the one edge is (g, p, deg) = (2, 0, 4)."""
    if g < 2:
        raise NotApplicable(f"g = {g} < 2")
    if deg_L < 2 * g + p:
        raise NotApplicable(f"deg L = {deg_L} < 2g+p = {2 * g + p}")
    return not (g == 2 and p == 0 and deg_L == 4)


@dataclass(frozen=True)
class ClassifyData:
    """Auxiliary section data for the weight-one classification."""

    h0_L_minus_B: int
    h1_L_minus_B: int
    B_bpf_pencil: Optional[bool] = None
    B_plane_embedding: bool = False  # C in P H^0(B) = P^2 of degree >= 4
    L_minus_B_computes_cliff: Optional[bool] = None
    B_not_next_very_ample: Optional[bool] = None


@dataclass(frozen=True)
class Classification:
    tag: str  # vanish | exc1 | exc2 | exc3 | no-claim
    vanish: tuple[int, ...] = ()
    nonvanish: tuple[int, ...] = ()
    reason: str = ""


def predict_weight_one_classify(g: int, deg_B: int, h1_B: int, p: int, deg_L: int, cliff: int,
                                aux: ClassifyData) -> Classification:
    """Vanishing of K_{i,1}(C, B; L), i <= p, for p-very ample B and globally generated L."""
    if g < 2:
        raise NotApplicable(f"g = {g} < 2")
    if deg_L < 2 * g + p + 1 - h1_B:
        return Classification("no-claim", reason=f"deg L = {deg_L} < 2g+p+1-h1(B) = {2 * g + p + 1 - h1_B}")
    bound = 4 * g + 2 * p - 2 * h1_B - cliff
    if deg_B + deg_L < bound:
        return Classification("no-claim", reason=f"deg B + deg L = {deg_B + deg_L} < {bound}")
    below = tuple(range(0, p))
    nxt: tuple[int, ...] = ()
    if aux.B_not_next_very_ample and deg_L >= 2 * g + p + 1:
        nxt = (p + 1,)
    if p == 0 and aux.h1_L_minus_B == 1:
        if aux.B_bpf_pencil is None:
            return Classification("no-claim", below, nxt, "pencil status of |B| unknown")
        if aux.B_bpf_pencil:
            return Classification("exc1", below, (0,) + nxt, "|B| base point free pencil, h1(L-B) = 1")
    if p == 1 and aux.B_plane_embedding and aux.h1_L_minus_B == 1:
        return Classification("exc2", (0,), (1,) + nxt, "B embeds C as a plane curve, h1(L-B) = 1")
    eq_deg = deg_L == 2 * g + p + aux.h0_L_minus_B - h1_B - 1
    if eq_deg and deg_B + deg_L == bound:
        if aux.L_minus_B_computes_cliff is None:
            return Classification("no-claim", below, nxt, "equality case, L - B not certified for Cliff")
        if aux.L_minus_B_computes_cliff:
            return Classification("exc3", below, (p,) + nxt, "equality case, L - B computes Cliff")
    return Classification("vanish", below + (p,), nxt)


def predict_half_genus_bound(g: int, gon: int, deg_L: int, plane_degree: Optional[int] = None,
                             is_plane_omega_H: bool = False, is_omega_xi: bool = False) -> set[int]:
    """Weight-one range for deg L >= 2g + floor((g-1)/2)."""
    if g < 2:
        raise NotApplicable(f"g = {g} < 2")
    need = 2 * g + (g - 1) // 2
    if deg_L < need:
        raise NotApplicable(f"deg L = {deg_L} < 2g+floor((g-1)/2) = {need}")
    r = deg_L - g
    top = r - gon
    exceptional = {(3, 3, 8), (6, 4, 15), (10, 5, 24)}
    if is_plane_omega_H and plane_degree in (4, 5, 6) and (g, gon, deg_L) in exceptional:
        top += 1
    elif is_omega_xi and gon == (g + 3) // 2 and deg_L == 2 * g + gon - 2:
        top += 1
    return set(range(1, top + 1))


def predict_quadric_count(g: int, deg_L: int) -> int:
    """dim K_{1,1}(C; L) = ((d-g)^2 - d - g) / 2 for deg L = d >= 2g + 1."""
    if deg_L < 2 * g + 1:
        raise NotApplicable(f"deg L = {deg_L} < 2g+1 = {2 * g + 1}")
    return ((deg_L - g) ** 2 - deg_L - g) // 2


def predict_np_failure(g: int, deg_L: int, h0_L_minus_omega: int) -> Optional[int]:
    """Index p+1 with K_{p+1,2}(C; L) != 0 when deg L = 2g + p + 1 and L - omega is effective."""
    if g < 1:
        raise NotApplicable(f"g = {g} < 1")
    p = deg_L - 2 * g - 1
    if p < 0:
        raise NotApplicable(f"deg L = {deg_L} < 2g+1")
    if h0_L_minus_omega == 0:
        raise NotApplicable("h0(L - omega) = 0")
    return p + 1


def predict_pencil_trick(g: int, deg_L: int) -> set[int]:
    """{w : K_{w,1}(C, B L; L) = 0} for effective B != O and nonspecial globally generated L."""
    if deg_L < 2 * g:
        raise NotApplicable(f"deg L = {deg_L} < 2g: L not guaranteed nonspecial and globally generated")
    return set(range(0, deg_L - 2 * g + 1))


# --------------------------------------------------------------------------
# claim sets and the invariant-only sweep


def weight_one_claims(g: int, gon: int, deg_L: int, **flags) -> list[Claim]:
    nz = predict_weight_one(g, gon, deg_L, **flags)
    r = deg_L - g
    return [Claim(p, 1, p in nz) for p in range(0, r + 1)]


def green_claims(g: int, deg_L: int) -> list[Claim]:
    r = deg_L - g
    out = [Claim(p, 2, False) for p in range(0, r + 1) if predict_green(g, deg_L, p)]
    try:
        window = predict_green_window(g, deg_L)
    except NotApplicable:
        return out
    seen = {c.p for c in out}
    out += [Claim(p, 2, p in window) for p in range(0, r + 1) if p not in seen]
    return sorted(out, key=lambda c: c.p)


def gl_claims(r1: int, r2: int) -> list[Claim]:
    return [Claim(p, 1, True) for p in sorted(predict_gl_nonvanishing(r1, r2))]


def contradictions(*claim_lists: Iterable[Claim]) -> list[tuple[int, int]]:
    """(p, q) positions claimed both zero and nonzero across the given lists."""
    seen: dict[tuple[int, int], set[bool]] = {}
    for claims in claim_lists:
        for c in claims:
            nz = c.nonzero if c.value is None else c.value != 0
            seen.setdefault((c.p, c.q), set()).add(nz)
    return sorted(k for k, v in seen.items() if len(v) > 1)


def consistency_sweep(g_max: int = 40) -> dict:
    """Cross-check weight-one, Green and Green-Lazarsfeld claims over all admissible tuples.

    Tuples: 2 <= g <= g_max, 2 <= gon <= floor((g+3)/2), 2g+gon-2 <= deg L <= 3g+5.
    The nonvanishing decomposition uses a gonal pencil (r1 = 1) and its residual
    (r2 >= deg L - gon - g by Riemann-Roch).
    """
    tuples = 0
    bad = []
    for g in range(2, g_max + 1):
        for gon in range(2, (g + 3) // 2 + 1):
            for deg in range(2 * g + gon - 2, 3 * g + 6):
                tuples += 1
                lists = [weight_one_claims(g, gon, deg), green_claims(g, deg)]
                try:
                    lists.append(gl_claims(1, deg - gon - g))
                except NotApplicable:
                    pass
                clash = contradictions(*lists)
                if clash:
                    bad.append({"g": g, "gon": gon, "deg": deg, "at": clash})
    return {"tuples": tuples, "contradictions": bad}


# --------------------------------------------------------------------------
# comparison against computed tables


@dataclass
class Prediction:
    theorem: str
    hypotheses: list[dict] = field(default_factory=list)
    claims: list[Claim] = field(default_factory=list)
    tag: str = ""
    verdict: str = "not-applicable"
    reason: str = ""
    computed: list[dict] = field(default_factory=list)
    mismatches: list[dict] = field(default_factory=list)

    def hyp(self, name: str, holds: bool, detail: str = "") -> bool:
        self.hypotheses.append({"name": name, "holds": bool(holds), "detail": detail})
        return holds

    def to_json(self) -> dict:
        out = {"theorem": self.theorem, "hypotheses": self.hypotheses,
               "predicted": [c.to_json() for c in self.claims], "computed": self.computed,
               "verdict": self.verdict}
        if self.tag:
            out["tag"] = self.tag
        if self.reason:
            out["reason"] = self.reason
        if self.mismatches:
            out["mismatches"] = self.mismatches
        return out


@dataclass
class PredictionReport:
    curve: str
    bundle_B: str
    bundle_L: str
    predictions: list[Prediction]
    table: object = None

    @property
    def verdict(self) -> str:
        applied = [p for p in self.predictions if p.verdict != "not-applicable"]
        if any(p.verdict == "mismatch" for p in applied):
            return "mismatch"
        return "match" if applied else "not-applicable"

    @property
    def ok(self) -> bool:
        return self.verdict != "mismatch"

    def by_theorem(self, theorem: str) -> Prediction:
        for p in self.predictions:
            if p.theorem == theorem:
                return p
        raise KeyError(theorem)

    def to_json(self) -> dict:
        return {"curve": self.curve, "bundle_B": self.bundle_B, "bundle_L": self.bundle_L,
                "verdict": self.verdict, "reports": [p.to_json() for p in self.predictions]}


def _kappa_lookup(table, cx):
    def get(p: int, q: int) -> Optional[int]:
        if table is not None and (p, q) in table.cells:
            return table.cells[(p, q)].kappa
        if cx is None or p < 0 or q < 0 or p > cx.n:
            return None
        cell = cx.cell(p, q)
        if table is not None:
            table.cells[(p, q)] = cell
        return cell.kappa
    return get


def _settle(pred: Prediction, get) -> Prediction:
    if not pred.claims:
        pred.verdict = "not-applicable"
        if not pred.reason:
            pred.reason = "no claims under the satisfied hypotheses"
        return pred
    for c in pred.claims:
        k = get(c.p, c.q)
        if k is None:
            continue
        pred.computed.append({"p": c.p, "q": c.q, "kappa": k})
        if not c.holds_for(k):
            pred.mismatches.append({**c.to_json(), "computed": k})
    pred.verdict = "mismatch" if pred.mismatches else "match"
    return pred


def _na(theorem: str, reason: str) -> Prediction:
    return Prediction(theorem, verdict="not-applicable", reason=reason)


def _safe_bundle(curve, k, D=None):
    try:
        return bundle_create(curve, k, D)
    except BundleError:
        return None


def _residual(L: LineBundle, B: LineBundle) -> Optional[LineBundle]:
    """L (x) B^-1 when it is of twist-down shape (divisor of B contained in that of L)."""
    D = L.minus.minus(B.minus)
    if D is None:
        return None
    return bundle_create(L.curve, L.twist - B.twist, D)


def _residual_numbers(L: LineBundle, B: LineBundle, g: int) -> Optional[tuple[int, int]]:
    """(h0, h1) of L (x) B^-1, from sections when representable, else by degree."""
    res = _residual(L, B)
    if res is not None:
        return h0(res), h1(res)
    deg = L.degree - B.degree
    if deg < 0:
        return 0, g - 1 - deg
    if deg > 2 * g - 2:
        return deg - g + 1, 0
    return None


def _is_line_pencil(B: LineBundle) -> bool:
    # O(1)(-x): lines through a smooth point x, base point free
    return B.twist == 1 and len(B.minus.items) == 1 and B.minus.items[0][1] == 1


def _theoretical_very_ample(B: LineBundle, p: int) -> bool:
    if B.minus:
        return B.degree >= 2 * B.curve.genus + p or (p == 0 and _is_line_pencil(B))
    return p_very_ample_certificate(B, p).kind == "theoretical"


def _computes_cliff(A: LineBundle, inv: CurveInvariants) -> bool:
    if inv.g <= 3:
        return False  # no bundle has h0, h1 >= 2; Cliff is set by convention
    a0, a1 = h0(A), h1(A)
    return a0 >= 2 and a1 >= 2 and A.degree - 2 * a0 + 2 == inv.cliff


def _oracles_trivial_B(curve, L, inv, r, get, q_max) -> list[Prediction]:
    g, gon, deg = inv.g, inv.gon, L.degree
    preds: list[Prediction] = []
    d = curve.degree
    omega_H = L.recipe == "omega_H"
    omega_xi = L.recipe == "omega_xi"
    nonspecial = h1(L) == 0

    pr = Prediction("weight-zero")
    if pr.hyp("L globally generated", deg >= 2 * g or L.is_pure_twist, f"deg L = {deg}"):
        pr.claims = [Claim(0, 0, value=1)] + [Claim(p, 0, False) for p in range(1, r + 1)]
    preds.append(_settle(pr, get))

    pr = Prediction("weight-three")
    if pr.hyp("L nonspecial", nonspecial, f"h1(L) = {h1(L)}"):
        pr.claims = [Claim(p, q, False) for q in range(3, q_max + 1) for p in range(0, r + 1)]
        if not pr.claims:
            pr.reason = f"table stops at q = {q_max}"
    preds.append(_settle(pr, get))

    pr = Prediction("weight-one-range")
    try:
        pr.hyp("deg L >= 2g+gon-2", True, f"{deg} >= {2 * g + gon - 2}")
        pr.claims = weight_one_claims(g, gon, deg, is_plane_omega_H=omega_H, is_omega_xi=omega_xi)
        pr.tag = "plane omega(x)H" if omega_H and deg == 2 * g + gon - 1 else (
            "omega(xi)" if omega_xi and deg == 2 * g + gon - 2 else "generic")
    except NotApplicable as e:
        pr.hypotheses[-1]["holds"] = False
        pr.reason = str(e)
    preds.append(_settle(pr, get))

    pr = Prediction("weight-one-range-3g-2")
    try:
        nz = predict_weight_one_3g(g, gon, deg, d, is_omega_squared=(d == 4 and L.is_pure_twist and L.twist == 2),
                                   is_omega_squared_minus_point=(d == 4 and omega_xi))
        pr.hyp("deg L >= 3g-2", True, f"{deg} >= {3 * g - 2}")
        pr.claims = [Claim(p, 1, p in nz) for p in range(0, r + 1)]
        pr.tag = "plane quartic" if d == 4 and max(nz, default=0) > r - gon else "generic"
    except NotApplicable as e:
        pr.hyp("deg L >= 3g-2", False, str(e))
        pr.reason = str(e)
    preds.append(_settle(pr, get))

    pr = Prediction("half-genus-bound")
    try:
        nz = predict_half_genus_bound(g, gon, deg, d, omega_H, omega_xi)
        pr.hyp("deg L >= 2g+floor((g-1)/2)", True)
        pr.claims = [Claim(p, 1, p in nz) for p in range(0, r + 1)]
        pr.tag = "exceptional" if max(nz, default=0) > r - gon else "generic"
    except NotApplicable as e:
        pr.hyp("deg L >= 2g+floor((g-1)/2)", False, str(e))
        pr.reason = str(e)
    preds.append(_settle(pr, get))

    pr = Prediction("green-lazarsfeld-nonvanishing")
    M1 = bundle_create(curve, 1)
    M2 = _safe_bundle(curve, L.twist - 1, L.minus)
    if M2 is None:
        pr.reason = "L (x) O(-1) not representable"
    else:
        r1, r2 = h0(M1) - 1, h0(M2) - 1
        pr.hyp("L = O(1) (x) M2 with r1, r2 >= 1", r1 >= 1 and r2 >= 1, f"r1 = {r1}, r2 = {r2}")
        try:
            pr.claims = gl_claims(r1, r2)
        except NotApplicable as e:
            pr.reason = str(e)
    preds.append(_settle(pr, get))

    pr = Prediction("green-2g+1+p")
    pr.hyp("g >= 2", g >= 2)
    if g >= 2:
        pr.claims = green_claims(g, deg)
        pr.tag = "with window" if deg >= 3 * g - 2 else "vanishing only"
    preds.append(_settle(pr, get))

    pr = Prediction("quadric-count")
    try:
        pr.claims = [Claim(1, 1, value=predict_quadric_count(g, deg))]
        pr.hyp("deg L >= 2g+1", True)
    except NotApplicable as e:
        pr.hyp("deg L >= 2g+1", False, str(e))
        pr.reason = str(e)
    preds.append(_settle(pr, get))

    pr = Prediction("np-failure")
    omega = bundle_create(curve, d - 3)
    res = _residual(L, omega)
    h0res = h0(res) if res is not None else None
    try:
        if h0res is None:
            raise NotApplicable("L (x) omega^-1 not representable")
        idx = predict_np_failure(g, deg, h0res)
        pr.hyp("deg L = 2g+p+1 and h0(L - omega) != 0", True, f"p = {idx - 1}, h0 = {h0res}")
        pr.claims = [Claim(idx, 2, True)]
    except NotApplicable as e:
        pr.hyp("deg L = 2g+p+1 and h0(L - omega) != 0", False, str(e))
        pr.reason = str(e)
    preds.append(_settle(pr, get))
    return preds


def _oracles_general_B(curve, B, L, inv, get, p_max) -> list[Prediction]:
    g, deg_L, deg_B = inv.g, L.degree, B.degree
    d = curve.degree
    preds: list[Prediction] = []
    res = _residual(L, B)
    nums = _residual_numbers(L, B, g)
    if nums is None:
        return [_na("weight-one-vanishing", "h0(L (x) B^-1) not computable for this B"),
                _na("weight-one-classification", "h0(L (x) B^-1) not computable for this B")]
    h1B = h1(B)
    h0res, h1res = nums
    is_omega = B.is_pure_twist and B.twist == d - 3
    rB = h0(B) - 1
    ample_ps = [p for p in range(0, min(p_max, max(rB, 0)) + 1) if _theoretical_very_ample(B, p)]

    pr = Prediction("weight-one-vanishing")
    for p in ample_ps:
        bound = vanishing_bound(g, p, h0res, h1B)
        if pr.hyp(f"p={p}: B p-very ample and deg L >= {bound}", deg_L >= bound,
                  f"h0(L-B) = {h0res}, h1(B) = {h1B}"):
            if predict_weight_one_vanishing(g, deg_B, h1B, h0res, deg_L, p):
                pr.claims.append(Claim(p, 1, False))
    if not ample_ps:
        pr.reason = "B not certified p-very ample for any p"
    preds.append(_settle(pr, get))

    if is_omega and g >= 2:
        pr = Prediction("canonical-twist")
        nxt = Prediction("canonical-twist-next")
        for p in ample_ps:
            try:
                nz = predict_canonical_twist(g, p, deg_L, h1res)
            except NotApplicable as e:
                pr.hyp(f"p={p}", False, str(e))
                continue
            pr.hyp(f"p={p}: omega p-very ample, deg L >= 2g+p", True, f"h1(L - omega) = {h1res}")
            pr.claims.append(Claim(p, 1, nz))
            cert = p_very_ample_certificate(B, p + 1)
            if nxt.hyp(f"p={p}: omega not {p + 1}-very ample (witness)", cert.kind == "counterexample",
                       str(cert.divisor) if cert.divisor is not None else cert.reason):
                nxt.claims.append(Claim(p + 1, 1, predict_canonical_twist_next(g, p, deg_L)))
        preds.append(_settle(pr, get))
        preds.append(_settle(nxt, get))

    pr = Prediction("weight-one-classification")
    gg = deg_L >= 2 * g or (L.is_pure_twist and L.twist >= 0)
    if not pr.hyp("L globally generated", gg, f"deg L = {deg_L}") or g < 2:
        pr.reason = "L not certified globally generated" if g >= 2 else "g < 2"
        preds.append(_settle(pr, get))
        return preds
    pencil = (True if _is_line_pencil(B) else None) if h0(B) == 2 else False
    tags = []
    for p in ample_ps:
        cert_next = p_very_ample_certificate(B, p + 1) if B.is_pure_twist else None
        aux = ClassifyData(
            h0_L_minus_B=h0res, h1_L_minus_B=h1res, B_bpf_pencil=pencil,
            B_plane_embedding=(B.is_pure_twist and B.twist == 1 and d >= 4),
            L_minus_B_computes_cliff=_computes_cliff(res, inv) if res is not None else None,
            B_not_next_very_ample=(cert_next is not None and cert_next.kind == "counterexample"))
        cls = predict_weight_one_classify(g, deg_B, h1B, p, deg_L, inv.cliff, aux)
        pr.hyp(f"p={p}: classification", cls.tag != "no-claim", f"{cls.tag}: {cls.reason}".rstrip(": "))
        tags.append(f"p={p}:{cls.tag}")
        have = {(c.p, c.q) for c in pr.claims}
        for i in cls.vanish:
            if (i, 1) not in have:
                pr.claims.append(Claim(i, 1, False))
        for i in cls.nonvanish:
            if (i, 1) not in have:
                pr.claims.append(Claim(i, 1, True))
    pr.tag = ", ".join(tags)
    preds.append(_settle(pr, get))
    return preds


def verify_report(curve: PlaneCurve, B: LineBundle, L: LineBundle, table=None, cx=None,
                  p_max: Optional[int] = None, q_max: int = 3, seed: int = 0) -> PredictionReport:
    """Evaluate every applicable prediction for R(C, B; L) against computed dimensions."""
    from .koszul import BettiTable, KoszulComplex
    from .linalg import RankOptions

    inv = CurveInvariants.of(curve)
    if cx is None:
        cx = KoszulComplex(B, L, RankOptions(seed=seed))
    r = cx.r
    if table is None:
        # only the cells some claim refers to get computed
        table = BettiTable(curve=curve.name or f"deg{curve.degree}", bundle_B=B.label(), bundle_L=L.label(),
                           prime=curve.p, seed=seed, r=r)
    else:
        q_max = max(q_max, table.q_max)
    if p_max is None:
        p_max = r
    get = _kappa_lookup(table, cx)
    if B.is_pure_twist and B.twist == 0:
        preds = _oracles_trivial_B(curve, L, inv, r, get, q_max)
    else:
        preds = _oracles_general_B(curve, B, L, inv, get, p_max)
    return PredictionReport(curve.name or f"deg{curve.degree}", B.label(), L.label(), preds, table)
