"""Line bundles O_C(k)(-D) on a plane curve and their spaces of global sections.

Sections of O_C(k) are degree-k forms modulo the curve equation.  All
computations happen in the curve's monic model (z^d coefficient 1), where
every class has a unique representative with z-degree < d.
"""
from __future__ import annotations

import itertools
import threading
import weakref
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import linalg, upoly
from .curve import (CurveError, CurvePoint, PlaneCurve, branch_expansion, find_rational_points,
                    make_point, normalize_point)
from .forms import Exp, HomogeneousForm, add_exp, monomials


class BundleError(ValueError):
    pass


@dataclass(frozen=True)
class Divisor:
    """Effective divisor supported on smooth rational points (original coordinates)."""

    items: tuple[tuple[CurvePoint, int], ...] = ()

    def __post_init__(self):
        merged: dict[tuple, list] = {}
        for pt, m in self.items:
            if m < 1:
                raise BundleError("multiplicities must be positive")
            if pt.coords in merged:
                merged[pt.coords][1] += m
            else:
                merged[pt.coords] = [pt, m]
        object.__setattr__(self, "items", tuple((pt, m) for _, (pt, m) in sorted(merged.items())))

    @classmethod
    def of(cls, curve: PlaneCurve, pairs: Iterable[tuple[Sequence[int] | CurvePoint, int]]) -> "Divisor":
        items = []
        for pt, m in pairs:
            try:
                cp = pt if isinstance(pt, CurvePoint) else make_point(curve.form, pt)
            except CurveError as e:
                raise BundleError(str(e)) from None
            if not curve.contains(cp.coords) or not curve.is_smooth_point(cp.coords):
                raise BundleError(f"{cp.coords} is not a smooth point of the curve")
            items.append((cp, m))
        return cls(tuple(items))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.items)

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(self.items + other.items)

    def minus(self, other: "Divisor") -> Optional["Divisor"]:
        """self - other when the difference is effective, else None."""
        have = {pt.coords: [pt, m] for pt, m in self.items}
        for pt, m in other.items:
            if pt.coords not in have or have[pt.coords][1] < m:
                return None
            have[pt.coords][1] -= m
        return Divisor(tuple((pt, m) for pt, m in have.values() if m))

    def scaled(self, n: int) -> "Divisor":
        if n < 0:
            raise BundleError("negative multiple of an effective divisor")
        return Divisor(tuple((pt, m * n) for pt, m in self.items)) if n else Divisor()

    def __bool__(self):
        return bool(self.items)

    def key(self) -> tuple:
        return tuple((pt.coords, m) for pt, m in self.items)

    def __str__(self):
        return " + ".join(f"{m}*({pt.coords[0]}:{pt.coords[1]}:{pt.coords[2]})" if m > 1 else
                          f"({pt.coords[0]}:{pt.coords[1]}:{pt.coords[2]})" for pt, m in self.items) or "0"


@dataclass(frozen=True, eq=False)
class LineBundle:
    curve: PlaneCurve
    twist: int
    minus: Divisor = Divisor()
    name: str = ""
    recipe: str = ""  # structural tag: "O", "omega", "omega_H", "omega_xi", ...

    @property
    def degree(self) -> int:
        return self.twist * self.curve.degree - self.minus.degree

    @property
    def is_pure_twist(self) -> bool:
        return not self.minus

    def key(self) -> tuple:
        return (self.twist, self.minus.key())

    def __eq__(self, other):
        return isinstance(other, LineBundle) and other.curve is self.curve and other.key() == self.key()

    def __hash__(self):
        return hash((id(self.curve), self.key()))

    def tensor(self, other: "LineBundle") -> "LineBundle":
        if other.curve is not self.curve:
            raise BundleError("bundles on different curves")
        return bundle_create(self.curve, self.twist + other.twist, self.minus + other.minus)

    def power(self, n: int) -> "LineBundle":
        if n < 0:
            raise BundleError("negative powers are not of twist-down shape")
        return bundle_create(self.curve, self.twist * n, self.minus.scaled(n))

    def label(self) -> str:
        s = f"O({self.twist})" + (f"(-[{self.minus}])" if self.minus else "")
        return f"{self.name}={s}" if self.name else s

    def describe(self) -> dict:
        return {"label": self.label(), "twist": self.twist, "degree": self.degree,
                "minus": [[list(pt.coords), m] for pt, m in self.minus.items], "recipe": self.recipe}


def _recipe(curve: PlaneCurve, k: int, D: Divisor) -> str:
    d = curve.degree
    if not D:
        if k == 0:
            return "O"
        if k == d - 3:
            return "omega"
        if k == d - 2 and d >= 4:
            return "omega_H"
        if k == 1:
            return "H"
        return f"O({k})"
    # O(d-2)(-x) = omega (x) O(1)(-x), and O(1)(-x) is the pencil cut by lines through x
    if k == d - 2 and len(D.items) == 1 and D.items[0][1] == 1:
        return "omega_xi"
    return ""


def bundle_create(curve: PlaneCurve, k: int, D: Divisor | Iterable | None = None, name: str = "") -> LineBundle:
    if D is None:
        D = Divisor()
    elif not isinstance(D, Divisor):
        D = Divisor.of(curve, D)
    for pt, _ in D.items:
        if not curve.contains(pt.coords):
            raise BundleError(f"{pt.coords} is not on the curve")
        if not curve.is_smooth_point(pt.coords):
            raise BundleError(f"{pt.coords} is singular")
    return LineBundle(curve, k, D, name, _recipe(curve, k, D))


def canonical_bundle(curve: PlaneCurve) -> LineBundle:
    return bundle_create(curve, curve.degree - 3, name="omega")


# --------------------------------------------------------------------------
# per-curve section machinery


class _Context:
    """Normal forms, branch caches and the memo table of section spaces for one curve."""

    def __init__(self, curve: PlaneCurve):
        self.curve = curve
        self.model = curve.model
        self.form = self.model.form
        self.p = curve.p
        self.d = curve.degree
        d = self.d
        # z^d == tail (mod F), with tail = z^d - F having z-degree < d
        self.tail = [(e, (-c) % self.p) for e, c in self.form.coeffs.items() if e != (0, 0, d)]
        self._nf: dict[Exp, dict[Exp, int]] = {}
        self._spaces: dict[tuple, SectionSpace] = {}
        self._branches: dict[tuple, list[list[int]]] = {}
        self._lock = threading.Lock()

    def nf_monomial(self, e: Exp) -> dict[Exp, int]:
        hit = self._nf.get(e)
        if hit is not None:
            return hit
        d, p = self.d, self.p
        if e[2] < d:
            out = {e: 1}
        else:
            base = (e[0], e[1], e[2] - d)
            acc: dict[Exp, int] = {}
            for t, c in self.tail:
                for m, v in self.nf_monomial(add_exp(base, t)).items():
                    acc[m] = (acc.get(m, 0) + c * v) % p
            out = {m: v for m, v in acc.items() if v}
        self._nf[e] = out
        return out

    def reduce(self, poly: dict[Exp, int]) -> dict[Exp, int]:
        p = self.p
        acc: dict[Exp, int] = {}
        for e, c in poly.items():
            for m, v in self.nf_monomial(e).items():
                acc[m] = (acc.get(m, 0) + c * v) % p
        return {m: v for m, v in acc.items() if v}

    def product(self, a: dict[Exp, int], b: dict[Exp, int]) -> dict[Exp, int]:
        p = self.p
        acc: dict[Exp, int] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                c = c1 * c2
                for m, v in self.nf_monomial(add_exp(e1, e2)).items():
                    acc[m] = (acc.get(m, 0) + c * v) % p
        return {m: v for m, v in acc.items() if v}

    def normal_monomials(self, k: int) -> list[Exp]:
        return [e for e in monomials(k) if e[2] < self.d]

    def branch_rows(self, pt: CurvePoint, mult: int, k: int) -> list[list[int]]:
        """Vanishing conditions of order ``mult`` at pt on degree-k normal forms."""
        key = (pt.coords, mult, k)
        if key in self._branches:
            return self._branches[key]
        mpt = make_point(self.form, self.curve.to_model(pt.coords))
        br = branch_expansion(self.model, mpt, mult)
        cols = [br.evaluate_form(HomogeneousForm.monomial(e, self.p)) for e in self.normal_monomials(k)]
        rows = [[col[i] for col in cols] for i in range(mult)]
        self._branches[key] = rows
        return rows


_contexts: "weakref.WeakKeyDictionary[PlaneCurve, _Context]" = weakref.WeakKeyDictionary()
_contexts_lock = threading.Lock()


def context(curve: PlaneCurve) -> _Context:
    with _contexts_lock:
        ctx = _contexts.get(curve)
        if ctx is None:
            ctx = _Context(curve)
            _contexts[curve] = ctx
        return ctx


@dataclass(frozen=True, eq=False)
class SectionSpace:
    """Echelonised basis of H^0 of a bundle, as reduced forms in model coordinates.

    ``pivots[i]`` is the leading monomial of ``basis[i]``; every other basis
    element has coefficient 0 there, so coordinates are read off directly.
    """

    bundle: LineBundle
    degree: int
    basis: tuple[dict, ...]
    pivots: tuple[Exp, ...]

    @property
    def h0(self) -> int:
        return len(self.basis)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def forms(self) -> list[HomogeneousForm]:
        p = self.bundle.curve.p
        return [HomogeneousForm(self.degree, b, p) for b in self.basis]

    def coordinates(self, poly: dict[Exp, int], check: bool = False) -> dict[int, int]:
        """Sparse coordinate vector of a reduced form lying in this space."""
        coords = {}
        for i, e in enumerate(self.pivots):
            c = poly.get(e)
            if c:
                coords[i] = c
        if check:
            p = self.bundle.curve.p
            rebuilt: dict[Exp, int] = {}
            for i, c in coords.items():
                for e, v in self.basis[i].items():
                    rebuilt[e] = (rebuilt.get(e, 0) + c * v) % p
            rebuilt = {e: v for e, v in rebuilt.items() if v}
            if rebuilt != {e: v % p for e, v in poly.items() if v % p}:
                raise BundleError("form does not lie in the section space")
        return coords

    def __len__(self):
        return len(self.basis)


def sections(bundle: LineBundle) -> SectionSpace:
    """Basis of H^0(C, O_C(k)(-D)), memoised per curve."""
    ctx = context(bundle.curve)
    key = bundle.key()
    hit = ctx._spaces.get(key)
    if hit is not None:
        return hit
    space = _compute_sections(ctx, bundle)
    with ctx._lock:
        # single writer per key: the first stored value wins
        return ctx._spaces.setdefault(key, space)


def _compute_sections(ctx: _Context, bundle: LineBundle) -> SectionSpace:
    k = bundle.twist
    p = ctx.p
    if k < 0 or bundle.degree < 0:
        return SectionSpace(bundle, max(k, 0), (), ())
    mons = ctx.normal_monomials(k)
    if not bundle.minus:
        return SectionSpace(bundle, k, tuple({e: 1} for e in mons), tuple(mons))
    conds: list[list[int]] = []
    for pt, mult in bundle.minus.items:
        conds.extend(ctx.branch_rows(pt, mult, k))
    null = linalg.nullspace(conds, len(mons), p)
    if not null:
        return SectionSpace(bundle, k, (), ())
    red, piv = linalg.rref(null, p)
    basis = tuple({mons[j]: v for j, v in enumerate(row) if v} for row in red)
    return SectionSpace(bundle, k, basis, tuple(mons[j] for j in piv))


def h0(bundle: LineBundle) -> int:
    return sections(bundle).h0


@dataclass(frozen=True)
class H1Value:
    value: int
    route: str  # "degree" | "serre" | "riemann-roch"


def h1_with_route(bundle: LineBundle) -> H1Value:
    curve = bundle.curve
    g = curve.genus
    if bundle.degree > 2 * g - 2:
        return H1Value(0, "degree")
    if bundle.is_pure_twist:
        dual = bundle_create(curve, curve.degree - 3 - bundle.twist)
        return H1Value(h0(dual), "serre")
    return H1Value(h0(bundle) - bundle.degree + g - 1, "riemann-roch")


def h1(bundle: LineBundle) -> int:
    return h1_with_route(bundle).value


# --------------------------------------------------------------------------
# multiplication


@dataclass(frozen=True, eq=False)
class Section:
    bundle: LineBundle
    poly: dict

    @property
    def form(self) -> HomogeneousForm:
        return HomogeneousForm(max(self.bundle.twist, 0), self.poly, self.bundle.curve.p)

    def is_zero(self) -> bool:
        return not self.poly

    def __eq__(self, other):
        return isinstance(other, Section) and self.bundle == other.bundle and self.poly == other.poly

    def __hash__(self):
        return hash((self.bundle, frozenset(self.poly.items())))


def section(bundle: LineBundle, poly: dict | HomogeneousForm) -> Section:
    """Wrap a model-coordinate form as a section, reducing it modulo the curve."""
    ctx = context(bundle.curve)
    raw = poly.coeffs if isinstance(poly, HomogeneousForm) else poly
    red = ctx.reduce(raw)
    if red:
        sections(bundle).coordinates(red, check=True)
    return Section(bundle, red)


def multiply(s1: Section, s2: Section) -> Section:
    if s1.bundle.curve is not s2.bundle.curve:
        raise BundleError("sections on different curves")
    ctx = context(s1.bundle.curve)
    return Section(s1.bundle.tensor(s2.bundle), ctx.product(s1.poly, s2.poly))


def basis_sections(bundle: LineBundle) -> list[Section]:
    return [Section(bundle, b) for b in sections(bundle).basis]


# --------------------------------------------------------------------------
# p-very ampleness


@dataclass(frozen=True)
class VeryAmpleCertificate:
    kind: str  # "theoretical" | "rational-divisor" | "counterexample"
    p: int
    reason: str
    divisor: Optional[Divisor] = None
    checked: int = 0

    @property
    def holds(self) -> bool:
        return self.kind != "counterexample"

    def to_json(self) -> dict:
        return {"kind": self.kind, "p": self.p, "reason": self.reason,
                "divisor": str(self.divisor) if self.divisor is not None else None, "checked": self.checked}


def line_section_divisor(curve: PlaneCurve, a: Sequence[int], b: Sequence[int]) -> Divisor:
    """Rational part of the intersection of C with the line through a and b (b may be a tangent direction)."""
    p = curve.p
    f = curve.form.restrict_line(a, b)
    pairs: list[tuple[Sequence[int], int]] = []
    if not f:
        raise CurveError("line is a component of the curve")
    for t, m in upoly.roots_with_multiplicity(f, p):
        pairs.append((normalize_point([(a[i] + t * b[i]) % p for i in range(3)], p), m))
    # the point b itself (t = infinity) lies on C when deg f < d
    missing = curve.degree - upoly.deg(f)
    if missing > 0:
        pairs.append((normalize_point(b, p), missing))
    return Divisor.of(curve, pairs)


def _tangent_direction(curve: PlaneCurve, pt: Sequence[int]) -> tuple[int, int, int]:
    """A second point on the tangent line at pt."""
    p = curve.p
    g = [h.evaluate(pt) for h in curve.form.gradient()]
    # any vector orthogonal to the gradient and independent of pt
    cands = [(g[1], -g[0], 0), (g[2], 0, -g[0]), (0, g[2], -g[1])]
    for c in cands:
        c = tuple(v % p for v in c)
        if any(c):
            # independent of pt?
            m = [pt, c]
            minors = [(m[0][i] * m[1][j] - m[0][j] * m[1][i]) % p for i, j in ((0, 1), (0, 2), (1, 2))]
            if any(minors):
                return c  # type: ignore[return-value]
    raise CurveError("degenerate tangent")


def _sub_divisors(D: Divisor, size: int) -> Iterable[Divisor]:
    pts = [pt for pt, _ in D.items]
    caps = [m for _, m in D.items]
    for combo in itertools.combinations_with_replacement(range(len(pts)), size):
        counts: dict[int, int] = {}
        for i in combo:
            counts[i] = counts.get(i, 0) + 1
        if all(counts[i] <= caps[i] for i in counts):
            yield Divisor(tuple((pts[i], c) for i, c in counts.items()))


def candidate_divisors(curve: PlaneCurve, size: int, n_points: int = 6, limit: int = 400) -> list[Divisor]:
    """Rational effective divisors of a given degree: collinear ones first, then general ones."""
    pts = find_rational_points(curve, n_points)
    out: list[Divisor] = []
    seen: set = set()

    def push(D):
        if D.degree == size and D.key() not in seen:
            seen.add(D.key())
            out.append(D)

    lines: list[Divisor] = []
    for P in pts:
        try:
            lines.append(line_section_divisor(curve, P.coords, _tangent_direction(curve, P.coords)))
        except CurveError:
            pass
    for P, Q in itertools.combinations(pts, 2):
        try:
            lines.append(line_section_divisor(curve, P.coords, Q.coords))
        except CurveError:
            pass
    for L in lines:
        for D in _sub_divisors(L, size):
            push(D)
            if len(out) >= limit:
                return out
    for combo in itertools.combinations(pts, size):
        push(Divisor(tuple((P, 1) for P in combo)))
        if len(out) >= limit:
            break
    if size >= 1 and pts:
        push(Divisor(((pts[0], size),)))
    return out


def p_very_ample_certificate(B: LineBundle, p: int, n_points: int = 6, limit: int = 400) -> VeryAmpleCertificate:
    """Certify (or refute) that every degree-(p+1) divisor imposes independent conditions on H^0(B)."""
    if not B.is_pure_twist:
        raise BundleError("p-very ampleness is only certified for pure twists O_C(k)")
    curve = B.curve
    g, d = curve.genus, curve.degree
    if p < 0:
        raise BundleError("p must be non-negative")
    if B.degree >= 2 * g + p:
        return VeryAmpleCertificate("theoretical", p, f"deg B = {B.degree} >= 2g + p = {2 * g + p}")
    is_omega = B.twist == d - 3
    if is_omega and p <= curve.gonality - 2:
        return VeryAmpleCertificate("theoretical", p, f"omega_C is p-very ample iff p <= gon - 2 = {curve.gonality - 2}")
    if 0 <= B.twist < d and p <= B.twist:
        # H^0(O_C(k)) = degree-k plane forms, and any length k+1 scheme imposes independent conditions on them
        return VeryAmpleCertificate("theoretical", p, f"plane forms of degree {B.twist} separate schemes of length <= {B.twist + 1}")
    base = h0(B)
    want = base - p - 1
    checked = 0
    for D in candidate_divisors(curve, p + 1, n_points=n_points, limit=limit):
        checked += 1
        got = h0(bundle_create(curve, B.twist, D))
        if want < 0 or got != want:
            return VeryAmpleCertificate("counterexample", p,
                                        f"h0(B(-xi)) = {got} but h0(B) - p - 1 = {want}", D, checked)
    if is_omega:
        # theory says omega is not p-very ample here; no rational witness was met
        return VeryAmpleCertificate("rational-divisor", p,
                                    "no rational counterexample found (omega_C with p > gon - 2)", None, checked)
    return VeryAmpleCertificate("rational-divisor", p, f"{checked} rational divisors impose independent conditions",
                                None, checked)
