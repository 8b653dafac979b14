"""Smooth plane curves over GF(p): validation, rational points, local branches."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

from . import upoly
from .field import PrimeField
from .forms import HomogeneousForm

Point = tuple[int, int, int]

# Exact elimination is used up to this degree; above it the check is sampled.
RESULTANT_MAX_DEGREE = 6


class CurveError(ValueError):
    pass


class SingularCurveError(CurveError):
    def __init__(self, message: str, witness: Optional[Point] = None):
        super().__init__(message)
        self.witness = witness


def normalize_point(pt: Sequence[int], p: int) -> Point:
    """Scale so that the last non-zero coordinate is 1."""
    v = [c % p for c in pt]
    for i in (2, 1, 0):
        if v[i]:
            inv = pow(v[i], -1, p)
            return tuple(c * inv % p for c in v)  # type: ignore[return-value]
    raise CurveError("(0:0:0) is not a projective point")


def _chart(pt: Point) -> int:
    return max(i for i in range(3) if pt[i])


@dataclass(frozen=True)
class SmoothnessCertificate:
    kind: str  # "resultant" | "sampled"
    smooth: bool
    witness: Optional[Point] = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "smooth": self.smooth,
                "witness": list(self.witness) if self.witness else None, "detail": self.detail}


@dataclass(frozen=True)
class CurvePoint:
    coords: Point
    chart: int
    tangent_vertical: bool

    def __iter__(self):
        return iter(self.coords)


@dataclass(frozen=True, eq=False)
class PlaneCurve:
    form: HomogeneousForm
    field: PrimeField
    certificate: SmoothnessCertificate
    # model = form(T X) / form(T e_z); monic in z so that reduction modulo it is canonical
    transform: tuple[tuple[int, int, int], ...] = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    model_form: Optional[HomogeneousForm] = None
    name: str = ""

    @property
    def degree(self) -> int:
        return self.form.degree

    @property
    def p(self) -> int:
        return self.field.modulus

    @property
    def genus(self) -> int:
        d = self.degree
        return (d - 1) * (d - 2) // 2

    @property
    def gonality(self) -> int:
        return self.degree - 1

    @property
    def clifford_index(self) -> int:
        # Cliff = d - 4 for plane curves of degree >= 5; by convention 0 for g <= 3
        return max(self.degree - 4, 0)

    @property
    def is_model_identity(self) -> bool:
        return self.transform == ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def to_model(self, pt: Sequence[int]) -> Point:
        """Coordinates of an original point in the monic model (inverse shear)."""
        a, b = self.transform[0][2], self.transform[1][2]
        x, y, z = pt
        return normalize_point((x - a * z, y - b * z, z), self.p)

    def from_model(self, pt: Sequence[int]) -> Point:
        a, b = self.transform[0][2], self.transform[1][2]
        x, y, z = pt
        return normalize_point((x + a * z, y + b * z, z), self.p)

    def contains(self, pt: Sequence[int]) -> bool:
        return self.form.evaluate(pt) == 0

    def is_smooth_point(self, pt: Sequence[int]) -> bool:
        return any(g.evaluate(pt) for g in self.form.gradient())

    def point(self, coords: Sequence[int]) -> CurvePoint:
        return make_point(self.form, coords)

    @cached_property
    def model(self) -> "PlaneCurve":
        """The curve in model coordinates (itself when no change was needed)."""
        if self.is_model_identity and self.model_form == self.form:
            return self
        return PlaneCurve(self.model_form, self.field, self.certificate, name=self.name + "[model]",
                          model_form=self.model_form)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "degree": self.degree,
            "prime": self.p,
            "genus": self.genus,
            "gonality": self.gonality,
            "clifford_index": self.clifford_index,
            "form": str(self.form),
            "smoothness": self.certificate.to_json(),
        }


def make_point(form: HomogeneousForm, coords: Sequence[int]) -> CurvePoint:
    p = form.p
    pt = normalize_point(coords, p)
    if form.evaluate(pt):
        raise CurveError(f"point {pt} is not on the curve")
    grad = [g.evaluate(pt) for g in form.gradient()]
    if not any(grad):
        raise CurveError(f"point {pt} is a singular point")
    c = _chart(pt)
    i0, i1 = [i for i in range(3) if i != c]
    return CurvePoint(pt, c, grad[i1] == 0)


# --------------------------------------------------------------------------
# smoothness


def _model_transform(form: HomogeneousForm) -> tuple[tuple[tuple[int, int, int], ...], HomogeneousForm]:
    """Shear (x, y, z) -> (x + a z, y + b z, z) making the z^d coefficient non-zero, then scale it to 1."""
    p, d = form.p, form.degree
    for s in range(0, 64):
        for a in range(s + 1):
            b = s - a
            lead = form.evaluate((a, b, 1))
            if lead:
                t = ((1, 0, a), (0, 1, b), (0, 0, 1))
                model = form.substitute_linear(t) if (a or b) else form
                model = model.scale(pow(lead, -1, p))
                assert model.coefficient((0, 0, d)) == 1
                return t, model
    raise CurveError("could not make the form monic in z")


def _z_poly(form: HomogeneousForm, xv: int, yv: int) -> list[int]:
    """Univariate polynomial z -> form(xv, yv, z)."""
    return form.restrict_line((xv, yv, 0), (0, 0, 1))


def _binary_resultant(g1: HomogeneousForm, g2: HomogeneousForm) -> tuple[list[int], bool]:
    """Res_z(g1, g2) dehomogenised at y = 1, plus whether (1:0) is a root.

    g1 must have a constant non-zero z^{deg} coefficient, so the resultant
    is a binary form of degree deg(g1) * deg(g2) and specialisation commutes.
    """
    p = g1.p
    n1, n2 = g1.degree, g2.degree
    N = n1 * n2
    xs = list(range(N + 1))
    ys = [upoly.resultant_formal(_z_poly(g1, x, 1), _z_poly(g2, x, 1), n2, p) for x in xs]
    r = upoly.interpolate(xs, ys, p)
    # the coefficient of x^N is the value of the binary form at (1:0)
    at_infinity = upoly.resultant_formal(_z_poly(g1, 1, 0), _z_poly(g2, 1, 0), n2, p)
    return r, at_infinity == 0


def _common_z_roots(forms: Sequence[HomogeneousForm], xv: int, yv: int) -> list[int]:
    p = forms[0].p
    g: list[int] = []
    for f in forms:
        g = upoly.gcd(g, _z_poly(f, xv, yv), p)
    if not g:
        return []  # all vanish identically on this fibre; handled by the scan fallback
    return upoly.roots(g, p)


def _scan_for_singular(form: HomogeneousForm, lines: int = 40) -> Optional[Point]:
    p = form.p
    grad = form.gradient()

    def singular(pt):
        return form.evaluate(pt) == 0 and not any(g.evaluate(pt) for g in grad)

    candidates: list[Point] = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    line_specs = [((0, 1, 0), (1, 0, 0))] + [((a, 0, 1), (0, 1, 0)) for a in range(lines)]
    for base, direction in line_specs:
        f = form.restrict_line(base, direction)
        if not f:
            ts = range(4)
        else:
            ts = upoly.roots(f, p)
        for t in ts:
            candidates.append(tuple((base[i] + t * direction[i]) % p for i in range(3)))
    for pt in candidates:
        if any(pt) and singular(pt):
            return normalize_point(pt, p)
    return None


def smoothness_check(curve_or_form, force_exact: bool = False) -> SmoothnessCertificate:
    """Certify that the curve has no singular point over the algebraic closure.

    For degree <= 6 (or ``force_exact``) this eliminates z from the partial
    derivatives with resultants; a constant gcd of the eliminants proves
    smoothness.  Above that only rational points met by a line scan are
    tested and the certificate is flagged "sampled".
    """
    form = curve_or_form.form if isinstance(curve_or_form, PlaneCurve) else curve_or_form
    p, d = form.p, form.degree
    if p <= 4 * d:
        raise CurveError(f"characteristic {p} must exceed 4*degree = {4 * d}")
    if d > RESULTANT_MAX_DEGREE and not force_exact:
        w = _scan_for_singular(form, lines=200)
        if w is not None:
            return SmoothnessCertificate("sampled", False, w, "singular rational point found by line scan")
        return SmoothnessCertificate("sampled", True, None, "no singular point among scanned rational points")

    t, model = _model_transform(form)
    gz, gx, gy = model.partial(2), model.partial(0), model.partial(1)
    # gz has z^{d-1} coefficient d != 0, so (0:0:1) is never a common zero.
    eliminants = []
    r, inf_root = _binary_resultant(gz, gx)
    eliminants.append((r, inf_root))
    r, inf_root = _binary_resultant(gz, gy)
    eliminants.append((r, inf_root))
    g: list[int] = []
    inf_common = True
    for r, inf in eliminants:
        g = upoly.gcd(g, r, p)
        inf_common = inf_common and inf
    lam = 1
    while (upoly.deg(g) > 0 or not g or inf_common) and lam <= 4:
        combo = gx + gy.scale(lam)
        r, inf = _binary_resultant(gz, combo)
        g = upoly.gcd(g, r, p)
        inf_common = inf_common and inf
        lam += 1
    if g and upoly.deg(g) == 0 and not inf_common:
        return SmoothnessCertificate("resultant", True, None,
                                     "gcd of z-eliminants of the gradient is a non-zero constant")

    # Not certified: look for an explicit singular point.
    witness = None
    fibres: list[tuple[int, int]] = []
    if g:
        fibres += [(x, 1) for x in upoly.roots(g, p)]
    if inf_common:
        fibres.append((1, 0))
    for xv, yv in fibres:
        for zv in _common_z_roots((gx, gy, gz), xv, yv):
            pt = (xv, yv, zv)
            if model.evaluate(pt) == 0:
                a, b = t[0][2], t[1][2]
                witness = normalize_point((pt[0] + a * pt[2], pt[1] + b * pt[2], pt[2]), p)
                break
        if witness:
            break
    if witness is None:
        witness = _scan_for_singular(form)
    detail = "gradient has a common zero" + ("" if witness else " (no rational witness found)")
    return SmoothnessCertificate("resultant", False, witness, detail)


def curve_create(form: HomogeneousForm, fld: PrimeField, name: str = "", force_exact: bool = False) -> PlaneCurve:
    if form.p != fld.modulus:
        raise CurveError("form and field moduli differ")
    d = form.degree
    if d < 3:
        raise CurveError(f"degree {d} < 3 is not supported")
    if fld.modulus <= 4 * d:
        raise CurveError(f"characteristic must exceed 4*degree = {4 * d}")
    cert = smoothness_check(form, force_exact=force_exact)
    if not cert.smooth:
        raise SingularCurveError(f"curve is singular: {cert.detail}", cert.witness)
    t, model = _model_transform(form)
    return PlaneCurve(form, fld, cert, transform=t, model_form=model, name=name)


def genus(curve: PlaneCurve) -> int:
    return curve.genus


# --------------------------------------------------------------------------
# rational points


def iter_rational_points(curve: PlaneCurve, max_lines: int | None = None):
    """Smooth rational points in scan order: the line z = 0, then x = 0, 1, 2, ... in the chart z = 1."""
    form, p = curve.form, curve.p
    seen: set[Point] = set()

    def emit(pt):
        pt = normalize_point(pt, p)
        if pt in seen or form.evaluate(pt) or not curve.is_smooth_point(pt):
            return None
        seen.add(pt)
        return make_point(form, pt)

    f = form.restrict_line((0, 1, 0), (1, 0, 0))  # (t : 1 : 0)
    for t in upoly.roots(f, p) if f else []:
        cp = emit((t, 1, 0))
        if cp:
            yield cp
    cp = emit((1, 0, 0)) if form.evaluate((1, 0, 0)) == 0 else None
    if cp:
        yield cp
    a = 0
    while max_lines is None or a < max_lines:
        f = form.restrict_line((a, 0, 1), (0, 1, 0))  # (a : y : 1)
        for y in upoly.roots(f, p) if f else []:
            cp = emit((a, y, 1))
            if cp:
                yield cp
        a += 1


def find_rational_points(curve: PlaneCurve, max_count: int, max_lines: int = 10_000) -> list[CurvePoint]:
    if max_count <= 0:
        return []
    out = []
    for pt in iter_rational_points(curve, max_lines=max_lines):
        out.append(pt)
        if len(out) >= max_count:
            break
    return out


# --------------------------------------------------------------------------
# local branches

Series = list  # list[int] of length = precision


def series_mul(a: Series, b: Series, n: int, p: int) -> Series:
    out = [0] * n
    for i, ai in enumerate(a[:n]):
        if ai:
            for j in range(min(len(b), n - i)):
                out[i + j] += ai * b[j]
    return [c % p for c in out]


def series_inv(a: Series, n: int, p: int) -> Series:
    inv0 = pow(a[0], -1, p)
    out = [0] * n
    out[0] = inv0
    for k in range(1, n):
        s = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            s += a[j] * out[k - j]
        out[k] = (-s * inv0) % p
    return out


def _pad(s: Series, n: int) -> Series:
    s = list(s[:n])
    return s + [0] * (n - len(s))


@dataclass(frozen=True)
class BranchExpansion:
    point: CurvePoint
    precision: int
    chart: int
    affine: tuple[int, int]
    sheared: bool
    u: tuple[int, ...]
    v: tuple[int, ...]

    def homogeneous(self) -> list[Series]:
        """Three coordinate series with the chart coordinate identically 1."""
        m = self.precision
        out: list[Series] = [[0] * m for _ in range(3)]
        out[self.chart][0] = 1
        out[self.affine[0]] = list(self.u)
        out[self.affine[1]] = list(self.v)
        return out

    def evaluate_form(self, g: HomogeneousForm) -> Series:
        """Series of g along the branch, modulo t^precision."""
        return evaluate_along(g, self.homogeneous(), self.precision)


def evaluate_along(g: HomogeneousForm, coords: list[Series], m: int) -> Series:
    p = g.p
    powers: list[list[Series]] = [[[1] + [0] * (m - 1)] for _ in range(3)]
    total = [0] * m
    for e, c in g.coeffs.items():
        term = [1] + [0] * (m - 1)
        for i in range(3):
            while len(powers[i]) <= e[i]:
                powers[i].append(series_mul(powers[i][-1], coords[i], m, p))
            if e[i]:
                term = series_mul(term, powers[i][e[i]], m, p)
        for k in range(m):
            total[k] += c * term[k]
    return [t % p for t in total]


def branch_expansion(curve: PlaneCurve, point: CurvePoint | Sequence[int], m: int) -> BranchExpansion:
    """Power series parametrisation of the branch through a smooth point, exact mod t^m.

    In the affine chart of the point, u = u0 + t and v(t) is lifted by
    Newton iteration.  When the tangent is vertical (df/dv = 0) the affine
    coordinates are first sheared, u = u' + v', which makes df/dv' non-zero.
    """
    if m < 1:
        raise ValueError("precision must be >= 1")
    form, p = curve.form, curve.p
    cp = point if isinstance(point, CurvePoint) else make_point(form, point)
    pt, c = cp.coords, cp.chart
    i0, i1 = [i for i in range(3) if i != c]
    u0, v0 = pt[i0], pt[i1]
    sheared = cp.tangent_vertical
    if sheared:
        # X_{i0} = X'_{i0} + X'_{i1}; other coordinates unchanged
        t = [[1 if r == k else 0 for k in range(3)] for r in range(3)]
        t[i0][i1] = 1
        work = form.substitute_linear(t)
        u0p, v0p = (u0 - v0) % p, v0
    else:
        work = form
        u0p, v0p = u0, v0
    # bivariate coefficients of the dehomogenised form: (exp_u, exp_v) -> coeff
    biv: dict[tuple[int, int], int] = {}
    for e, coef in work.coeffs.items():
        key = (e[i0], e[i1])
        biv[key] = (biv.get(key, 0) + coef) % p
    dv = {(a, b - 1): coef * b % p for (a, b), coef in biv.items() if b}

    U = _pad([u0p, 1], m)

    def ev(poly, V, n):
        upow = [[1] + [0] * (n - 1)]
        vpow = [[1] + [0] * (n - 1)]
        total = [0] * n
        for (a, b), coef in poly.items():
            while len(upow) <= a:
                upow.append(series_mul(upow[-1], U, n, p))
            while len(vpow) <= b:
                vpow.append(series_mul(vpow[-1], V, n, p))
            term = series_mul(upow[a], vpow[b], n, p)
            for k in range(n):
                total[k] += coef * term[k]
        return [x % p for x in total]

    V = [v0p]
    prec = 1
    while prec < m:
        prec = min(2 * prec, m)
        V = _pad(V, prec)
        gval = ev(biv, V, prec)
        gder = ev(dv, V, prec)
        corr = series_mul(gval, series_inv(gder, prec, p), prec, p)
        V = [(a - b) % p for a, b in zip(V, corr)]
    V = _pad(V, m)
    if sheared:
        u_series = [(a + b) % p for a, b in zip(U, V)]
    else:
        u_series = U
    return BranchExpansion(cp, m, c, (i0, i1), sheared, tuple(u_series), tuple(V))
