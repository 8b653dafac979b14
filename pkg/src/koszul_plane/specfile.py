"""Line-oriented curve/bundle specification files.

    # comment
    prime 2147483647
    degree 4
    4 0 0 1            monomial x^4 with coefficient 1
    0 4 0 1
    0 0 4 1
    point 1 0 7        optional pinned point (must lie on the curve)
    bundle L twist 2
    minus scan 0 1     subtract 1 * (first rational point in scan order)
    minus 3 5 1 2      subtract 2 * (3:5:1)
    bundle B twist 0

Coefficients and coordinates are integers; they are reduced modulo the
prime only when a curve is built, so one file can be evaluated at several
primes.  Scan-indexed points are re-derived at every prime.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional

from .bundles import BundleError, Divisor, LineBundle, bundle_create
from .curve import CurveError, PlaneCurve, curve_create, find_rational_points, normalize_point
from .field import PrimeField
from .forms import form_from_terms


class SpecError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass
class MinusSpec:
    line: int
    mult: int
    coords: Optional[tuple[int, int, int]] = None
    scan_index: Optional[int] = None


@dataclass
class BundleSpec:
    name: str
    twist: int
    line: int
    minus: list[MinusSpec] = field(default_factory=list)


@dataclass
class CurveSpec:
    prime: Optional[int]
    degree: int
    terms: list[tuple[tuple[int, int, int], int]]
    points: list[tuple[int, tuple[int, int, int]]] = field(default_factory=list)
    bundles: dict[str, BundleSpec] = field(default_factory=dict)
    digest: str = ""
    name: str = ""

    def build_curve(self, prime: Optional[int] = None, force_exact: bool = False) -> PlaneCurve:
        p = prime if prime is not None else self.prime
        if p is None:
            raise SpecError(0, "no prime given (add a 'prime' line or pass --prime)")
        fld = PrimeField(p)
        form = form_from_terms(self.degree, self.terms, p)
        if form.is_zero():
            raise SpecError(0, f"equation vanishes identically modulo {p}")
        curve = curve_create(form, fld, name=self.name, force_exact=force_exact)
        for line, pt in self.points:
            if not any(c % p for c in pt):
                raise SpecError(line, "the zero vector is not a point")
            if not curve.contains(pt):
                raise SpecError(line, f"point {pt} is not on the curve modulo {p}")
            if not curve.is_smooth_point(pt):
                raise SpecError(line, f"point {pt} is a singular point")
        return curve

    def build_bundle(self, curve: PlaneCurve, name: str) -> LineBundle:
        if name not in self.bundles:
            raise SpecError(0, f"no bundle named {name!r}")
        bs = self.bundles[name]
        pairs = []
        scanned: list = []
        for m in bs.minus:
            if m.scan_index is not None:
                if len(scanned) <= m.scan_index:
                    scanned = find_rational_points(curve, m.scan_index + 1)
                if len(scanned) <= m.scan_index:
                    raise SpecError(m.line, f"only {len(scanned)} rational points found, index {m.scan_index} requested")
                pairs.append((scanned[m.scan_index], m.mult))
            else:
                try:
                    pt = normalize_point(m.coords, curve.p)
                except CurveError:
                    raise SpecError(m.line, "the zero vector is not a point") from None
                if not curve.contains(pt):
                    raise SpecError(m.line, f"point {m.coords} is not on the curve modulo {curve.p}")
                if not curve.is_smooth_point(pt):
                    raise SpecError(m.line, f"point {m.coords} is singular")
                pairs.append((pt, m.mult))
        try:
            return bundle_create(curve, bs.twist, Divisor.of(curve, pairs), name=name)
        except BundleError as e:
            raise SpecError(bs.line, str(e)) from e

    def bundle_or_default(self, curve: PlaneCurve, name: str, default_twist: int = 0) -> LineBundle:
        if name in self.bundles:
            return self.build_bundle(curve, name)
        return bundle_create(curve, default_twist)

    @property
    def pins_coordinates(self) -> bool:
        return bool(self.points) or any(m.coords is not None for b in self.bundles.values() for m in b.minus)


def _ints(tokens: list[str], line: int, what: str) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise SpecError(line, f"{what}: expected integers, got {' '.join(tokens)!r}") from None


def parse_spec(text: str, name: str = "") -> CurveSpec:
    prime: Optional[int] = None
    degree: Optional[int] = None
    terms: list = []
    points: list = []
    bundles: dict[str, BundleSpec] = {}
    current: Optional[BundleSpec] = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0].lower()
        if head == "prime":
            if len(tok) != 2:
                raise SpecError(no, "expected 'prime <p>'")
            prime = _ints(tok[1:], no, "prime")[0]
        elif head == "degree":
            if len(tok) != 2:
                raise SpecError(no, "expected 'degree <d>'")
            degree = _ints(tok[1:], no, "degree")[0]
            if degree < 1:
                raise SpecError(no, "degree must be positive")
        elif head == "point":
            if len(tok) != 4:
                raise SpecError(no, "expected 'point a b c'")
            points.append((no, tuple(_ints(tok[1:], no, "point"))))
        elif head == "bundle":
            if len(tok) != 4 or tok[2].lower() != "twist":
                raise SpecError(no, "expected 'bundle <name> twist <k>'")
            if tok[1] in bundles:
                raise SpecError(no, f"bundle {tok[1]!r} defined twice")
            current = BundleSpec(tok[1], _ints(tok[3:], no, "twist")[0], no)
            bundles[tok[1]] = current
        elif head == "minus":
            if current is None:
                raise SpecError(no, "'minus' before any 'bundle' line")
            if len(tok) == 4 and tok[1].lower() == "scan":
                idx, mult = _ints(tok[2:], no, "minus scan")
                if idx < 0:
                    raise SpecError(no, "scan index must be non-negative")
                ms = MinusSpec(no, mult, scan_index=idx)
            elif len(tok) == 5:
                a, b, c, mult = _ints(tok[1:], no, "minus")
                ms = MinusSpec(no, mult, coords=(a, b, c))
            else:
                raise SpecError(no, "expected 'minus a b c mult' or 'minus scan <i> <mult>'")
            if ms.mult < 1:
                raise SpecError(no, "multiplicity must be positive")
            current.minus.append(ms)
        else:
            if len(tok) != 4:
                raise SpecError(no, f"unrecognised line {line!r}; expected 'e1 e2 e3 coeff'")
            e1, e2, e3, c = _ints(tok, no, "monomial")
            if min(e1, e2, e3) < 0:
                raise SpecError(no, "negative exponent")
            if degree is None:
                raise SpecError(no, "monomial before the 'degree' line")
            if e1 + e2 + e3 != degree:
                raise SpecError(no, f"exponents sum to {e1 + e2 + e3}, degree is {degree}")
            terms.append(((e1, e2, e3), c))
    if degree is None:
        raise SpecError(0, "missing 'degree' line")
    if not terms:
        raise SpecError(0, "no monomials given")
    return CurveSpec(prime, degree, terms, points, bundles, hashlib.sha256(text.encode()).hexdigest(), name)


def read_spec(path: str) -> CurveSpec:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    import os

    return parse_spec(text, name=os.path.splitext(os.path.basename(path))[0])


def fermat_spec(d: int, prime: Optional[int] = None, bundles: Optional[dict[str, int]] = None) -> str:
    """Spec text for x^d + y^d + z^d, with optional pure-twist bundles."""
    lines = [f"prime {prime}"] if prime else []
    lines.append(f"degree {d}")
    lines += [f"{d} 0 0 1", f"0 {d} 0 1", f"0 0 {d} 1"]
    for name, k in (bundles or {}).items():
        lines.append(f"bundle {name} twist {k}")
    return "\n".join(lines) + "\n"
