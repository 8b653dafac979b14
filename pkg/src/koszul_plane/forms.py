"""Sparse homogeneous polynomials in x, y, z over GF(p)."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

Exp = tuple[int, int, int]

VARS = ("x", "y", "z")


@lru_cache(maxsize=None)
def monomials(k: int) -> tuple[Exp, ...]:
    """Degree-k exponent triples in decreasing lexicographic order (x > y > z)."""
    if k < 0:
        return ()
    return tuple((a, b, k - a - b) for a in range(k, -1, -1) for b in range(k - a, -1, -1))


def add_exp(e: Exp, f: Exp) -> Exp:
    return (e[0] + f[0], e[1] + f[1], e[2] + f[2])


@dataclass(frozen=True)
class HomogeneousForm:
    degree: int
    coeffs: Mapping[Exp, int]
    p: int
    _hash: int = field(default=0, compare=False, repr=False)

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("negative degree")
        clean = {}
        for e, c in self.coeffs.items():
            e = tuple(int(v) for v in e)
            if len(e) != 3 or min(e) < 0:
                raise ValueError(f"bad exponent {e}")
            if sum(e) != self.degree:
                raise ValueError(f"exponent {e} does not sum to degree {self.degree}")
            c %= self.p
            if c:
                clean[e] = (clean.get(e, 0) + c) % self.p
                if not clean[e]:
                    del clean[e]
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "_hash", hash((self.degree, self.p, frozenset(clean.items()))))

    def __hash__(self):
        return self._hash

    @classmethod
    def zero(cls, degree: int, p: int) -> "HomogeneousForm":
        return cls(degree, {}, p)

    @classmethod
    def monomial(cls, e: Exp, p: int, c: int = 1) -> "HomogeneousForm":
        return cls(sum(e), {tuple(e): c}, p)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def terms(self) -> list[tuple[Exp, int]]:
        return sorted(self.coeffs.items(), reverse=True)

    def coefficient(self, e: Exp) -> int:
        return self.coeffs.get(tuple(e), 0)

    def __add__(self, other: "HomogeneousForm") -> "HomogeneousForm":
        self._check(other)
        if self.degree != other.degree and self.coeffs and other.coeffs:
            raise ValueError("adding forms of different degrees")
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return HomogeneousForm(self.degree if self.coeffs else other.degree, out, self.p)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "HomogeneousForm":
        return HomogeneousForm(self.degree, {e: v * c for e, v in self.coeffs.items()}, self.p)

    def __mul__(self, other: "HomogeneousForm") -> "HomogeneousForm":
        self._check(other)
        out: dict[Exp, int] = {}
        p = self.p
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = add_exp(e1, e2)
                out[e] = (out.get(e, 0) + c1 * c2) % p
        return HomogeneousForm(self.degree + other.degree, out, p)

    def __pow__(self, n: int) -> "HomogeneousForm":
        out = HomogeneousForm.monomial((0, 0, 0), self.p)
        for _ in range(n):
            out = out * self
        return out

    def _check(self, other):
        if not isinstance(other, HomogeneousForm):
            raise TypeError("expected HomogeneousForm")
        if other.p != self.p:
            raise ValueError("forms over different fields")

    def evaluate(self, pt: Sequence[int]) -> int:
        p = self.p
        a, b, c = (v % p for v in pt)
        acc = 0
        for (i, j, k), v in self.coeffs.items():
            acc += v * pow(a, i, p) * pow(b, j, p) * pow(c, k, p)
        return acc % p

    def partial(self, var: int) -> "HomogeneousForm":
        if self.degree == 0:
            return HomogeneousForm.zero(0, self.p)
        out = {}
        for e, c in self.coeffs.items():
            if e[var]:
                ne = list(e)
                ne[var] -= 1
                out[tuple(ne)] = c * e[var]
        return HomogeneousForm(self.degree - 1, out, self.p)

    def gradient(self) -> tuple["HomogeneousForm", "HomogeneousForm", "HomogeneousForm"]:
        return (self.partial(0), self.partial(1), self.partial(2))

    def substitute_linear(self, t: Sequence[Sequence[int]]) -> "HomogeneousForm":
        """Return G(X) = F(T X) for a 3x3 matrix T."""
        p = self.p
        lin = [HomogeneousForm(1, {(1, 0, 0): t[i][0], (0, 1, 0): t[i][1], (0, 0, 1): t[i][2]}, p)
               for i in range(3)]
        cache: dict[tuple[int, int], HomogeneousForm] = {}

        def power(i, n):
            if (i, n) not in cache:
                cache[(i, n)] = lin[i] ** n
            return cache[(i, n)]

        out = HomogeneousForm.zero(self.degree, p)
        for (a, b, c), v in self.coeffs.items():
            out = out + (power(0, a) * power(1, b) * power(2, c)).scale(v)
        return out

    def restrict_line(self, p0: Sequence[int], p1: Sequence[int]) -> list[int]:
        """Coefficients (low first) of t -> F(p0 + t p1) as a univariate polynomial."""
        from . import upoly

        p = self.p
        lin = [[p0[i] % p, p1[i] % p] for i in range(3)]
        pw: dict[tuple[int, int], list[int]] = {}

        def power(i, n):
            if (i, n) not in pw:
                pw[(i, n)] = [1] if n == 0 else upoly.mul(power(i, n - 1), lin[i], p)
            return pw[(i, n)]

        out: list[int] = []
        for (a, b, c), v in self.coeffs.items():
            term = upoly.mul(upoly.mul(power(0, a), power(1, b), p), power(2, c), p)
            out = upoly.add(out, upoly.scale(term, v, p), p)
        return out

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in self.terms():
            mono = "*".join(f"{VARS[i]}^{k}" if k > 1 else VARS[i] for i, k in enumerate(e) if k)
            parts.append(f"{c}*{mono}" if mono and c != 1 else (mono or str(c)))
        return " + ".join(parts)


def form_from_terms(degree: int, terms: Mapping[Exp, int] | Sequence[tuple[Exp, int]], p: int) -> HomogeneousForm:
    items = terms.items() if isinstance(terms, Mapping) else terms
    acc: dict[Exp, int] = {}
    for e, c in items:
        acc[tuple(e)] = acc.get(tuple(e), 0) + c
    return HomogeneousForm(degree, acc, p)


def fermat(d: int, p: int) -> HomogeneousForm:
    return HomogeneousForm(d, {(d, 0, 0): 1, (0, d, 0): 1, (0, 0, d): 1}, p)
