"""Dense univariate polynomials over GF(p) as coefficient lists (low degree first)."""
from __future__ import annotations

import random

Poly = list  # list[int], trailing zeros trimmed; [] is the zero polynomial


def trim(f: Poly) -> Poly:
    while f and f[-1] == 0:
        f.pop()
    return f


def norm(f, p: int) -> Poly:
    return trim([c % p for c in f])


def deg(f: Poly) -> int:
    return len(f) - 1  # -1 for zero


def add(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)])


def sub(f: Poly, g: Poly, p: int) -> Poly:
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)])


def scale(f: Poly, c: int, p: int) -> Poly:
    return trim([a * c % p for a in f])


def mul(f: Poly, g: Poly, p: int) -> Poly:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim([c % p for c in out])


def divmod_(f: Poly, g: Poly, p: int) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    if len(r) - 1 < dg:
        return [], trim(r)
    q = [0] * (len(r) - dg)
    inv = pow(g[-1], -1, p)
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k] * inv % p
        if c:
            q[k - dg] = c
            for j in range(dg + 1):
                r[k - dg + j] = (r[k - dg + j] - c * g[j]) % p
    return trim(q), trim(r[:dg])


def mod(f: Poly, g: Poly, p: int) -> Poly:
    return divmod_(f, g, p)[1]


def monic(f: Poly, p: int) -> Poly:
    if not f:
        return []
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def gcd(f: Poly, g: Poly, p: int) -> Poly:
    a, b = trim(list(f)), trim(list(g))
    while b:
        a, b = b, mod(a, b, p)
    return monic(a, p)


def powmod(base: Poly, e: int, m: Poly, p: int) -> Poly:
    result: Poly = [1]
    b = mod(base, m, p)
    while e:
        if e & 1:
            result = mod(mul(result, b, p), m, p)
        e >>= 1
        if e:
            b = mod(mul(b, b, p), m, p)
    return result


def evaluate(f: Poly, x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def derivative(f: Poly, p: int) -> Poly:
    return trim([i * f[i] % p for i in range(1, len(f))])


def resultant(f: Poly, g: Poly, p: int) -> int:
    """Res(f, g) for the actual degrees of f and g (both non-zero)."""
    if not f or not g:
        return 0
    a, b = list(f), list(g)
    res = 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return res * pow(b[0], da, p) % p
        if da == 0:
            return res * pow(a[0], db, p) % p
        r = mod(a, b, p)
        if not r:
            return 0
        dr = len(r) - 1
        # Res(a, b) = (-1)^{da db} lc(b)^{da - dr} Res(b, r)
        if (da * db) % 2:
            res = -res
        res = res * pow(b[-1], da - dr, p) % p
        a, b = b, r


def resultant_formal(f: Poly, g: Poly, n: int, p: int) -> int:
    """lc(f)^n * prod g(alpha) over roots of f, i.e. Res with g of formal degree n."""
    if not f:
        return 0
    if not g:
        return 0
    k = len(g) - 1
    if k > n:
        raise ValueError("formal degree below actual degree")
    return pow(f[-1], n - k, p) * resultant(f, g, p) % p


def interpolate(xs: list[int], ys: list[int], p: int) -> Poly:
    """Lagrange interpolation through distinct points."""
    n = len(xs)
    out: Poly = []
    for i in range(n):
        num: Poly = [1]
        den = 1
        for j in range(n):
            if j != i:
                num = mul(num, [(-xs[j]) % p, 1], p)
                den = den * (xs[i] - xs[j]) % p
        out = add(out, scale(num, ys[i] * pow(den, -1, p) % p, p), p)
    return out


def _split(f: Poly, p: int, rng: random.Random) -> list[int]:
    """Roots of a monic squarefree f that splits into distinct linear factors."""
    d = len(f) - 1
    if d == 0:
        return []
    if d == 1:
        return [(-f[0]) * pow(f[1], -1, p) % p]
    if p == 2:
        return [x for x in range(2) if evaluate(f, x, p) == 0]
    while True:
        a = rng.randrange(p)
        h = powmod([a, 1], (p - 1) // 2, f, p)
        g = gcd(sub(h, [1], p), f, p)
        if 0 < len(g) - 1 < d:
            q, _ = divmod_(f, g, p)
            return _split(g, p, rng) + _split(monic(q, p), p, rng)


def roots(f: Poly, p: int, seed: int = 0) -> list[int]:
    """Distinct roots of f in GF(p), sorted.  f must be non-zero."""
    f = norm(f, p)
    if not f:
        raise ValueError("roots of the zero polynomial")
    if len(f) == 1:
        return []
    xp = powmod([0, 1], p, f, p)
    g = gcd(sub(xp, [0, 1], p), f, p)
    return sorted(_split(g, p, random.Random(seed)))


def root_multiplicity(f: Poly, r: int, p: int) -> int:
    m = 0
    f = norm(f, p)
    while f and evaluate(f, r, p) == 0:
        f, _ = divmod_(f, [(-r) % p, 1], p)
        m += 1
    return m


def roots_with_multiplicity(f: Poly, p: int, seed: int = 0) -> list[tuple[int, int]]:
    return [(r, root_multiplicity(f, r, p)) for r in roots(f, p, seed)]
