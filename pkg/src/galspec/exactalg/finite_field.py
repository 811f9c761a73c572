"""Polynomial arithmetic and factorization over prime fields.

Polynomials are coefficient lists (index = exponent) of ints in [0, p).
Factorization: squarefree decomposition, distinct-degree, then seeded
Cantor-Zassenhaus equal-degree splitting (trace map when p = 2).
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass

from .poly import UniPoly


def trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def reduce_mod(f, p: int) -> list[int]:
    if isinstance(f, UniPoly):
        return f.reduce_mod(p)
    return trim([c % p for c in f])


def add(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)])


def sub(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)])


def mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim([c % p for c in out])


def scale(f, c, p):
    return trim([(a * c) % p for a in f])


def monic(f, p):
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [(c * inv) % p for c in f]


def divmod_poly(f, g, p):
    if not g:
        raise ZeroDivisionError("polynomial division by zero mod p")
    r = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - dg, 0)
    while len(r) - 1 >= dg and r:
        c = (r[-1] * inv) % p
        shift = len(r) - 1 - dg
        q[shift] = c
        for j, b in enumerate(g):
            r[shift + j] = (r[shift + j] - c * b) % p
        trim(r)
    return trim(q), r


def rem(f, g, p):
    return divmod_poly(f, g, p)[1]


def gcd(f, g, p):
    a, b = trim(list(f)), trim(list(g))
    while b:
        a, b = b, rem(a, b, p)
    return monic(a, p)


def powmod(base, e: int, m, p):
    result = [1]
    base = rem(base, m, p)
    while e:
        if e & 1:
            result = rem(mul(result, base, p), m, p)
        base = rem(mul(base, base, p), m, p)
        e >>= 1
    return result


def derivative(f, p):
    return trim([(i * c) % p for i, c in enumerate(f)][1:])


def evaluate(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def _pth_root(f, p):
    # f(X) = g(X^p) in characteristic p; coefficients are fixed by Frobenius.
    return trim([f[i] for i in range(0, len(f), p)])


def squarefree_decomposition(f, p) -> list[tuple[list[int], int]]:
    """Monic f -> [(squarefree factor, multiplicity)], factors pairwise coprime."""
    f = monic(trim(list(f)), p)
    out: list[tuple[list[int], int]] = []
    if len(f) <= 1:
        return out
    c = gcd(f, derivative(f, p), p)
    w = divmod_poly(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = gcd(w, c, p)
        fac = divmod_poly(w, y, p)[0]
        if len(fac) > 1:
            out.append((monic(fac, p), i))
        w = y
        c = divmod_poly(c, y, p)[0]
        i += 1
    if len(c) > 1:
        root = _pth_root(c, p)
        for fac, m in squarefree_decomposition(root, p):
            out.append((fac, m * p))
    return out


def distinct_degree(f, p) -> list[tuple[list[int], int]]:
    """Squarefree monic f -> [(product of all irreducible factors of degree d, d)]."""
    out = []
    x = [0, 1]
    h = x
    rest = list(f)
    d = 1
    while len(rest) - 1 >= 2 * d:
        h = powmod(h, p, rest, p)
        g = gcd(rest, sub(h, x, p), p)
        if len(g) > 1:
            out.append((g, d))
            rest = divmod_poly(rest, g, p)[0]
            h = rem(h, rest, p)
        d += 1
    if len(rest) > 1:
        out.append((monic(rest, p), len(rest) - 1))
    return out


def equal_degree(f, d: int, p: int, rng: random.Random) -> list[list[int]]:
    """Split squarefree monic f, all of whose irreducible factors have degree d."""
    n = len(f) - 1
    if n == d:
        return [f]
    if n == 0:
        return []
    while True:
        a = trim([rng.randrange(p) for _ in range(n)])
        if len(a) <= 1:
            continue
        if p == 2:
            t = list(a)
            s = list(a)
            for _ in range(d - 1):
                s = rem(mul(s, s, p), f, p)
                t = add(t, s, p)
            b = t
        else:
            b = sub(powmod(a, (p**d - 1) // 2, f, p), [1], p)
        g = gcd(f, b, p)
        if 1 < len(g) < len(f):
            other = divmod_poly(f, g, p)[0]
            return equal_degree(g, d, p, rng) + equal_degree(monic(other, p), d, p, rng)


def _sort_key(f):
    return (len(f), tuple(reversed(f)))


@dataclass(frozen=True)
class ModPolyFactorization:
    p: int
    factors: tuple  # ((coefficient tuple, multiplicity), ...), monic, sorted
    unit: int

    def degrees(self) -> list[int]:
        """Multiset of factor degrees with multiplicity, sorted descending."""
        out = []
        for f, m in self.factors:
            out.extend([len(f) - 1] * m)
        return sorted(out, reverse=True)

    def is_squarefree(self) -> bool:
        return all(m == 1 for _, m in self.factors)

    def expand(self) -> list[int]:
        acc = [self.unit % self.p]
        for f, m in self.factors:
            for _ in range(m):
                acc = mul(acc, list(f), self.p)
        return acc

    def distinct_degree_sum(self) -> int:
        return sum(len(f) - 1 for f, _ in self.factors)


def factor_mod_p(f, p: int, seed: int = 0) -> ModPolyFactorization:
    """Complete factorization of f mod p into monic irreducibles."""
    fp = reduce_mod(f, p)
    if not fp:
        raise ValueError("vanishing reduction")
    unit = fp[-1]
    rng = random.Random(seed * 1_000_003 + p)
    factors: Counter = Counter()
    for sqf, mult in squarefree_decomposition(fp, p):
        for block, d in distinct_degree(sqf, p):
            for irr in equal_degree(block, d, p, rng):
                factors[tuple(irr)] += mult
    ordered = tuple(sorted(factors.items(), key=lambda kv: _sort_key(kv[0])))
    return ModPolyFactorization(p, ordered, unit)


def roots_mod_p(f, p: int, seed: int = 0) -> list[int]:
    """Sorted distinct roots of f in F_p."""
    fp = reduce_mod(f, p)
    if not fp:
        raise ValueError("vanishing reduction")
    if len(fp) == 1:
        return []
    if p < 64:
        return [x for x in range(p) if evaluate(fp, x, p) == 0]
    fp = monic(fp, p)
    g = gcd(fp, sub(powmod([0, 1], p, fp, p), [0, 1], p), p)
    if len(g) <= 1:
        return []
    rng = random.Random(seed * 1_000_003 + p)
    lin = equal_degree(g, 1, p, rng)
    return sorted((-c[0]) % p for c in lin)


def is_squarefree_mod_p(f, p: int) -> bool:
    fp = reduce_mod(f, p)
    if len(fp) <= 1:
        return bool(fp)
    return len(gcd(fp, derivative(fp, p), p)) == 1
