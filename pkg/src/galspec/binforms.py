"""Homogeneous binary forms over Z.

A form of degree n is stored as c_0..c_n with F(X, Y) = sum c_i X^(n-i) Y^i.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from functools import reduce

import numpy as np

from .exactalg import BiPoly, UniPoly
from .exactalg.finite_field import is_squarefree_mod_p
from .exactalg.integers import primes_up_to
from .exactalg.resultant import poly_gcd

ENUMERATION_BUDGET = 10**8


@dataclass(frozen=True)
class BinaryForm:
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("a binary form needs at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_poly(cls, f: UniPoly, extra_y: bool = False) -> "BinaryForm":
        """Homogenize f(T) with T = X/Y; optionally multiply by Y (branch at infinity)."""
        cs = list(reversed(f.coeffs))
        if extra_y:
            cs.insert(0, 0)
        return cls(tuple(cs))

    @classmethod
    def product(cls, *forms: "BinaryForm") -> "BinaryForm":
        acc = [1]
        for F in forms:
            out = [0] * (len(acc) + len(F.coeffs) - 1)
            for i, a in enumerate(acc):
                for j, b in enumerate(F.coeffs):
                    out[i + j] += a * b
            acc = out
        return cls(tuple(acc))

    def __call__(self, x: int, y: int) -> int:
        return evaluate(self, x, y)

    def eval_mod(self, x: int, y: int, m: int) -> int:
        n = self.degree
        acc = 0
        for i, c in enumerate(self.coeffs):
            acc += c * pow(x, n - i, m) * pow(y, i, m)
        return acc % m

    def content(self) -> int:
        return reduce(gcd, self.coeffs, 0)

    def scale_y(self, lam: int) -> "BinaryForm":
        """F(X, lam*Y)."""
        return BinaryForm(tuple(c * lam**i for i, c in enumerate(self.coeffs)))

    def primitive(self) -> tuple[int, "BinaryForm"]:
        c = self.content()
        if c == 0:
            raise ValueError("zero has no content")
        return c, BinaryForm(tuple(x // c for x in self.coeffs))

    def dehomogenize(self) -> UniPoly:
        """F(T, 1) as a polynomial in T."""
        return UniPoly(tuple(reversed(self.coeffs)), "T")

    def as_bipoly(self) -> BiPoly:
        n = self.degree
        return BiPoly({(n - i, i): c for i, c in enumerate(self.coeffs)}, ("X", "Y"))

    def partials(self) -> tuple["BinaryForm", "BinaryForm"]:
        n = self.degree
        dx = BinaryForm(tuple((n - i) * c for i, c in enumerate(self.coeffs[:-1])) or (0,))
        dy = BinaryForm(tuple(i * c for i, c in enumerate(self.coeffs))[1:] or (0,))
        return dx, dy

    def is_normalized(self) -> bool:
        return self.content() == 1 and not has_repeated_factor(self)

    def __str__(self):
        return str(self.as_bipoly())

    def __repr__(self):
        return f"BinaryForm({self})"


def evaluate(F: BinaryForm, a: int, b: int) -> int:
    n = F.degree
    return sum(c * a ** (n - i) * b**i for i, c in enumerate(F.coeffs))


def is_squarefree_form(F: BinaryForm, p: int = 0) -> bool:
    """No repeated factor over Q (p = 0) or over F_p-bar (p prime)."""
    cs = [c % p for c in F.coeffs] if p else list(F.coeffs)
    if not any(cs):
        return False
    # leading zeros of c_0.. give the multiplicity of Y
    y_mult = next(i for i, c in enumerate(cs) if c)
    if y_mult >= 2:
        return False
    f = UniPoly(tuple(reversed(cs)), "T")  # F(T, 1)
    if f.degree <= 0:
        return True
    if p:
        return is_squarefree_mod_p(f, p)
    return poly_gcd(f, f.derivative()).degree == 0


def has_repeated_factor(F: BinaryForm) -> bool:
    return not is_squarefree_form(F)


@dataclass(frozen=True)
class FixedDivisorReport:
    fixed_primes: tuple
    fixed_squares: tuple
    # prime -> (x, y) nonvanishing witness, or None when F vanishes on all of F_p^2
    certificates: dict = field(hash=False, compare=False)

    def recheck(self, F: BinaryForm) -> bool:
        for p, w in self.certificates.items():
            if w is None:
                if p not in self.fixed_primes:
                    return False
            elif F.eval_mod(w[0], w[1], p) == 0:
                return False
        return True


def _projective_points(p: int):
    for x in range(p):
        yield x, 1
    yield 1, 0


def fixed_prime_divisors(F: BinaryForm) -> FixedDivisorReport:
    """Primes p with p | F(x, y) for all integers x, y.

    Only p <= deg F - 1 can occur: a nonzero form vanishing on all p + 1
    points of P^1(F_p) is divisible by X^p Y - X Y^p mod p, so has degree
    at least p + 1.  Homogeneity reduces the F_p^2 check to P^1(F_p).
    """
    if F.content() != 1:
        raise ValueError("normalize first")
    fixed, squares, certs = [], [], {}
    for p in primes_up_to(max(F.degree - 1, 1)):
        witness = next((pt for pt in _projective_points(p) if F.eval_mod(*pt, p)), None)
        certs[p] = witness
        if witness is None:
            fixed.append(p)
            q = p * p
            if all(F.eval_mod(x, y, q) == 0 for x in range(q) for y in range(q)):
                squares.append(p)
    return FixedDivisorReport(tuple(fixed), tuple(squares), certs)


@dataclass(frozen=True)
class TransformRecord:
    N: int
    form: BinaryForm
    steps: tuple  # (multiplier, content removed)


def eliminate_fixed_divisors(F: BinaryForm) -> TransformRecord:
    """Rescale Y until no fixed prime divisor is left.

    First F(X, alpha*Y)/content with alpha the coefficient of the highest
    X-power present, then F(X, pY)/content for each remaining fixed prime p.
    """
    if F.content() != 1:
        raise ValueError("normalize first")
    if has_repeated_factor(F):
        raise ValueError("form has a repeated factor")
    alpha = abs(next(c for c in F.coeffs if c))
    c, G = F.scale_y(alpha).primitive()
    steps = [(alpha, c)]
    N = alpha
    while True:
        rep = fixed_prime_divisors(G)
        if not rep.fixed_primes:
            break
        p = rep.fixed_primes[0]
        c, G = G.scale_y(p).primitive()
        steps.append((p, c))
        N *= p
    return TransformRecord(N, G, tuple(steps))


def substitute_affine(F: BinaryForm, a1: int, b1: int, M: int) -> BiPoly:
    """Expansion of F(a1 + M X, b1 + M Y) as a BiPoly in (X, Y)."""
    if M < 1:
        raise ValueError("M must be positive")
    n = F.degree
    lx = UniPoly((a1, M), "X")
    ly = UniPoly((b1, M), "Y")
    terms: dict = {}
    for i, c in enumerate(F.coeffs):
        if not c:
            continue
        px = (lx ** (n - i)).coeffs
        py = (ly**i).coeffs
        for u, cu in enumerate(px):
            for v, cv in enumerate(py):
                terms[(u, v)] = terms.get((u, v), 0) + c * cu * cv
    return BiPoly(terms, ("X", "Y"))


def local_density(F: BinaryForm, p: int, e: int) -> Fraction:
    """#{(x, y) mod p^e : p^e | F(x, y)} / p^(2e), by exhaustive count."""
    q = p**e
    if q * q > ENUMERATION_BUDGET:
        raise ValueError(f"enumeration budget exceeded for {p}^{e}")
    # every product below stays under q^2 <= 1e8, so int64 is exact
    cs = [c % q for c in F.coeffs]
    n = F.degree
    hits = 0
    ypow = [np.ones(q, dtype=np.int64)]
    ys = np.arange(q, dtype=np.int64)
    for _ in range(n):
        ypow.append((ypow[-1] * ys) % q)
    for x in range(q):
        xp = [pow(x, n - i, q) for i in range(n + 1)]
        vals = np.zeros(q, dtype=np.int64)
        for i, c in enumerate(cs):
            if c:
                vals = (vals + (c * xp[i] % q) * ypow[i]) % q
        hits += int(np.count_nonzero(vals == 0))
    return Fraction(hits, q * q)


def squarefree_value_density(F: BinaryForm, bound: int, coprime: bool = True) -> tuple[int, int]:
    """(# squarefree nonzero |F(a,b)|, # pairs) over 1 <= a, b <= bound.

    Pairs with F(a, b) = 0 count as non-squarefree.  Uses a compiled
    trial-division kernel; values must fit in 63 bits.
    """
    from ._kernels import squarefree_box_counts

    bmax = max(abs(c) for c in F.coeffs) * (F.degree + 1) * bound**F.degree
    if bmax >= 2**62:
        raise ValueError("values exceed the 64-bit kernel range")
    limit = 1
    while limit**3 <= bmax:
        limit += 1
    primes = np.array(primes_up_to(limit + 1), dtype=np.int64)
    cs = np.array(F.coeffs, dtype=np.int64)
    hits, total = squarefree_box_counts(cs, bound, primes, coprime)
    return int(hits), int(total)
