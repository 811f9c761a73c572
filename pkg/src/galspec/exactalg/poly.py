"""Dense univariate and sparse bivariate integer polynomials.

Coefficients are Python ints (arbitrary precision).  ``UniPoly`` may also carry
``UniPoly`` coefficients when it is used as a polynomial in X over Z[T]; only
the ring operations (+, -, *, exact division) are required of a coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Iterable, Mapping


def _is_zero(c) -> bool:
    if isinstance(c, UniPoly):
        return c.is_zero()
    return c == 0


def exquo(a, b):
    """Exact quotient a / b in Z or Z[T]; raises ArithmeticError if inexact."""
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError(f"{a} is not divisible by {b}")
        return q
    if isinstance(a, int):
        a = UniPoly.const(a, b.var)
    return a.exquo(b)


@dataclass(frozen=True)
class UniPoly:
    coeffs: tuple = ()
    var: str = "X"

    def __post_init__(self):
        cs = list(self.coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def const(cls, c, var="X") -> "UniPoly":
        return cls((c,), var)

    @classmethod
    def monomial(cls, c, k: int, var="X") -> "UniPoly":
        return cls((0,) * k + (c,), var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            return 0
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly((other,), self.var)

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UniPoly(tuple(x + y for x, y in zip(a, b)), self.var)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(tuple(-c for c in self.coeffs), self.var)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            if _is_zero(other):
                return UniPoly((), self.var)
            return UniPoly(tuple(c * other for c in self.coeffs), self.var)
        if self.is_zero() or other.is_zero():
            return UniPoly((), self.var)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(tuple(out), self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = UniPoly.const(1, self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly(tuple(i * c for i, c in enumerate(self.coeffs))[1:], self.var)

    def exquo(self, other) -> "UniPoly":
        """Exact division; the divisor may be a scalar or a polynomial."""
        if not isinstance(other, UniPoly):
            return UniPoly(tuple(exquo(c, other) for c in self.coeffs), self.var)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            if self.is_zero():
                return UniPoly((), self.var)
            raise ArithmeticError("inexact polynomial division")
        q = [0] * (dq + 1)
        lc = other.lc
        for k in range(dq, -1, -1):
            c = exquo(rem[k + len(other.coeffs) - 1], lc)
            q[k] = c
            if _is_zero(c):
                continue
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * b
        if any(not _is_zero(r) for r in rem):
            raise ArithmeticError("inexact polynomial division")
        return UniPoly(tuple(q), self.var)

    def content(self) -> int:
        return reduce(gcd, self.coeffs, 0)

    def primitive(self) -> "UniPoly":
        c = self.content()
        if c == 0:
            raise ValueError("zero has no content")
        if self.lc < 0:
            c = -c
        return UniPoly(tuple(x // c for x in self.coeffs), self.var)

    def reduce_mod(self, p: int) -> list[int]:
        """Coefficient list mod p, trailing zeros removed."""
        cs = [c % p for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return cs

    def reversed(self, n: int | None = None) -> "UniPoly":
        """X^n f(1/X) with n defaulting to the degree."""
        if n is None:
            n = self.degree
        cs = self.coeffs + (0,) * (n + 1 - len(self.coeffs))
        return UniPoly(tuple(reversed(cs)), self.var)

    def compose_linear(self, a: int, b: int) -> "UniPoly":
        """f(a + b*X)."""
        lin = UniPoly((a, b), self.var)
        acc = UniPoly((), self.var)
        for c in reversed(self.coeffs):
            acc = acc * lin + c
        return acc

    def __str__(self):
        return format_poly(self.coeffs, self.var)

    def __repr__(self):
        return f"UniPoly({self})"


def format_poly(coeffs, var="X") -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if _is_zero(c):
            continue
        if isinstance(c, UniPoly):
            cs = f"({c})"
            sign = "+"
        else:
            sign = "-" if c < 0 else "+"
            c = abs(c)
            cs = "" if c == 1 and k else str(c)
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        body = cs + ("*" if cs and mono else "") + mono
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


@dataclass(frozen=True)
class BiPoly:
    """Sparse polynomial in two variables; key (i, j) is the exponent of (v1, v2)."""

    terms: Mapping[tuple[int, int], int] = field(default_factory=dict)
    vars: tuple[str, str] = ("X", "T")

    def __post_init__(self):
        clean = {(int(i), int(j)): int(c) for (i, j), c in dict(self.terms).items() if c}
        object.__setattr__(self, "terms", clean)

    def __hash__(self):
        return hash((tuple(sorted(self.terms.items())), self.vars))

    def __eq__(self, other):
        return isinstance(other, BiPoly) and self.terms == other.terms and self.vars == other.vars

    @classmethod
    def from_triples(cls, triples: Iterable[tuple[int, int, int]], vars=("X", "T")) -> "BiPoly":
        terms: dict = {}
        for i, j, c in triples:
            terms[(i, j)] = terms.get((i, j), 0) + c
        return cls(terms, vars)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self, which: int = 0) -> int:
        if not self.terms:
            return -1
        return max(k[which] for k in self.terms)

    def __call__(self, x, y):
        return sum(c * x**i * y**j for (i, j), c in self.terms.items())

    def eval_mod(self, x: int, y: int, m: int) -> int:
        return sum(c * pow(x, i, m) * pow(y, j, m) for (i, j), c in self.terms.items()) % m

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return BiPoly(out, self.vars)

    def __neg__(self):
        return BiPoly({k: -c for k, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return BiPoly({k: c * other for k, c in self.terms.items()}, self.vars)
        out: dict = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return BiPoly(out, self.vars)

    __rmul__ = __mul__

    def content(self) -> int:
        return reduce(gcd, self.terms.values(), 0)

    def primitive(self) -> "BiPoly":
        c = self.content()
        if c == 0:
            raise ValueError("zero has no content")
        return BiPoly({k: v // c for k, v in self.terms.items()}, self.vars)

    def coeffs_in_first(self) -> list[UniPoly]:
        """Coefficients as a polynomial in the first variable over Z[second]."""
        n = self.degree(0)
        rows: list[list[int]] = [[] for _ in range(n + 1)]
        for (i, j), c in self.terms.items():
            row = rows[i]
            if len(row) <= j:
                row.extend([0] * (j + 1 - len(row)))
            row[j] += c
        return [UniPoly(tuple(r), self.vars[1]) for r in rows]

    def specialize_second(self, a: int, b: int) -> UniPoly:
        """b^m f(v1; a/b) as a polynomial in v1, m the degree in the second variable."""
        m = self.degree(1)
        cs = [0] * (self.degree(0) + 1)
        for (i, j), c in self.terms.items():
            cs[i] += c * a**j * b ** (m - j)
        return UniPoly(tuple(cs), self.vars[0])

    def partial(self, which: int) -> "BiPoly":
        out = {}
        for (i, j), c in self.terms.items():
            e = (i, j)[which]
            if e:
                key = (i - 1, j) if which == 0 else (i, j - 1)
                out[key] = c * e
        return BiPoly(out, self.vars)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                m for m in (
                    self.vars[0] if i == 1 else f"{self.vars[0]}^{i}" if i else "",
                    self.vars[1] if j == 1 else f"{self.vars[1]}^{j}" if j else "",
                ) if m
            )
            parts.append((c, mono))
        out = ""
        for idx, (c, mono) in enumerate(parts):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = mono if a == 1 and mono else (f"{a}*{mono}" if mono else str(a))
            if idx == 0:
                out = ("-" if sign == "-" else "") + body
            else:
                out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"BiPoly({self})"


def content_primitive(f):
    """Split f into (positive content, primitive part) with content * primitive == f."""
    if f.is_zero():
        raise ValueError("zero has no content")
    c = f.content()
    if isinstance(f, UniPoly):
        return c, UniPoly(tuple(x // c for x in f.coeffs), f.var)
    return c, BiPoly({k: v // c for k, v in f.terms.items()}, f.vars)
