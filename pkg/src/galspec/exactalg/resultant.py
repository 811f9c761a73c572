"""Resultants, discriminants and radicals over Z and Z[T].

The resultant uses the subresultant PRS (Collins/Brown), which keeps every
intermediate coefficient exact in the coefficient ring; only exact divisions
are performed, so Z[T] coefficients work unchanged.
"""
from __future__ import annotations

from .poly import BiPoly, UniPoly, _is_zero, exquo


def _deg(cs: list) -> int:
    return len(cs) - 1


def _trim(cs: list) -> list:
    while cs and _is_zero(cs[-1]):
        cs.pop()
    return cs


def _one_like(c):
    return UniPoly.const(1, c.var) if isinstance(c, UniPoly) else 1


def _power(c, k: int):
    result = _one_like(c)
    for _ in range(k):
        result = result * c
    return result


def _prem(a: list, b: list) -> list:
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b."""
    r = list(a)
    db = _deg(b)
    lb = b[-1]
    e = _deg(a) - db + 1
    while r and _deg(r) >= db:
        lr = r[-1]
        shift = _deg(r) - db
        r = [c * lb for c in r]
        for j, bc in enumerate(b):
            r[shift + j] = r[shift + j] - lr * bc
        r = _trim(r[:-1] if _is_zero(r[-1]) else r)
        e -= 1
    if e > 0:
        f = _power(lb, e)
        r = [c * f for c in r]
    return _trim(r)


def _as_coeff_list(f) -> list:
    if isinstance(f, UniPoly):
        return list(f.coeffs)
    if isinstance(f, BiPoly):
        return _trim(list(f.coeffs_in_first()))
    return _trim(list(f))


def resultant(f, g):
    """res_X(f, g) via the subresultant PRS.

    f, g: UniPoly over Z (result int), BiPoly in (X, T) or lists of UniPoly
    coefficients (result UniPoly in T).
    """
    a = _as_coeff_list(f)
    b = _as_coeff_list(g)
    if not a or not b:
        return 0 if not (isinstance(f, BiPoly) or isinstance(g, BiPoly)) else UniPoly((), "T")
    if _deg(a) <= 0 and _deg(b) <= 0:
        raise ValueError("resultant of two constants in X is undefined")
    s = 1
    if _deg(a) < _deg(b):
        a, b = b, a
        if _deg(a) % 2 == 1 and _deg(b) % 2 == 1:
            s = -s
    if _deg(b) == 0:
        return _power(b[0], _deg(a)) * s
    one = _one_like(a[-1])
    g_, h = one, one
    while True:
        delta = _deg(a) - _deg(b)
        if _deg(a) % 2 == 1 and _deg(b) % 2 == 1:
            s = -s
        r = _prem(a, b)
        a = b
        if not r:
            zero = a[-1] * 0
            return zero if not isinstance(zero, int) else 0
        div = g_ * _power(h, delta)
        b = [exquo(c, div) for c in r]
        g_ = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g_
        else:
            h = exquo(_power(g_, delta), _power(h, delta - 1))
        if _deg(b) == 0:
            break
    da = _deg(a)
    if da == 0:
        res = one
    elif da == 1:
        res = b[0]
    else:
        res = exquo(_power(b[0], da), _power(h, da - 1))
    return res * s


def discriminant(f):
    """(-1)^(n(n-1)/2) res(f, f') / lc(f).

    For a UniPoly over Z the result is an int; for a BiPoly in (X, T) it is
    the discriminant with respect to X, a UniPoly in T.
    """
    cs = _as_coeff_list(f)
    n = _deg(cs)
    if n < 2:
        raise ValueError("discriminant needs degree >= 2 in X")
    df = [c * i for i, c in enumerate(cs)][1:]
    res = resultant(cs, df)
    d = exquo(res, cs[-1])
    if (n * (n - 1) // 2) % 2:
        d = -d
    return d


def discriminant_in_X(f: BiPoly) -> UniPoly:
    d = discriminant(f)
    if isinstance(d, int):
        d = UniPoly.const(d, f.vars[1])
    return d


def sylvester_matrix(f: UniPoly, g: UniPoly) -> list[list[int]]:
    m, n = f.degree, g.degree
    size = m + n
    rows = []
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    for i in range(n):
        rows.append([0] * i + fc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (size - n - 1 - i))
    return rows


def poly_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Primitive gcd over Z[X] (positive leading coefficient)."""
    if f.is_zero():
        return g.primitive() if not g.is_zero() else g
    if g.is_zero():
        return f.primitive()
    a, b = f.primitive(), g.primitive()
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero() and b.degree > 0:
        r = UniPoly(tuple(_prem(list(a.coeffs), list(b.coeffs))), f.var)
        a = b
        b = r.primitive() if not r.is_zero() else r
    if b.is_zero():
        return a.primitive()
    return UniPoly.const(1, f.var)


def squarefree_part(f: UniPoly) -> UniPoly:
    """Radical of f over Z: primitive, positive leading coefficient."""
    if f.is_zero():
        raise ValueError("zero polynomial has no squarefree part")
    prim = f.primitive()
    if prim.degree <= 0:
        return UniPoly.const(1, f.var)
    g = poly_gcd(prim, prim.derivative())
    if g.degree == 0:
        return prim
    return prim.exquo(g).primitive()
