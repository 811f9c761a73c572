"""Points on F(X, Y) = k over F_p, Hensel lifting, and point counts."""
from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .binforms import BinaryForm, is_squarefree_form
from .exactalg import BiPoly, UniPoly, roots_mod_p
from .exactalg.finite_field import evaluate as eval_mod_poly

POINT_BUDGET = 10**8


@dataclass(frozen=True)
class ResiduePoint:
    p: int
    m: int
    x: int
    y: int
    k: int

    @property
    def modulus(self) -> int:
        return self.p**self.m


@dataclass(frozen=True)
class NotFound:
    p: int
    k: int
    reason: str = "no point on F = k over F_p"

    def __bool__(self):
        return False


@dataclass(frozen=True)
class PointCount:
    p: int
    k: int
    count: int
    window: tuple | None = None

    @property
    def window_known(self) -> bool:
        return self.window is not None

    def in_window(self) -> bool:
        return self.window is None or self.window[0] <= self.count <= self.window[1]


def _bipoly(F) -> BiPoly:
    return F.as_bipoly() if isinstance(F, BinaryForm) else F


def _y_poly(F: BiPoly, x: int, k: int, p: int) -> list[int]:
    cs: dict[int, int] = {}
    for (i, j), c in F.terms.items():
        cs[j] = (cs.get(j, 0) + c * pow(x, i, p)) % p
    out = [cs.get(j, 0) for j in range(max(cs, default=0) + 1)]
    out[0] = (out[0] - k) % p if out else (-k) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def solve_residue(F, k: int, p: int, seed: int = 0, nonsingular: bool | None = None):
    """Least (x, y) with F(x, y) = k mod p, x running 1..p-1 then 0.

    With k = 0 (or nonsingular=True) the point must also be nonsingular,
    i.e. some partial derivative is a unit, so that it can be lifted.
    """
    G = _bipoly(F)
    k %= p
    if nonsingular is None:
        nonsingular = k == 0
    dx, dy = G.partial(0), G.partial(1)
    for x in list(range(1, p)) + [0]:
        fy = _y_poly(G, x, k, p)
        if not fy:
            ys = range(p)  # F(x, Y) = k identically
        elif len(fy) == 1:
            continue
        else:
            ys = roots_mod_p(UniPoly(tuple(fy), "Y"), p, seed)
        for y in ys:
            if nonsingular:
                if k == 0 and x % p == 0 and y % p == 0:
                    continue
                if dx.eval_mod(x, y, p) == 0 and dy.eval_mod(x, y, p) == 0:
                    continue
            return ResiduePoint(p, 1, x, y, k)
    return NotFound(p, k)


def hensel_lift(F, point: ResiduePoint, k: int, m: int) -> ResiduePoint:
    """Lift a point of F = k mod p to F = k mod p^m.

    One coordinate stays fixed and Newton steps move the other: x when
    dF/dX is a unit at the point, y otherwise.
    """
    G = _bipoly(F)
    p = point.p
    if (G.eval_mod(point.x, point.y, p) - k) % p:
        raise ValueError("base point does not lie on F = k mod p")
    if m <= point.m:
        q = p**m
        return ResiduePoint(p, m, point.x % q, point.y % q, k % q)
    dx, dy = G.partial(0), G.partial(1)
    if dx.eval_mod(point.x, point.y, p):
        which, d = 0, dx
    elif dy.eval_mod(point.x, point.y, p):
        which, d = 1, dy
    else:
        raise ValueError("singular point, choose another base point")
    x, y = point.x, point.y
    q = p**m
    # Newton converges quadratically; each step at least doubles the precision
    for _ in range(2 * m.bit_length() + 2):
        r = (G.eval_mod(x, y, q) - k) % q
        if r == 0:
            break
        step = r * pow(d.eval_mod(x, y, q), -1, q)
        if which == 0:
            x = (x - step) % q
        else:
            y = (y - step) % q
    q = p**m
    return ResiduePoint(p, m, x % q, y % q, k % q)


def projective_roots(F: BinaryForm, p: int) -> int:
    """Number of zeros of F on P^1(F_p)."""
    n = 0
    for x in range(p):
        if F.eval_mod(x, 1, p) == 0:
            n += 1
    if F.eval_mod(1, 0, p) == 0:
        n += 1
    return n


def hasse_window(F: BinaryForm, k: int, p: int):
    """Affine point window for a smooth plane cubic F(X, Y) = k Z^3, else None."""
    if F.degree != 3 or p <= 3 or k % p == 0:
        return None
    if not is_squarefree_form(F, p):
        return None
    at_inf = projective_roots(F, p)
    s = isqrt(4 * p)
    return (p + 1 - s - at_inf, p + 1 + s - at_inf)


def count_points(F: BinaryForm, k: int, p: int) -> PointCount:
    """Exhaustive affine count of F(x, y) = k over F_p."""
    if p * p > POINT_BUDGET:
        raise ValueError("enumeration budget exceeded")
    G = F.as_bipoly()
    k %= p
    count = 0
    for x in range(p):
        fy = _y_poly(G, x, k, p)
        if not fy:
            count += p
        else:
            count += sum(1 for y in range(p) if eval_mod_poly(fy, y, p) == 0)
    return PointCount(p, k, count, hasse_window(F, k, p))
