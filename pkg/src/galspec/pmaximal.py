"""p-maximal orders by the Round 2 method.

Orders are kept as Fraction bases over the power basis of a monic
integral model.  Every module in a step lies between pO and O, so the
ideal and multiplier computations reduce to linear algebra over F_p.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactalg import UniPoly, discriminant, valuation

MAX_DEGREE = 12


def _rref_mod_p(rows, p):
    rows = [[x % p for x in r] for r in rows]
    pivots, out = [], []
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        k = next((i for i, r in enumerate(rows) if r[c]), None)
        if k is None:
            continue
        r = rows.pop(k)
        inv = pow(r[c], -1, p)
        r = [(x * inv) % p for x in r]
        rows = [[(x - s[c] * y) % p for x, y in zip(s, r)] for s in rows]
        out = [[(x - s[c] * y) % p for x, y in zip(s, r)] for s in out]
        out.append(r)
        pivots.append(c)
    return out, pivots


def _kernel_mod_p(images, p):
    """Row vectors v with sum v_i images[i] = 0 mod p."""
    n = len(images)
    m = len(images[0])
    # transpose to columns and reduce [A^T]
    mat = [[images[i][j] for i in range(n)] for j in range(m)]
    red, piv = _rref_mod_p(mat, p)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for r, c in zip(red, piv):
            v[c] = (-r[f]) % p
        basis.append(v)
    return basis


def _lattice_over_p(vecs, n, p):
    """Basis of lift(span vecs) + p Z^n."""
    red, piv = _rref_mod_p(vecs, p) if vecs else ([], [])
    rows = [list(r) for r in red]
    for i in range(n):
        if i not in piv:
            rows.append([p if j == i else 0 for j in range(n)])
    return rows


def _inverse(M):
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        k = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[k] = A[k], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [row[n:] for row in A]


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def _scaled(M):
    """(integer matrix, d) with M = integer matrix / d."""
    d = 1
    for row in M:
        for x in row:
            d = math.lcm(d, Fraction(x).denominator)
    return [[int(Fraction(x) * d) for x in row] for row in M], d


class _Order:
    def __init__(self, h: list[int], W):
        self.h = h  # monic, low degree first
        self.n = len(h) - 1
        self.W, self.dW = _scaled(W)
        self.Winv, self.dWinv = _scaled(_inverse(W))
        self._table()

    def _polymul(self, a, b):
        n = self.n
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c:
                for j in range(n + 1):
                    prod[k - n + j] -= c * self.h[j]
        return prod[:n]

    def _coords(self, v, den):
        """Omega coordinates of the power-basis vector v / den."""
        den *= self.dWinv
        out = []
        for l in range(self.n):
            s = sum(v[k] * self.Winv[k][l] for k in range(self.n))
            if s % den:
                raise ArithmeticError("basis does not span an order")
            out.append(s // den)
        return out

    def _table(self):
        n = self.n
        self.c = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                pw = self._polymul(self.W[i], self.W[j])
                self.c[i][j] = self.c[j][i] = self._coords(pw, self.dW * self.dW)

    def mul(self, x, y, p=None):
        n = self.n
        out = [0] * n
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                s = xi * yj
                for k, ck in enumerate(self.c[i][j]):
                    out[k] += s * ck
        return [v % p for v in out] if p else out

    def power_mod(self, x, e, p):
        result = self._coords([self.dW] + [0] * (self.n - 1), self.dW)
        base = [v % p for v in x]
        while e:
            if e & 1:
                result = self.mul(result, base, p)
            base = self.mul(base, base, p)
            e >>= 1
        return result

    def radical_mod_p(self, p):
        """Basis (omega coordinates) of the p-radical, a lattice containing pO."""
        n = self.n
        q = p
        while q < n:
            q *= p
        images = [self.power_mod([int(i == j) for j in range(n)], q, p) for i in range(n)]
        ker = _kernel_mod_p(images, p)
        return _lattice_over_p(ker, n, p), len(ker)


def _monic_model(g: UniPoly) -> list[int]:
    n, lc = g.degree, g.lc
    return [c * lc ** (n - 1 - i) for i, c in enumerate(g.coeffs[:-1])] + [1]


@dataclass(frozen=True)
class PMaximal:
    p: int
    index_valuation: int  # v_p [O_K : Z[theta]] for the monic model
    disc_valuation: int  # v_p of the field discriminant
    ramified: bool


@lru_cache(maxsize=4096)
def p_maximal(g: UniPoly, p: int, max_rounds: int = 64) -> PMaximal:
    """Enlarge Z[theta] until it is p-maximal; report index and discriminant at p."""
    if g.degree < 1 or g.degree > MAX_DEGREE:
        raise ValueError("degree outside the supported range")
    h = _monic_model(g)
    n = len(h) - 1
    W = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    index_v = 0
    for _ in range(max_rounds):
        O = _Order(h, W)
        Ip, rad_dim = O.radical_mod_p(p)
        Ip_inv, dI = _scaled(_inverse(Ip))
        # alpha -> (alpha * beta_k in I_p-coordinates mod p)_k
        images = []
        for i in range(n):
            e = [int(i == j) for j in range(n)]
            row = []
            for beta in Ip:
                prod = O.mul(e, beta)
                for l in range(n):
                    t = sum(prod[k] * Ip_inv[k][l] for k in range(n))
                    if t % dI:
                        raise ArithmeticError("radical is not an ideal")
                    row.append((t // dI) % p)
            images.append(row)
        ker = _kernel_mod_p(images, p)
        if not ker:
            # U = pO, so O is p-maximal
            dv = valuation(discriminant(UniPoly(tuple(h))), p) - 2 * index_v
            return PMaximal(p, index_v, dv, rad_dim > 0)
        U = _lattice_over_p(ker, n, p)
        # [O' : O] = p^(dim U/pO) for O' = U/p
        index_v += len(ker)
        # new basis (1/p) U expressed in the power basis
        W = [[Fraction(x) / p for x in row] for row in _matmul(U, W)]
    raise RuntimeError("Round 2 did not terminate")
