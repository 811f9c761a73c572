"""Primality, factorization and certified squarefreeness of integers."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

TRIAL_BOUND = 10**5
RHO_ITERATIONS = 200_000

# Miller-Rabin with these bases is deterministic below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981


@lru_cache(maxsize=8)
def primes_up_to(n: int) -> tuple[int, ...]:
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return tuple(i for i, v in enumerate(sieve) if v)


@lru_cache(maxsize=4)
def _primorial(bound: int) -> int:
    return math.prod(primes_up_to(bound))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES
    if n >= _MR_DETERMINISTIC_LIMIT:
        rng = random.Random(n)
        bases = _MR_BASES + tuple(rng.randrange(2, n - 1) for _ in range(24))
    for a in bases:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    n = max(n + 1, 2)
    while not is_prime(n):
        n += 1
    return n


def perfect_power(n: int) -> tuple[int, int] | None:
    """(r, k) with r^k == n for the smallest prime k >= 2, or None."""
    if n < 4:
        return None
    for k in primes_up_to(n.bit_length()):
        r = math.isqrt(n) if k == 2 else _iroot(n, k)
        if r > 1 and r**k == n:
            return r, k
    return None


def _iroot(n: int, k: int) -> int:
    lo, hi = 1, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


def pollard_rho(n: int, max_iter: int, seed: int = 1) -> int | None:
    """A nontrivial factor of composite n (Brent's variant), or None."""
    if n % 2 == 0:
        return 2
    rng = random.Random(seed ^ n)
    spent = 0
    while spent < max_iter:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g, r, q = 1, 1, 1
        x = ys = y
        while g == 1 and spent < max_iter:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            spent += r
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


def _small_factor(m: int, bound: int) -> tuple[dict[int, int], int]:
    """Strip all prime factors <= bound. Returns (factors, cofactor)."""
    factors: dict[int, int] = {}
    g = math.gcd(m, _primorial(bound))
    if g == 1:
        return factors, m
    # g is a product of distinct small primes; recover them.
    for p in primes_up_to(bound):
        if g == 1:
            break
        if p * p > g:
            p = g
        if g % p == 0:
            g //= p
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors[p] = e
    return factors, m


def factorize(n: int, trial_bound: int = TRIAL_BOUND, rho_iterations: int = RHO_ITERATIONS):
    """Prime factorization of |n| as a dict, or None if the rho budget runs out."""
    m = abs(n)
    if m == 0:
        raise ValueError("cannot factor zero")
    factors, m = _small_factor(m, trial_bound)
    stack = [m] if m > 1 else []
    while stack:
        q = stack.pop()
        if is_prime(q):
            factors[q] = factors.get(q, 0) + 1
            continue
        pp = perfect_power(q)
        if pp:
            stack.extend([pp[0]] * pp[1])
            continue
        d = pollard_rho(q, rho_iterations)
        if d is None:
            return None
        stack.extend([d, q // d])
    return dict(sorted(factors.items()))


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class SquarefreeVerdict:
    status: str  # "squarefree" | "not_squarefree" | "undetermined"
    witness: int | None = None
    factors: dict | None = field(default=None, hash=False, compare=False)
    note: str = ""

    @property
    def squarefree(self) -> bool:
        return self.status == "squarefree"


def squarefree_integer(n: int, trial_bound: int = TRIAL_BOUND,
                       rho_iterations: int = RHO_ITERATIONS) -> SquarefreeVerdict:
    """Certify squarefreeness of n.

    Trial division to ``trial_bound`` (via one gcd with the primorial), then a
    perfect-power check, then bounded Pollard rho.  ``undetermined`` is only
    returned when rho exhausts its budget on a cofactor above trial_bound^3.
    """
    if n == 0:
        return SquarefreeVerdict("not_squarefree", None, None, "zero")
    m = abs(n)
    small, m = _small_factor(m, trial_bound)
    for p, e in small.items():
        if e > 1:
            return SquarefreeVerdict("not_squarefree", p, None, "trial division")
    if m == 1:
        return SquarefreeVerdict("squarefree", None, small)
    if is_prime(m):
        return SquarefreeVerdict("squarefree", None, {**small, m: 1})
    pp = perfect_power(m)
    if pp:
        root = pp[0]
        rf = factorize(root, trial_bound, rho_iterations)
        witness = min(rf) if rf else root
        return SquarefreeVerdict("not_squarefree", witness, None, "perfect power")
    rest = factorize(m, trial_bound, rho_iterations)
    if rest is not None:
        for p, e in rest.items():
            if e > 1:
                return SquarefreeVerdict("not_squarefree", p, None, "rho")
        return SquarefreeVerdict("squarefree", None, dict(sorted({**small, **rest}.items())))
    if m < trial_bound**3:
        # m has no prime factor <= trial_bound, is neither prime nor a square:
        # it is a product of two distinct primes.
        return SquarefreeVerdict("squarefree", None, None, "cube-root argument")
    return SquarefreeVerdict("undetermined", None, None, "rho budget exhausted")


def squarefree_kernel(n: int) -> int:
    """Sign-preserving squarefree part of n (needs a full factorization)."""
    f = factorize(n)
    if f is None:
        raise ArithmeticError(f"could not factor {n}")
    core = math.prod(p for p, e in f.items() if e % 2)
    return core if n > 0 else -core
