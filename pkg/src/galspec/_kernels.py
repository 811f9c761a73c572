"""Compiled inner loops (numba)."""
import math
import warnings

warnings.filterwarnings("ignore", message="The TBB threading layer")

import numba  # noqa: E402
import numpy as np  # noqa: E402


@numba.njit(cache=True)
def _is_squarefree(m, primes):
    # primes must reach the cube root of m
    for p in primes:
        if p * p * p > m:
            break
        if m % p == 0:
            m //= p
            if m % p == 0:
                return False
    if m < 4:
        return True
    # m is 1, q, q^2 or q*r for primes q, r beyond the trial range
    r = np.int64(math.sqrt(m))
    while r * r > m:
        r -= 1
    while (r + 1) * (r + 1) <= m:
        r += 1
    if r * r == m:
        return False
    # a leftover square of a trial prime is impossible: all were stripped
    return True


@numba.njit(parallel=True, cache=True)
def squarefree_box_counts(cs, bound, primes, coprime):
    n = cs.shape[0] - 1
    hits = np.zeros(bound, dtype=np.int64)
    tot = np.zeros(bound, dtype=np.int64)
    for ia in numba.prange(bound):
        a = ia + 1
        for b in range(1, bound + 1):
            if coprime:
                x, y = a, b
                while y:
                    x, y = y, x % y
                if x != 1:
                    continue
            tot[ia] += 1
            v = 0
            for i in range(n + 1):
                v += cs[i] * a ** (n - i) * b**i
            if v == 0:
                continue
            if v < 0:
                v = -v
            if _is_squarefree(v, primes):
                hits[ia] += 1
    return hits.sum(), tot.sum()
