import random

import pytest
from hypothesis import given, settings, strategies as st

from galspec.binforms import BinaryForm
from galspec.exactalg import primes_up_to
from galspec.modcurves import NotFound, ResiduePoint, count_points, hensel_lift, solve_residue

XY_Xm2Y = BinaryForm((0, 1, -2, 0))
X2Y = BinaryForm((0, 1, 0, 0))


def test_solve_residue_examples():
    pt = solve_residue(X2Y, 3, 5)
    assert (pt.x, pt.y) == (1, 3)
    pt = solve_residue(XY_Xm2Y, 1, 7)
    assert (pt.x, pt.y) == (1, 2)
    # a point with x = y != 0 exists for k = 1 at p = 3
    assert any(XY_Xm2Y.eval_mod(x, x, 3) == 1 for x in (1, 2))
    assert solve_residue(XY_Xm2Y, 1, 3)


def test_solve_residue_not_found_is_a_value():
    # X^2 = 2 has no solution mod 3 whatever Y is
    res = solve_residue(BinaryForm((1, 0, 0)), 2, 3)
    assert isinstance(res, NotFound) and not res


def test_residue_targeting_all_classes():
    misses = []
    for p in primes_up_to(200):
        if p < 3:
            continue
        for k in range(1, p):
            pt = solve_residue(XY_Xm2Y, k, p)
            if not pt:
                misses.append((p, k))
                continue
            assert XY_Xm2Y.eval_mod(pt.x, pt.y, p) == k
    assert all(p == 7 for p, _ in misses), misses


def test_zero_target_is_nonsingular():
    for p in (3, 5, 7, 11):
        pt = solve_residue(XY_Xm2Y, 0, p)
        assert XY_Xm2Y.eval_mod(pt.x, pt.y, p) == 0
        dx, dy = XY_Xm2Y.partials()
        assert dx.eval_mod(pt.x, pt.y, p) or dy.eval_mod(pt.x, pt.y, p)


def test_hensel_examples():
    base = ResiduePoint(7, 1, 1, 2, 1)
    up = hensel_lift(XY_Xm2Y, base, 1, 2)
    assert (up.x, up.y) == (36, 2)
    assert 2 * 36**2 - 8 * 36 - 1 == 49 * 47
    assert hensel_lift(XY_Xm2Y, base, 1, 1) == base
    up = hensel_lift(X2Y, ResiduePoint(5, 1, 1, 3, 3), 3, 2)
    assert (up.x, up.y) == (1, 3)


def test_hensel_singular_point_rejected():
    # the origin is singular on XY(X - 2Y) = 0
    with pytest.raises(ValueError, match="singular"):
        hensel_lift(XY_Xm2Y, ResiduePoint(5, 1, 0, 0, 0), 0, 3)


# mod 3 the form is XY(X + Y) and every point of F = k != 0 has x = y, where
# both partials vanish; no base point there can be lifted
@settings(max_examples=500, deadline=None)
@given(st.sampled_from([5, 11, 13, 17, 19, 23]), st.integers(1, 10**6), st.integers(1, 4))
def test_hensel_lift_verifies_and_reduces(p, kseed, m):
    k = kseed % p or 1
    K = kseed % p**m
    if K % p == 0:
        K += k
    pt = solve_residue(XY_Xm2Y, K, p, nonsingular=True)
    assert pt
    up = hensel_lift(XY_Xm2Y, pt, K, m)
    q = p**m
    assert XY_Xm2Y.eval_mod(up.x, up.y, q) == K % q
    assert (up.x % p, up.y % p) == (pt.x, pt.y)


def test_count_points_examples():
    c = count_points(XY_Xm2Y, 1, 11)
    s = 6  # floor(2 sqrt 11)
    assert 12 - s - 3 <= c.count <= 12 + s - 3
    assert count_points(X2Y, 1, 13).count == 12
    assert count_points(XY_Xm2Y, 0, 5).count >= 3 * 5 - 2


def test_count_points_brute_force():
    rng = random.Random(2)
    for _ in range(30):
        F = BinaryForm(tuple(rng.randint(-5, 5) for _ in range(4)))
        p = rng.choice([3, 5, 7, 11])
        k = rng.randrange(p)
        ref = sum(1 for x in range(p) for y in range(p) if F.eval_mod(x, y, p) == k)
        assert count_points(F, k, p).count == ref


def test_hasse_window_for_cubics():
    for p in primes_up_to(200):
        if p <= 3:
            continue
        for k in range(1, p):
            c = count_points(XY_Xm2Y, k, p)
            assert c.window_known and c.in_window(), (p, k, c)
