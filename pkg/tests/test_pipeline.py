import math

import pytest

from galspec.binforms import BinaryForm, evaluate, fixed_prime_divisors
from galspec.catalog import load_catalog
from galspec.pipeline import (
    Exceptional,
    FrobeniusConstraint,
    ResidueConstraint,
    TargetSpec,
    _crt,
    basepoint_candidates,
    choose_basepoint,
    density_report,
    nonreduced_survey,
    prepare,
    run_survey,
    run_target,
    sample_records,
    stabilize_krasner,
    substitute_affine,
    target_residues,
    verify_record,
)
from galspec.specialize import Ram

CAT = load_catalog()


@pytest.fixture(scope="module")
def prepared():
    return {name: prepare(e.family) for name, e in CAT.items()}


def test_prepare_examples(prepared):
    tri = prepared["trinomial-5"]
    assert tri.N0 == 1 and tri.transform is None
    assert tri.form == BinaryForm((0, 256, 3125, 0))
    bel = prepared["belyi-sn-5"]
    assert bel.N0 == 2 and bel.form == BinaryForm((0, 1, -2, 0))
    c2 = prepared["c2-cubic"]
    assert c2.N0 == 6 and c2.fixed.fixed_primes == (2, 3)
    assert fixed_prime_divisors(c2.form).fixed_primes == ()


def test_basepoint_examples(prepared):
    for pf in prepared.values():
        a, b = choose_basepoint(pf)
        v = evaluate(pf.form, a, b)
        assert b > 0 and math.gcd(a, b) == 1 and v != 0
        assert math.gcd(v, math.prod(pf.S0)) == 1
    # (1, 0) is the branch point at infinity and never offered
    for bp in basepoint_candidates(prepared["trinomial-5"]):
        assert bp[1] > 0
    assert evaluate(BinaryForm((0, 1, -2, 0)), 1, 1) == -1


def test_krasner_examples(prepared):
    pf = prepared["trinomial-5"]
    kr = stabilize_krasner(pf, choose_basepoint(pf))
    assert kr.N == 30 and 2 <= kr.m <= 12 and not kr.undetermined
    assert kr.n_prime == math.prod(p for p, s in kr.status.items() if s == Ram.RAMIFIED)
    pf = prepared["c2-cubic"]
    kr = stabilize_krasner(pf, choose_basepoint(pf))
    assert kr.N == 6
    with pytest.raises(ValueError):
        stabilize_krasner(pf, choose_basepoint(pf), samples=0)


def test_crt_combination():
    assert _crt([(2, 5), (3, 7)]) == (17, 35)


def test_target_residues_examples(prepared):
    pf = prepared["trinomial-5"]
    kr = stabilize_krasner(pf, choose_basepoint(pf))
    spec = TargetSpec(residues=(ResidueConstraint(11, 1, 1), ResidueConstraint(13, 1, 0, zero=True)))
    lat = target_residues(pf, kr, spec)
    assert not isinstance(lat, Exceptional)
    # the class reduces to each constraint and to the Krasner neighbourhood
    assert (lat.a_star - kr.a1) % kr.modulus == 0 and (lat.b_star - kr.b1) % kr.modulus == 0
    v = evaluate(pf.form, lat.a_star, lat.b_star)
    assert v % 11 == lat.targets[11] == (kr.D * pow(kr.n_prime, -1, 11)) % 11
    assert v % 13 == 0
    Fhat = substitute_affine(pf.form, kr.a1, kr.b1, kr.modulus)
    x, y = (lat.a_star - kr.a1) // kr.modulus, (lat.b_star - kr.b1) // kr.modulus
    assert Fhat(x, y) == v


def test_target_validation(prepared):
    pf = prepared["trinomial-5"]
    with pytest.raises(ValueError, match="S_0"):
        run_target(pf, TargetSpec(residues=(ResidueConstraint(5, 1, 1),)))
    with pytest.raises(ValueError, match="distinct"):
        run_target(pf, TargetSpec(residues=(ResidueConstraint(7, 1, 1), ResidueConstraint(7, 1, 2))))
    with pytest.raises(ValueError, match="perfect"):
        run_target(pf, TargetSpec(residues=(ResidueConstraint(7, 1, 1),),
                                  frobenius=(FrobeniusConstraint(7, (5,)),)))


def test_scan_value_examples():
    F = BinaryForm((0, 1, -2, 0))
    assert evaluate(F, 3, 1) == 3
    assert evaluate(F, 2, 1) == 0
    assert evaluate(F, 5, 1) == 15 and math.gcd(4, 2) != 1


def test_c2_survey_p11_full_coverage(prepared):
    cov = run_survey(prepared["c2-cubic"], 11, budget=200_000)
    assert sorted(cov) == list(range(1, 11))
    for k, res in cov.items():
        assert res.found, k
        rec = res.records[0]
        assert rec.delta % 11 == k
        assert rec.certificate.kind == "ProvenC2"


def test_trinomial_survey_p7_with_zero(prepared):
    cov = run_survey(prepared["trinomial-5"], 7, include_zero=True, budget=200_000)
    assert all(res.found for res in cov.values())
    rec = cov[0].records[0]
    assert rec.delta % 7 == 0 and rec.f_value % 7 == 0 and rec.f_value % 49


def test_search_invariants_and_verifier(prepared):
    pf = prepared["trinomial-5"]
    spec = TargetSpec(residues=(ResidueConstraint(11, 1, 4), ResidueConstraint(13, 2, 50)),
                      frobenius=(FrobeniusConstraint(17, (5,)),), max_hits=3, budget=300_000, seed=3)
    res = run_target(pf, spec)
    assert len(res.records) == 3
    for rec in res.records:
        assert rec.delta % 11 == 4 and rec.delta % 169 == 50
        assert 11 not in rec.sources and 13 not in rec.sources
        assert all(c["satisfied"] for c in rec.constraints)
        assert verify_record(pf.original, rec.to_json()) == []
    again = run_target(pf, spec)
    assert [r.to_json() for r in again.records] == [r.to_json() for r in res.records]


def test_verifier_catches_tampering(prepared):
    pf = prepared["c2-cubic"]
    res = run_target(pf, TargetSpec(residues=(ResidueConstraint(13, 1, 5),), budget=100_000))
    rec = res.records[0].to_json()
    bad = dict(rec, delta=rec["delta"] * 7)
    assert any("delta mismatch" in e for e in verify_record(pf.original, bad))
    bad = dict(rec, F_value=rec["F_value"] + 1)
    assert "F-value mismatch" in verify_record(pf.original, bad)


def test_density_synthetic_slope():
    grid = [10**k for k in range(2, 9)]
    # counts ~ B^(1/2): discriminants j^2
    data = [(j * j, (j, ())) for j in range(1, 10**4 + 1)]
    rep = density_report(data, grid)
    assert rep.usable and abs(rep.slope - 0.5) < 0.05
    assert list(rep.counts) == sorted(rep.counts)
    assert not density_report([(10**8, (0, ()))], grid).usable


def test_density_trinomial_positive(prepared):
    recs, _ = sample_records(prepared["trinomial-3"], 80, budget=50_000)
    rep = density_report(recs, [10**k for k in range(2, 14)])
    assert rep.usable and rep.slope > 0


def test_nonreduced_survey_examples(prepared):
    rep = nonreduced_survey(prepared["trinomial-5"], 7, count=30)
    assert rep.e == 1 and rep.observed and len(rep.subgroup) == 6
    rep = nonreduced_survey(prepared["c2-cubic"], 35, count=20)
    assert rep.e == 1
    with pytest.raises(ValueError, match="shares a prime"):
        nonreduced_survey(prepared["c2-cubic"], 15)


def test_nonreduced_an_discriminants_are_squares(prepared):
    rep = nonreduced_survey(prepared["a5-quintic"], 77, count=40)
    assert rep.e == 2 and rep.records_used > 10
    assert set(rep.observed) <= set(rep.subgroup)
    assert rep.closed or len(rep.cosets_hit) == 1
