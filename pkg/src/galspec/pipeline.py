"""Residue-targeted search for specializations with prescribed reduced discriminant.

The flow: clear fixed prime divisors of the branch form, pick a basepoint
whose local behaviour at the bad primes is frozen in an N-adic
neighbourhood, solve for the wanted residues on the shifted Thue curve,
glue everything with CRT and scan the resulting lattice for squarefree
values.
"""
from __future__ import annotations

import itertools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .binforms import (
    BinaryForm,
    FixedDivisorReport,
    TransformRecord,
    eliminate_fixed_divisors,
    evaluate,
    fixed_prime_divisors,
    substitute_affine,
)
from .exactalg import BiPoly, UniPoly, discriminant, factorize, squarefree_integer, valuation
from .modcurves import NotFound, hensel_lift, solve_residue
from .specialize import (
    BranchData,
    Family,
    GroupCertificate,
    Ram,
    bad_primes,
    branch_form,
    disc_valuation,
    factor_with_hints,
    frobenius_cycle_type,
    group_certificate,
    independent_delta,
    panel_fingerprint,
    ramification_oracle,
    reduced_discriminant,
    s0_part,
    specialize_at,
    tame_disc_exponent,
)

DEFAULT_BUDGET = 10**6
KRASNER_SAMPLES = 8
KRASNER_CAP = 12
MAX_BASEPOINTS = 40


# --- preparation -----------------------------------------------------------


@dataclass(frozen=True)
class PreparedFamily:
    original: Family
    family: Family
    N0: int
    bd: BranchData
    s0: dict
    fixed: FixedDivisorReport
    transform: TransformRecord | None = None

    @property
    def S0(self) -> tuple:
        return tuple(self.s0)

    @property
    def form(self) -> BinaryForm:
        return self.bd.form


def rescale_parameter(fam: Family, N: int) -> Family:
    """The family in S with T = S/N, denominators cleared and made primitive."""
    m = fam.f.degree(1)
    terms = {(i, j): c * N ** (m - j) for (i, j), c in fam.f.terms.items()}
    f = BiPoly(terms, fam.f.vars).primitive()
    inf = fam.infinity_branch
    if inf == "auto":
        inf = "yes" if branch_form(fam).infinity else "no"
    return Family(
        name=fam.name,
        f=f,
        infinity_branch=inf,
        group=fam.group,
        group_order=fam.group_order,
        inertia_indices=fam.inertia_indices,
        s0_override=fam.s0_override,
        s0_extra=fam.s0_extra,
        unconditional=fam.unconditional,
        perfect=fam.perfect,
        note=f"T = S/{N}",
    )


def prepare(fam: Family, extras=(), use_override: bool = False) -> PreparedFamily:
    bd = branch_form(fam)
    rep = fixed_prime_divisors(bd.form)
    if not rep.fixed_primes:
        # nothing to clear; the lemma's substitution is skipped entirely
        work, wbd, N0, tr = fam, bd, 1, None
    else:
        tr = eliminate_fixed_divisors(bd.form)
        N0 = tr.N
        work = rescale_parameter(fam, N0)
        wbd = branch_form(work)
        if fixed_prime_divisors(wbd.form).fixed_primes:
            raise RuntimeError("fixed divisors survived the rescaling")
    if use_override and fam.s0_override is not None:
        s0 = {p: ("override",) for p in fam.s0_override}
        for p in factorize(N0) or {}:
            s0.setdefault(p, ("rescaling",))
        for p in extras:
            s0.setdefault(p, ("user",))
        s0 = dict(sorted(s0.items()))
    else:
        s0 = bad_primes(work, wbd, extras)
    return PreparedFamily(fam, work, N0, wbd, s0, rep, tr)


# --- basepoints and Krasner neighbourhoods ---------------------------------


def _crt(residues) -> tuple[int, int]:
    """Combine [(r, m)] with pairwise coprime moduli."""
    x, M = 0, 1
    for r, m in residues:
        t = ((r - x) * pow(M, -1, m)) % m
        x += M * t
        M *= m
    return x % M, M


def _shells(radius_limit=None):
    """(u, v) in expanding square shells; within a shell u ascending, then v."""
    r = 0
    while radius_limit is None or r <= radius_limit:
        if r == 0:
            yield 0, 0
        else:
            for u in range(-r, r + 1):
                if abs(u) == r:
                    for v in range(-r, r + 1):
                        yield u, v
                else:
                    yield u, -r
                    yield u, r
        r += 1


def choose_basepoint(pf: PreparedFamily) -> tuple[int, int]:
    """Coprime (a1, b1), b1 > 0, with F(a1, b1) prime to every p in S_0."""
    F = pf.form
    res_a, res_b = [], []
    for p in pf.S0:
        found = None
        for y in list(range(1, p)) + [0]:
            for x in range(p):
                if F.eval_mod(x, y, p):
                    found = (x, y)
                    break
            if found:
                break
        if found is None:
            raise RuntimeError(f"F vanishes identically mod {p}: fixed divisor left")
        res_a.append((found[0], p))
        res_b.append((found[1], p))
    a0, N = _crt(res_a)
    b0, _ = _crt(res_b)
    for i, j in _shells(10_000):
        a, b = a0 + N * i, b0 + N * j
        if b <= 0 or math.gcd(a, b) != 1:
            continue
        v = evaluate(F, a, b)
        if v and math.gcd(v, N) == 1:
            return a, b
    raise RuntimeError("no basepoint found")


def basepoint_candidates(pf: PreparedFamily, limit: int = MAX_BASEPOINTS):
    """The CRT basepoint first, then small coprime pairs in shell order."""
    seen = set()
    first = choose_basepoint(pf)
    seen.add(first)
    yield first
    count = 1
    for u, v in _shells():
        if count >= limit:
            return
        if v <= 0 or math.gcd(u, v) != 1 or (u, v) in seen:
            continue
        if evaluate(pf.form, u, v) == 0:
            continue
        seen.add((u, v))
        count += 1
        yield u, v


@dataclass(frozen=True)
class KrasnerResult:
    a1: int
    b1: int
    m: int
    N: int
    n_prime: int
    D: int
    status: dict  # S_0 prime -> Ram at the basepoint
    undetermined: tuple

    @property
    def modulus(self) -> int:
        return self.N**self.m


def stabilize_krasner(
    pf: PreparedFamily,
    basepoint: tuple[int, int],
    samples: int = KRASNER_SAMPLES,
    cap: int = KRASNER_CAP,
    seed: int = 0,
) -> KrasnerResult:
    """Smallest m for which sampled t0 = t1 mod N^m share t1's S_0 ramification."""
    if samples < 1:
        raise ValueError("need at least one Krasner sample")
    a1, b1 = basepoint
    F = pf.form
    N = math.prod(pf.S0) if pf.S0 else 1
    v1 = evaluate(F, a1, b1)
    if v1 == 0:
        raise ValueError("basepoint is a branch point")
    D = s0_part(v1, pf.S0)
    g1 = specialize_at(pf.family, a1, b1, pf.bd)
    status = {p: ramification_oracle(g1, p) for p in pf.S0}
    und = tuple(p for p, s in status.items() if s == Ram.UNDETERMINED)
    n_prime = math.prod(p for p, s in status.items() if s == Ram.RAMIFIED)
    # the S_0-part of F is frozen only when N^m beats every exponent in D
    m0 = max([2] + [valuation(D, p) + 1 for p in pf.S0 if D % p == 0])
    if N == 1:
        return KrasnerResult(a1, b1, m0, 1, 1, D, status, und)
    rng = random.Random(seed * 7919 + a1 * 104729 + b1)
    for m in range(m0, cap + 1):
        step = N**m
        ok, drawn, tries = True, 0, 0
        while drawn < samples and tries < 50 * samples:
            tries += 1
            a = a1 + step * rng.randrange(-20, 21)
            b = b1 + step * rng.randrange(-20, 21)
            if math.gcd(a, b) != 1 or evaluate(F, a, b) == 0:
                continue
            try:
                g = specialize_at(pf.family, a, b, pf.bd)
            except ValueError:
                continue
            drawn += 1
            for p, s in status.items():
                t = ramification_oracle(g, p)
                if s != Ram.UNDETERMINED and t != Ram.UNDETERMINED and s != t:
                    ok = False
                    break
            if not ok:
                break
        if ok and drawn == samples:
            return KrasnerResult(a1, b1, m, N, n_prime, D, status, und)
    raise RuntimeError("Krasner stabilization failed; raise cap or fix S_0")


# --- targets ---------------------------------------------------------------


@dataclass(frozen=True)
class ResidueConstraint:
    p: int
    e: int
    k: int
    zero: bool = False

    def __post_init__(self):
        if self.zero and (self.e != 1 or self.k % self.p):
            raise ValueError("zero-class constraints are k = 0 mod p with e = 1")

    @property
    def modulus(self) -> int:
        return self.p**self.e


@dataclass(frozen=True)
class FrobeniusConstraint:
    q: int
    cycle_type: tuple


@dataclass(frozen=True)
class TargetSpec:
    residues: tuple = ()
    frobenius: tuple = ()
    sign: int = 1
    budget: int = DEFAULT_BUDGET
    max_hits: int = 1
    require_certificate: bool = True
    seed: int = 0
    cert_budget: int = 200

    def validate(self, pf: PreparedFamily):
        ps = [c.p for c in self.residues]
        if len(set(ps)) != len(ps):
            raise ValueError("constraint primes must be distinct")
        for c in self.residues:
            if c.p in pf.s0:
                raise ValueError(f"residue prime {c.p} lies in S_0")
        qs = [c.q for c in self.frobenius]
        if len(set(qs)) != len(qs):
            raise ValueError("Frobenius primes must be distinct")
        for c in self.frobenius:
            if c.q in pf.s0:
                raise ValueError(f"Frobenius prime {c.q} lies in S_0")
            if sum(c.cycle_type) != pf.family.degree:
                raise ValueError("cycle type must sum to the degree")
            if c.q in ps and not pf.original.perfect:
                raise ValueError(
                    f"Frobenius prime {c.q} overlaps a residue prime; allowed only for perfect groups"
                )


@dataclass(frozen=True)
class Lattice:
    kr: KrasnerResult
    M: int
    a_star: int
    b_star: int
    targets: dict  # residue prime -> target value of F mod p^e
    frob_classes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Exceptional:
    """Residue or Frobenius targets that have no solution for this basepoint."""

    pairs: tuple


def _pattern_class(pf, kr, q, cycle_type, value_target=None):
    """Least (x, y) mod q whose lattice specialization has the cycle type."""
    step = kr.modulus
    for x in range(q):
        for y in range(q):
            a = (kr.a1 + step * x) % q
            b = (kr.b1 + step * y) % q
            v = pf.form.eval_mod(a, b, q)
            if v == 0:
                continue
            if value_target is not None and v != value_target % q:
                continue
            cs = [0] * (pf.family.degree + 1)
            m = pf.family.f.degree(1)
            for (i, j), c in pf.family.f.terms.items():
                cs[i] = (cs[i] + c * pow(a, j, q) * pow(b, m - j, q)) % q
            if cs[-1] == 0:
                continue
            ct = frobenius_cycle_type(UniPoly(tuple(cs)), q)
            if ct == tuple(cycle_type):
                return x, y
    return None


def target_residues(pf: PreparedFamily, kr: KrasnerResult, spec: TargetSpec):
    """Lattice of (a, b) meeting every residue constraint, or Exceptional."""
    step = kr.modulus
    Fhat = substitute_affine(pf.form, kr.a1, kr.b1, step)
    xs, ys, targets, missing = [], [], {}, []
    frob_by_q = {c.q: c for c in spec.frobenius}
    frob_classes = {}
    for c in spec.residues:
        q = c.modulus
        if c.zero:
            t = 0
        else:
            t = (spec.sign * c.k * kr.D * pow(kr.n_prime, -1, q)) % q
        targets[c.p] = t
        if c.p in frob_by_q:
            fc = frob_by_q[c.p]
            if c.e != 1:
                raise ValueError("joint residue and Frobenius constraints need e = 1")
            hit = _pattern_class(pf, kr, c.p, fc.cycle_type, value_target=t)
            if hit is None:
                missing.append(("joint", c.p, c.k))
                continue
            xs.append((hit[0], c.p))
            ys.append((hit[1], c.p))
            frob_classes[c.p] = hit
            continue
        pt = solve_residue(Fhat, t % c.p, c.p, seed=spec.seed, nonsingular=(c.e > 1 or c.zero))
        if isinstance(pt, NotFound):
            missing.append(("residue", c.p, c.k))
            continue
        if c.e > 1:
            pt = hensel_lift(Fhat, pt, t, c.e)
        xs.append((pt.x, q))
        ys.append((pt.y, q))
    for fc in spec.frobenius:
        if fc.q in targets:
            continue
        hit = _pattern_class(pf, kr, fc.q, fc.cycle_type)
        if hit is None:
            missing.append(("frobenius", fc.q, fc.cycle_type))
            continue
        xs.append((hit[0], fc.q))
        ys.append((hit[1], fc.q))
        frob_classes[fc.q] = hit
    if missing:
        return Exceptional(tuple(missing))
    X, Q = _crt(xs)
    Y, _ = _crt(ys)
    return Lattice(kr, step * Q, kr.a1 + step * X, kr.b1 + step * Y, targets, frob_classes)


# --- records ---------------------------------------------------------------


@dataclass
class SpecializationRecord:
    family: str
    N0: int
    a: int
    b: int
    g: UniPoly
    f_value: int
    D: int
    delta: int
    sources: dict
    disc_valuations: dict
    disc_sign: int
    certificate: GroupCertificate
    constraints: list
    fingerprint: tuple = ()

    @property
    def nonreduced(self) -> int | None:
        if any(v is None for v in self.disc_valuations.values()):
            return None
        return self.disc_sign * math.prod(p**v for p, v in self.disc_valuations.items())

    def to_json(self) -> dict:
        t0 = Fraction(self.a, self.b * self.N0) if self.b else None
        return {
            "family": self.family,
            "N0": self.N0,
            "a": self.a,
            "b": self.b,
            "t0": str(t0) if t0 is not None else "oo",
            "g": list(self.g.coeffs),
            "F_value": self.f_value,
            "D": self.D,
            "delta": self.delta,
            "ramified": {str(p): s for p, s in self.sources.items()},
            "disc_valuations": {str(p): v for p, v in self.disc_valuations.items()},
            "disc_sign": self.disc_sign,
            "nonreduced": self.nonreduced,
            "certificate": self.certificate.to_json(),
            "constraints": self.constraints,
            "fingerprint": list(self.fingerprint),
        }


def _normalize(a: int, b: int) -> tuple[int, int]:
    if b < 0 or (b == 0 and a < 0):
        return -a, -b
    return a, b


def build_record(
    pf: PreparedFamily,
    a: int,
    b: int,
    kr: KrasnerResult | None,
    value_factors=None,
    cert_budget: int = 200,
    seed: int = 0,
) -> SpecializationRecord:
    a, b = _normalize(a, b)
    g = specialize_at(pf.family, a, b, pf.bd)
    v = evaluate(pf.form, a, b)
    rd = reduced_discriminant(
        pf.family,
        pf.bd,
        pf.S0,
        a,
        b,
        s0_status=kr.status if kr else None,
        g=g,
        value_factors=value_factors,
    )
    dg = discriminant(g)
    vals = {p: disc_valuation(g, p, dg) for p in rd.sources}
    cert = group_certificate(g, cert_budget, seed)
    return SpecializationRecord(
        family=pf.original.name,
        N0=pf.N0,
        a=a,
        b=b,
        g=g,
        f_value=v,
        D=s0_part(v, pf.S0),
        delta=rd.delta,
        sources=rd.sources,
        disc_valuations=dict(sorted(vals.items())),
        disc_sign=1 if dg > 0 else -1,
        certificate=cert,
        constraints=[],
        fingerprint=panel_fingerprint(g),
    )


# --- scanning --------------------------------------------------------------


@dataclass
class ScanStats:
    tried: int = 0
    coprime: int = 0
    sign_ok: int = 0
    squarefree: int = 0
    undetermined_values: int = 0
    certified: int = 0
    uncertified: int = 0
    oracle_undetermined: int = 0
    contradictions: int = 0

    def to_json(self):
        return dict(sorted(self.__dict__.items()))


def squarefree_scan(pf: PreparedFamily, lattice: Lattice, spec: TargetSpec, stats: ScanStats | None = None):
    """Yield records from the lattice in shell order until the budget is spent."""
    stats = stats if stats is not None else ScanStats()
    kr = lattice.kr
    F = pf.form
    zero_primes = [c.p for c in spec.residues if c.zero]
    for u, v in _shells():
        if stats.tried >= spec.budget:
            return
        stats.tried += 1
        a = lattice.a_star + lattice.M * u
        b = lattice.b_star + lattice.M * v
        if math.gcd(a, b) != 1:
            continue
        stats.coprime += 1
        val = evaluate(F, a, b)
        if val == 0 or (val > 0) != (spec.sign > 0):
            continue
        stats.sign_ok += 1
        if any(valuation(val, p) != 1 for p in zero_primes):
            continue
        D = s0_part(val, pf.S0)
        if D != kr.D:
            continue
        verdict = squarefree_integer(abs(val) // D)
        if verdict.status == "undetermined":
            stats.undetermined_values += 1
            continue
        if not verdict.squarefree:
            continue
        factors = verdict.factors
        if factors is None:
            factors = factorize(abs(val) // D)
            if factors is None:
                stats.undetermined_values += 1
                continue
        stats.squarefree += 1
        an, bn = _normalize(a, b)
        try:
            g = specialize_at(pf.family, an, bn, pf.bd)
        except ValueError:
            continue
        ok = True
        for fc in spec.frobenius:
            if frobenius_cycle_type(g, fc.q) != tuple(fc.cycle_type):
                ok = False
                break
        if not ok:
            continue
        rec = build_record(pf, a, b, kr, factors, spec.cert_budget, spec.seed)
        und = [p for p, s in rec.sources.items() if s == "oracle-undetermined"]
        stats.oracle_undetermined += len(und)
        if any(s == "oracle-contradicted" for s in rec.sources.values()):
            stats.contradictions += 1
            continue
        checks = check_constraints(rec, spec)
        if not all(c["satisfied"] for c in checks):
            continue
        rec.constraints = checks
        if spec.require_certificate and not rec.certificate.proven:
            stats.uncertified += 1
            continue
        stats.certified += int(rec.certificate.proven)
        yield rec


def check_constraints(rec: SpecializationRecord, spec: TargetSpec) -> list:
    out = []
    for c in spec.residues:
        q = c.modulus
        if c.zero:
            sat = rec.delta % c.p == 0 and valuation(rec.f_value, c.p) == 1
        else:
            sat = (rec.delta - c.k) % q == 0
        out.append({"kind": "residue", "p": c.p, "e": c.e, "k": c.k % q, "zero": c.zero,
                    "delta_mod": rec.delta % q, "satisfied": sat})
    for c in spec.frobenius:
        ct = frobenius_cycle_type(rec.g, c.q)
        out.append({"kind": "frobenius", "q": c.q, "cycle_type": list(c.cycle_type),
                    "observed": ct if isinstance(ct, str) else list(ct),
                    "satisfied": ct == tuple(c.cycle_type)})
    return out


@dataclass
class SearchResult:
    records: list
    stats: ScanStats
    basepoints: list  # (a1, b1, m, D, N', outcome)
    exceptional: list

    @property
    def found(self) -> bool:
        return bool(self.records)


class _KrasnerCache:
    def __init__(self, pf, seed):
        self.pf, self.seed, self.data = pf, seed, {}

    def get(self, bp):
        if bp not in self.data:
            try:
                self.data[bp] = stabilize_krasner(self.pf, bp, seed=self.seed)
            except (RuntimeError, ValueError):
                self.data[bp] = None
        return self.data[bp]


def run_target(pf: PreparedFamily, spec: TargetSpec, cache: _KrasnerCache | None = None) -> SearchResult:
    """Search for records meeting every constraint of ``spec``.

    Basepoints are tried in a fixed order.  A later basepoint is used only when
    the current one has an undetermined S_0 prime or leaves a residue
    unsolvable; its S_0-part D and N' then change the target class on the curve.
    """
    spec.validate(pf)
    cache = cache or _KrasnerCache(pf, spec.seed)
    stats = ScanStats()
    log, exceptional, seen = [], [], set()
    for bp in basepoint_candidates(pf):
        kr = cache.get(bp)
        if kr is None:
            log.append({"basepoint": list(bp), "outcome": "krasner failed"})
            continue
        if kr.undetermined:
            log.append({"basepoint": list(bp), "outcome": "undetermined S_0 primes",
                        "undetermined": list(kr.undetermined)})
            continue
        key = (kr.D, kr.n_prime)
        if key in seen:
            continue
        seen.add(key)
        lat = target_residues(pf, kr, spec)
        if isinstance(lat, Exceptional):
            exceptional.append({"basepoint": list(bp), "pairs": [list(map(_jsonable, p)) for p in lat.pairs]})
            log.append({"basepoint": list(bp), "outcome": "no residue solution", "D": kr.D, "n_prime": kr.n_prime})
            continue
        records = []
        for rec in squarefree_scan(pf, lat, spec, stats):
            records.append(rec)
            if len(records) >= spec.max_hits:
                break
        log.append({"basepoint": list(bp), "m": kr.m, "D": kr.D, "n_prime": kr.n_prime, "M": lat.M,
                    "outcome": "found" if records else "budget exhausted"})
        return SearchResult(records, stats, log, exceptional)
    return SearchResult([], stats, log, exceptional)


def _jsonable(x):
    if isinstance(x, tuple):
        return list(x)
    return x


# --- surveys ---------------------------------------------------------------


def _survey_one(args):
    pf, p, k, budget, seed = args
    spec = TargetSpec(
        residues=(ResidueConstraint(p, 1, k, zero=(k == 0)),),
        budget=budget,
        seed=seed,
    )
    res = run_target(pf, spec)
    return k, res


def run_survey(
    fam: Family | PreparedFamily,
    p: int,
    include_zero: bool = False,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    threads: int = 1,
) -> dict:
    """Coverage map k -> SearchResult for every class mod p."""
    pf = fam if isinstance(fam, PreparedFamily) else prepare(fam)
    ks = ([0] if include_zero else []) + list(range(1, p))
    jobs = [(pf, p, k, budget, seed) for k in ks]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            out = list(ex.map(_survey_one, jobs))
    else:
        out = [_survey_one(j) for j in jobs]
    return dict(out)


def sample_records(pf: PreparedFamily, count: int, budget: int = DEFAULT_BUDGET, seed: int = 0,
                   require_certificate: bool = False, cert_budget: int = 200) -> tuple[list, ScanStats]:
    """Unconstrained scan around the first basepoint with a fully determined S_0 status."""
    spec = TargetSpec(budget=budget, max_hits=count, require_certificate=require_certificate, seed=seed,
                      cert_budget=cert_budget)
    cache = _KrasnerCache(pf, seed)
    for bp in basepoint_candidates(pf):
        kr = cache.get(bp)
        if kr is None or kr.undetermined:
            continue
        lat = target_residues(pf, kr, spec)
        stats = ScanStats()
        recs = list(itertools.islice(squarefree_scan(pf, lat, spec, stats), count))
        return recs, stats
    raise RuntimeError("no usable basepoint")


@dataclass(frozen=True)
class DensityReport:
    grid: tuple
    counts: tuple
    slope: float | None
    usable: bool


def density_report(records, grid) -> DensityReport:
    """Distinct extensions with |disc| <= B for B in grid, and the log-log slope."""
    seen = {}
    for r in records:
        if isinstance(r, SpecializationRecord):
            d = r.nonreduced
            key = (r.delta, tuple(r.fingerprint))
        else:
            d, key = r[0], r[1]
        if d is None:
            continue
        seen[key] = min(abs(d), seen.get(key, abs(d)))
    discs = sorted(seen.values())
    grid = tuple(sorted(grid))
    counts = tuple(int(np.searchsorted(discs, B, side="right")) for B in grid)
    pts = [(B, c) for B, c in zip(grid, counts) if c > 0]
    if len(pts) < 2:
        return DensityReport(grid, counts, None, False)
    x = np.log([float(B) for B, _ in pts])
    y = np.log([float(c) for _, c in pts])
    slope = float(np.polyfit(x, y, 1)[0])
    return DensityReport(grid, counts, slope, True)


@dataclass(frozen=True)
class NonreducedReport:
    A: int
    e: int
    e_source: str
    observed: tuple
    subgroup: tuple
    cosets_hit: tuple
    closed: bool
    records_used: int


def _units(A: int):
    return [x for x in range(1, A) if math.gcd(x, A) == 1]


def nonreduced_survey(fam: Family | PreparedFamily, A: int, count: int = 200, budget: int = DEFAULT_BUDGET,
                      e: int | None = None, seed: int = 0) -> NonreducedReport:
    """Image of the field discriminant mod A against cosets of e-th powers."""
    pf = fam if isinstance(fam, PreparedFamily) else prepare(fam)
    if A < 2:
        raise ValueError("modulus must be at least 2")
    if math.gcd(A, math.prod(pf.S0)) != 1:
        raise ValueError(f"modulus {A} shares a prime with S_0 = {list(pf.S0)}")
    recs, _ = sample_records(pf, count, budget, seed, cert_budget=40)
    e_source = "declared"
    if e is None and pf.original.inertia_indices:
        e = math.gcd(*pf.original.inertia_indices)
    if e is None:
        exps = []
        for r in recs:
            for p in r.sources:
                if p in pf.s0:
                    continue
                t = tame_disc_exponent(r.g, p)
                if t:
                    exps.append(t)
        if not exps:
            raise ValueError("inertia exponent unavailable and inestimable")
        e = math.gcd(*exps)
        e_source = "estimated"
    observed = set()
    used = 0
    for r in recs:
        d = r.nonreduced
        if d is None or math.gcd(d, A) != 1:
            continue
        used += 1
        observed.add(abs(d) % A)
    H = sorted({pow(x, e, A) for x in _units(A)})
    cosets = sorted({tuple(sorted((c * h) % A for h in H)) for c in observed})
    union = set().union(*map(set, cosets)) if cosets else set()
    return NonreducedReport(A, e, e_source, tuple(sorted(observed)), tuple(H), tuple(cosets),
                            union == observed, used)


# --- independent verification ---------------------------------------------


def verify_record(fam: Family, rec: dict, use_override: bool = False, extras=()) -> list[str]:
    """Recompute a result line from (a, b) and the family; return the failures."""
    errs = []
    pf = prepare(fam, extras, use_override)
    if rec["N0"] != pf.N0:
        errs.append("N0 mismatch")
    a, b = rec["a"], rec["b"]
    if math.gcd(a, b) != 1:
        errs.append("parameters not coprime")
        return errs
    g = specialize_at(pf.family, a, b, pf.bd)
    if list(g.coeffs) != list(rec["g"]):
        errs.append("specialized polynomial mismatch")
    v = evaluate(pf.form, a, b)
    if v != rec["F_value"]:
        errs.append("F-value mismatch")
    D = s0_part(v, pf.S0)
    if not squarefree_integer(abs(v) // D).squarefree:
        errs.append("F-value not squarefree outside S_0")
    fv = factor_with_hints(abs(v) // D) or {}
    ind = independent_delta(g, hints=list(pf.S0) + list(fv))
    if ind.delta is None:
        errs.append(f"oracle undetermined at {list(ind.undetermined)}")
    elif ind.delta != rec["delta"]:
        errs.append(f"delta mismatch: recomputed {ind.delta}, recorded {rec['delta']}")
    if ind.delta is not None:
        rv = {int(p): x for p, x in rec["disc_valuations"].items()}
        if rv != ind.disc_valuations:
            errs.append("discriminant valuations mismatch")
    for c in rec["constraints"]:
        if c["kind"] == "residue":
            q = c["p"] ** c["e"]
            delta = ind.delta if ind.delta is not None else rec["delta"]
            if c["zero"]:
                ok = delta % c["p"] == 0 and valuation(v, c["p"]) == 1
            else:
                ok = (delta - c["k"]) % q == 0
            if not ok:
                errs.append(f"residue constraint mod {q} fails")
        else:
            ct = frobenius_cycle_type(g, c["q"])
            if ct != tuple(c["cycle_type"]):
                errs.append(f"Frobenius constraint at {c['q']} fails")
    cert = rec["certificate"]
    gc = GroupCertificate(cert["kind"], cert["n"], dict(cert["witnesses"]))
    if not gc.reverify(g):
        errs.append("group certificate does not reverify")
    return errs
