"""Families f(X; T), branch data, specializations and local certificates."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .binforms import BinaryForm, evaluate
from .exactalg import (
    BiPoly,
    UniPoly,
    discriminant,
    discriminant_in_X,
    factor_mod_p,
    factorize,
    is_prime,
    squarefree_integer,
    squarefree_part,
    valuation,
)
from .exactalg import finite_field as ff
from .exactalg.integers import primes_up_to
from .pmaximal import MAX_DEGREE, p_maximal

DEFAULT_CERT_BUDGET = 200


@dataclass(frozen=True)
class Family:
    name: str
    f: BiPoly
    infinity_branch: str = "auto"
    group: str | None = None
    group_order: int | None = None
    inertia_indices: tuple | None = None
    s0_override: tuple | None = None
    s0_extra: tuple = ()
    unconditional: bool = False
    perfect: bool = False
    note: str = ""

    def __post_init__(self):
        if self.infinity_branch not in ("auto", "yes", "no"):
            raise ValueError("infinity_branch must be auto, yes or no")
        if self.f.is_zero():
            raise ValueError("zero polynomial")
        if self.f.content() != 1:
            raise ValueError(f"non-coprime content {self.f.content()}: family polynomial must be primitive")
        if self.f.degree(0) < 2:
            raise ValueError("family needs degree >= 2 in X")
        if self.f.degree(1) < 1:
            raise ValueError("family does not depend on T")

    @property
    def degree(self) -> int:
        return self.f.degree(0)


@dataclass(frozen=True)
class BranchData:
    disc: UniPoly
    radical: UniPoly
    infinity: bool
    form: BinaryForm
    r: int


def _shape_infinity(f: BiPoly) -> bool | None:
    """Branching at T = oo for q(X) - c T and q(X) - c T X; None for other shapes."""
    t_terms = {k: c for k, c in f.terms.items() if k[1] > 0}
    n = f.degree(0)
    if set(t_terms) == {(0, 1)}:
        return True
    if set(t_terms) == {(1, 1)} and (0, 0) in f.terms:
        return n >= 3
    return None


def branch_form(fam: Family) -> BranchData:
    disc = discriminant_in_X(fam.f)
    if disc.is_zero():
        raise ValueError("inseparable family")
    radical = squarefree_part(disc) if disc.degree > 0 else UniPoly.const(1, disc.var)
    if fam.infinity_branch == "auto":
        inf = _shape_infinity(fam.f)
        if inf is None:
            raise ValueError(
                f"{fam.name}: cannot detect branching at infinity for this shape; "
                "set infinity_branch to yes or no"
            )
    else:
        inf = fam.infinity_branch == "yes"
    form = BinaryForm.from_poly(radical, extra_y=inf)
    return BranchData(disc, radical, inf, form, radical.degree + int(inf))


def _prime_set(n: int) -> list[int]:
    n = abs(n)
    if n <= 1:
        return []
    fac = factorize(n)
    if fac is None:
        raise ArithmeticError(f"could not factor {n}")
    return list(fac)


def bad_primes(fam: Family, bd: BranchData, extras=()) -> dict[int, tuple[str, ...]]:
    """Conservative exceptional set S_0, each prime tagged with its reasons."""
    tags: dict[int, list[str]] = {}

    def add(ps, why):
        for p in ps:
            tags.setdefault(p, [])
            if why not in tags[p]:
                tags[p].append(why)

    order = fam.group_order or math.factorial(fam.degree)
    add(_prime_set(order), "group order")
    rad = bd.radical
    if rad.degree >= 0:
        add(_prime_set(rad.lc), "leading coefficient")
        low = next(c for c in rad.coeffs if c)
        add(_prime_set(low), "trailing coefficient")
    if rad.degree >= 2:
        add(_prime_set(discriminant(rad)), "branch collision")
    add(_prime_set(bd.disc.content()), "discriminant content")
    lead_x = [c for (i, j), c in fam.f.terms.items() if i == fam.degree]
    add(_prime_set(math.gcd(*lead_x)), "leading X-coefficient")
    add(primes_up_to(bd.form.degree), "fixed-divisor range")
    add([p for p in (*fam.s0_extra, *extras) if is_prime(p)], "user")
    return {p: tuple(tags[p]) for p in sorted(tags)}


def specialize_at(fam: Family, a: int, b: int, bd: BranchData | None = None) -> UniPoly:
    """Primitive part of b^m f(X; a/b), positive leading coefficient."""
    if math.gcd(a, b) != 1:
        raise ValueError("parameters must be coprime")
    bd = bd or branch_form(fam)
    if evaluate(bd.form, a, b) == 0:
        raise ValueError("specialization at branch point")
    g = fam.f.specialize_second(a, b)
    if g.degree < fam.degree:
        raise ValueError("degree drops at this parameter")
    return g.primitive()


class Ram(str, Enum):
    RAMIFIED = "ramified"
    UNRAMIFIED = "unramified"
    UNDETERMINED = "undetermined"


def _local_model(g: UniPoly, p: int) -> UniPoly | None:
    """A polynomial defining the same field with leading coefficient prime to p.

    If p divides lc(g), move a non-root c to infinity: X^n g(c + 1/X).
    """
    if g.lc % p:
        return g
    for c in range(p):
        if g(c) % p:
            return g.compose_linear(c, 1).reversed(g.degree)
    return None


def dedekind_p_maximal(g: UniPoly, p: int) -> bool:
    """Dedekind's criterion for Z_(p)[theta], theta a root of g; lc(g) must be a p-unit."""
    q = p * p
    inv = pow(g.lc, -1, q)
    T = [(c * inv) % q for c in g.coeffs]
    fac = factor_mod_p(UniPoly(tuple(T)), p)
    gg, hh = [1], [1]
    for t, e in fac.factors:
        gg = ff.mul(gg, list(t), p)
        for _ in range(e - 1):
            hh = ff.mul(hh, list(t), p)
    # (gg*hh - T) is divisible by p; reduce the quotient mod p
    prod = [0] * (len(gg) + len(hh) - 1)
    for i, x in enumerate(gg):
        for j, y in enumerate(hh):
            prod[i + j] += x * y
    n = max(len(prod), len(T))
    diff = [((prod[i] if i < len(prod) else 0) - (T[i] if i < len(T) else 0)) % q for i in range(n)]
    assert all(c % p == 0 for c in diff)
    fbar = ff.trim([(c // p) % p for c in diff])
    d = ff.gcd(ff.gcd(fbar, gg, p), hh, p)
    return len(d) <= 1


def _quadratic_field_disc_valuation(g: UniPoly, p: int) -> int:
    c, b, a = g.coeffs
    D = b * b - 4 * a * c
    if D == 0:
        raise ValueError("inseparable quadratic")
    if p != 2:
        return valuation(D, p) % 2
    while D % 4 == 0:
        D //= 4
    r = D % 4
    return {1: 0, 3: 2, 2: 3, 0: 0}[r]


def certified_local_model(g: UniPoly, p: int):
    """(h, factorization of h mod p) when Dedekind certifies Z_(p)[theta], else None."""
    h = _local_model(g, p)
    if h is None:
        return None
    fac = factor_mod_p(h, p)
    if fac.is_squarefree() or dedekind_p_maximal(h, p):
        return h, fac
    return None


def ramification_oracle(g: UniPoly, p: int, fallback: bool = True) -> Ram:
    """Is p ramified in Q[X]/(g)?  Three-valued; Undetermined is never a guess.

    Squarefree reduction, then Dedekind, then the quadratic rule; with
    ``fallback`` a Round 2 p-maximal order settles the remaining cases.
    """
    if all(c % p == 0 for c in g.coeffs):
        raise ValueError("vanishing reduction")
    if g.degree == 2:
        return Ram.RAMIFIED if _quadratic_field_disc_valuation(g, p) else Ram.UNRAMIFIED
    loc = certified_local_model(g, p)
    if loc is not None:
        return Ram.UNRAMIFIED if loc[1].is_squarefree() else Ram.RAMIFIED
    if fallback and g.degree <= MAX_DEGREE:
        return Ram.RAMIFIED if p_maximal(g, p).ramified else Ram.UNRAMIFIED
    return Ram.UNDETERMINED


RAMIFIED_FLAG = "ramified"


def frobenius_cycle_type(g: UniPoly, p: int, seed: int = 0):
    """Factor-degree multiset of g mod p (descending), or RAMIFIED_FLAG."""
    h = _local_model(g, p)
    if h is None:
        return RAMIFIED_FLAG
    fac = factor_mod_p(h, p, seed)
    if not fac.is_squarefree():
        return RAMIFIED_FLAG
    return tuple(fac.degrees())


def tame_disc_exponent(g: UniPoly, p: int) -> int | None:
    """v_p of the field discriminant for tame, Dedekind-certified p, else None.

    With a p-maximal model and every multiplicity prime to p, the exponent
    is sum f_i (e_i - 1) = n - (sum of degrees of the distinct factors).
    """
    loc = certified_local_model(g, p)
    if loc is None:
        return None
    fac = loc[1]
    if fac.is_squarefree():
        return 0
    if any(e % p == 0 for _, e in fac.factors):
        return None
    return g.degree - fac.distinct_degree_sum()


def disc_valuation(g: UniPoly, p: int, disc_g: int | None = None) -> int | None:
    """v_p of the field discriminant of Q[X]/(g) when it can be certified."""
    if g.degree == 2:
        return _quadratic_field_disc_valuation(g, p)
    loc = certified_local_model(g, p)
    if loc is None:
        return p_maximal(g, p).disc_valuation if g.degree <= MAX_DEGREE else None
    h, fac = loc
    if fac.is_squarefree():
        return 0
    return valuation(disc_g if disc_g is not None else discriminant(h), p)


@dataclass(frozen=True)
class GroupCertificate:
    kind: str  # ProvenSn | ProvenC2 | CycleTypeFingerprint | Inconclusive
    n: int
    witnesses: dict = field(default_factory=dict, hash=False, compare=False)
    fingerprint: dict = field(default_factory=dict, hash=False, compare=False)
    sample_size: int = 0

    @property
    def proven(self) -> bool:
        return self.kind in ("ProvenSn", "ProvenC2")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "witnesses": {k: v for k, v in sorted(self.witnesses.items())},
            "fingerprint": {"/".join(map(str, k)): v for k, v in sorted(self.fingerprint.items())},
            "sample_size": self.sample_size,
        }

    def reverify(self, g: UniPoly) -> bool:
        """Recheck every witness pattern with a fresh factorization."""
        n = g.degree
        disc = discriminant(g)

        def pattern(p):
            if (g.lc * disc) % p == 0:
                return None
            return tuple(factor_mod_p(g, p, seed=17).degrees())

        if self.kind == "ProvenC2":
            return n == 2 and pattern(self.witnesses["irreducible"]) == (2,)
        if self.kind == "ProvenSn":
            if pattern(self.witnesses["irreducible"]) != (n,):
                return False
            tp = pattern(self.witnesses["transposition"])
            if tp is None or not _is_transposition_power(tp):
                return False
            pp = self.witnesses.get("primitive")
            if pp is None:
                return is_prime(n)
            pt = pattern(pp)
            return pt is not None and _certifies_primitive(pt, n)
        return True


def _is_transposition_power(ct) -> bool:
    return ct.count(2) == 1 and all(c % 2 == 1 for c in ct if c != 2)


def _certifies_primitive(ct, n: int) -> bool:
    if tuple(ct) == (n - 1, 1):
        return True
    return any(is_prime(c) and 2 * c > n and c < n for c in ct)


def group_certificate(g: UniPoly, budget: int = DEFAULT_CERT_BUDGET, seed: int = 0) -> GroupCertificate:
    """Certify S_n (or C_2) from Frobenius cycle types at sampled good primes."""
    n = g.degree
    disc = discriminant(g)
    bad = g.lc * disc
    counts: dict = {}
    irr = prim = transp = None
    sampled = 0
    p = 1
    while sampled < budget:
        p += 1
        if not is_prime(p) or bad % p == 0:
            continue
        sampled += 1
        ct = tuple(factor_mod_p(g, p, seed).degrees())
        counts[ct] = counts.get(ct, 0) + 1
        if irr is None and ct == (n,):
            irr = p
        if prim is None and not is_prime(n) and _certifies_primitive(ct, n):
            prim = p
        if transp is None and _is_transposition_power(ct):
            transp = p
        if n == 2 and irr:
            return GroupCertificate("ProvenC2", 2, {"irreducible": irr}, counts, sampled)
        if n > 2 and irr and transp and (prim or is_prime(n)):
            wit = {"irreducible": irr, "transposition": transp}
            if prim:
                wit["primitive"] = prim
            return GroupCertificate("ProvenSn", n, wit, counts, sampled)
    if irr is None:
        return GroupCertificate("Inconclusive", n, {}, counts, sampled)
    return GroupCertificate("CycleTypeFingerprint", n, {"irreducible": irr}, counts, sampled)


def panel_fingerprint(g: UniPoly, panel=tuple(primes_up_to(60))) -> tuple:
    """Cycle types on a fixed prime panel; 'R' marks a ramified or bad reduction."""
    out = []
    for p in panel:
        ct = frobenius_cycle_type(g, p)
        out.append("R" if ct == RAMIFIED_FLAG else "".join(map(str, ct)))
    return tuple(out)


@dataclass(frozen=True)
class ReducedDiscriminant:
    delta: int
    sources: dict  # prime -> source tag
    undetermined: tuple = ()
    contradictions: tuple = ()


def s0_part(v: int, s0) -> int:
    d = 1
    v = abs(v)
    for p in s0:
        while v % p == 0:
            v //= p
            d *= p
    return d


def reduced_discriminant(
    fam: Family,
    bd: BranchData,
    s0,
    a: int,
    b: int,
    s0_status: dict | None = None,
    audited: bool = True,
    g: UniPoly | None = None,
    value_factors: dict | None = None,
) -> ReducedDiscriminant:
    """delta = N' * |F(a, b)| / D with D the S_0-part of F(a, b).

    Primes outside S_0 come from the inertia theorem (strict divisibility
    of the F-value).  S_0-primes come from ``s0_status`` (frozen at a
    basepoint) or from the oracle.
    """
    v = evaluate(bd.form, a, b)
    if v == 0:
        raise ValueError("specialization at branch point")
    D = s0_part(v, s0)
    rest = abs(v) // D
    if value_factors is None:
        verdict = squarefree_integer(rest)
        if not verdict.squarefree:
            raise ValueError("run squarefree_scan first")
        value_factors = verdict.factors
        if value_factors is None:
            value_factors = factorize(rest)
            if value_factors is None:
                raise ArithmeticError("F-value could not be factored for the audit")
    if g is None:
        g = specialize_at(fam, a, b, bd)
    sources: dict[int, str] = {}
    undetermined, contradictions = [], []
    for p in s0:
        if s0_status is not None and p in s0_status:
            st = s0_status[p]
            tag = "krasner"
        else:
            st = ramification_oracle(g, p)
            tag = "oracle"
        if st == Ram.RAMIFIED:
            sources[p] = tag
        elif st == Ram.UNDETERMINED:
            undetermined.append(p)
    delta = rest * math.prod(p for p in sources)
    for p in value_factors:
        if not audited:
            sources[p] = "sit"
            continue
        st = ramification_oracle(g, p)
        if st == Ram.RAMIFIED:
            sources[p] = "oracle-confirmed"
        elif st == Ram.UNDETERMINED:
            sources[p] = "oracle-undetermined"
        else:
            sources[p] = "oracle-contradicted"
            contradictions.append(p)
    return ReducedDiscriminant(
        delta, dict(sorted(sources.items())), tuple(undetermined), tuple(contradictions)
    )


def factor_with_hints(n: int, hints=()) -> dict | None:
    """Factor |n|, stripping hint primes first and using rho for the rest."""
    n = abs(n)
    out: dict[int, int] = {}
    for p in sorted(set(hints)):
        if p > 1 and n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        rest = factorize(n)
        if rest is None:
            return None
        for p, e in rest.items():
            out[p] = out.get(p, 0) + e
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class IndependentDelta:
    delta: int | None
    ramified: tuple
    undetermined: tuple
    disc_valuations: dict  # ramified prime -> v_p(field disc) or None
    disc_sign: int


def independent_delta(g: UniPoly, hints=()) -> IndependentDelta:
    """Reduced discriminant from disc(g) alone: every prime of disc(g) goes to the oracle."""
    dg = discriminant(g)
    fac = factor_with_hints(dg, hints)
    if fac is None:
        return IndependentDelta(None, (), (), {}, 1 if dg > 0 else -1)
    ram, und, vals = [], [], {}
    for p in fac:
        st = ramification_oracle(g, p)
        if st == Ram.RAMIFIED:
            ram.append(p)
            vals[p] = disc_valuation(g, p, dg)
        elif st == Ram.UNDETERMINED:
            und.append(p)
    delta = math.prod(ram) if not und else None
    return IndependentDelta(delta, tuple(ram), tuple(und), vals, 1 if dg > 0 else -1)
