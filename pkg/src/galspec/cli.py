"""galspec command line.

Every run writes three files to --out: results.jsonl (one JSON object per
line, sorted keys), summary.tsv and manifest.json.  Exit codes: 0 success,
2 failed precondition, 3 budget exhausted with misses.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .binforms import fixed_prime_divisors
from .catalog import ConfigError, family_from_dict, family_to_dict, load_catalog, parse_poly, resolve
from .exactalg import BiPoly, UniPoly, poly_gcd, squarefree_kernel
from .pipeline import (
    DEFAULT_BUDGET,
    FrobeniusConstraint,
    ResidueConstraint,
    TargetSpec,
    density_report,
    nonreduced_survey,
    prepare,
    run_survey,
    run_target,
    sample_records,
    verify_record,
)
from .specialize import Family, branch_form

log = logging.getLogger("galspec")

EXIT_OK, EXIT_PRECONDITION, EXIT_MISSES = 0, 2, 3
MISS_WORDING = "no witness within budget"


class Precondition(Exception):
    pass


class Run:
    """Collects result lines and summary rows, then writes the three artifacts."""

    def __init__(self, command: str, args, config: dict):
        self.command = command
        self.args = args
        self.config = config
        self.lines: list[dict] = []
        self.rows: list[dict] = []
        self.t0 = time.perf_counter()
        self.status = "ok"
        self.error = None

    def add(self, line: dict):
        self.lines.append(line)

    def row(self, **kw):
        self.rows.append(kw)

    def config_hash(self) -> str:
        # argv carries --out and --threads, which do not change the results
        cfg = {k: v for k, v in self.config.items() if k != "argv"}
        blob = json.dumps(cfg, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()

    def tsv(self) -> str:
        if not self.rows:
            return ""
        cols = list(self.rows[0])
        for r in self.rows[1:]:
            cols += [c for c in r if c not in cols]
        buf = io.StringIO()
        w = csv.DictWriter(buf, cols, delimiter="\t", lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in self.rows:
            w.writerow({k: _cell(v) for k, v in r.items()})
        return buf.getvalue()

    def write(self):
        out = Path(self.args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "results.jsonl", "w") as fh:
            for line in self.lines:
                fh.write(json.dumps(line, sort_keys=True) + "\n")
        (out / "summary.tsv").write_text(self.tsv())
        manifest = {
            "command": self.command,
            "argv": self.config.get("argv"),
            "config_hash": self.config_hash(),
            "seed": self.args.seed,
            "budgets": {"candidates": getattr(self.args, "budget", None)},
            "version": __version__,
            "timing": {"wall_seconds": round(time.perf_counter() - self.t0, 3)},
            "status": self.status,
            "error": self.error,
            "results": len(self.lines),
        }
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _cell(v):
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v, sort_keys=True)
    return "" if v is None else v


# --- argument helpers ------------------------------------------------------


def _residue(text: str):
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError("residue constraints look like p:k or p:k:e")
    try:
        p, k = int(parts[0]), int(parts[1])
        e = int(parts[2]) if len(parts) == 3 else 1
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed number in {text!r}")
    return p, k, e


def _frobenius(text: str):
    try:
        q, ct = text.split(":")
        return int(q), tuple(sorted((int(x) for x in ct.split(",")), reverse=True))
    except ValueError:
        raise argparse.ArgumentTypeError("Frobenius constraints look like q:3,1,1")


def _grid(text: str):
    try:
        return tuple(int(float(x)) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("grid is a comma-separated list of bounds")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for every random choice")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", default="results", help="output directory")
    common.add_argument("--use-override", action="store_true", help="use the catalog S_0 override")
    common.add_argument("--extra-prime", type=int, action="append", default=[], help="add a prime to S_0")
    common.add_argument("-v", "--verbose", action="store_true")

    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="candidates per target")

    ap = argparse.ArgumentParser(prog="galspec", description="Specializations of Galois covers with prescribed discriminants.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--verify", metavar="FILE", help="re-validate a results.jsonl from (a, b) alone")
    sub = ap.add_subparsers(dest="command")

    sub.add_parser("catalog", parents=[common], help="list catalog families")

    p = sub.add_parser("analyze", parents=[common], help="branch data, ramification form, fixed divisors, S_0")
    p.add_argument("family", help="catalog name or YAML path")

    p = sub.add_parser("target", parents=[common, budget], help="search for records meeting constraints")
    p.add_argument("family")
    p.add_argument("--residue", type=_residue, action="append", default=[], metavar="P:K[:E]")
    p.add_argument("--zero", type=int, action="append", default=[], metavar="P", help="require p || F(a,b)")
    p.add_argument("--frobenius", type=_frobenius, action="append", default=[], metavar="Q:CYCLES")
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--max-hits", type=int, default=1)
    p.add_argument("--no-certificate", action="store_true", help="accept records without a proven group")

    p = sub.add_parser("survey", parents=[common, budget], help="coverage of every class mod p")
    p.add_argument("family")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--include-zero", action="store_true")

    p = sub.add_parser("twist", parents=[common, budget], help="quadratic twist d of Y^2 = f(X) with delta in a class")
    p.add_argument("--poly", required=True, help="squarefree f in X, e.g. X^3-X")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--residue", type=int, required=True)

    p = sub.add_parser("density", parents=[common, budget], help="distinct extensions below discriminant bounds")
    p.add_argument("family")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--grid", type=_grid, default=(10**8, 10**10, 10**12, 10**14, 10**16))

    p = sub.add_parser("nonreduced-survey", parents=[common, budget], help="field discriminants mod A against e-th powers")
    p.add_argument("family")
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--e", type=int, default=None)
    return ap


# --- commands --------------------------------------------------------------


def _record_line(rec, fam: Family, args, **extra) -> dict:
    line = rec.to_json()
    line["family_spec"] = family_to_dict(fam)
    line["s0_override_used"] = bool(args.use_override)
    line["extra_primes"] = sorted(args.extra_prime)
    line.update(extra)
    return line


def _prepared(fam, args):
    try:
        return prepare(fam, tuple(args.extra_prime), args.use_override)
    except (ValueError, RuntimeError) as exc:
        raise Precondition(str(exc)) from exc


def cmd_catalog(run: Run, args) -> int:
    for name, e in load_catalog().items():
        fam = e.family
        run.row(name=name, degree=fam.degree, group=fam.group, group_order=fam.group_order,
                infinity=fam.infinity_branch, f=str(fam.f), provenance=e.provenance)
        run.add({"name": name, "family_spec": family_to_dict(fam), "provenance": e.provenance,
                 "expected_coverage": list(e.expected_coverage)})
    return EXIT_OK


def cmd_analyze(run: Run, args, entry) -> int:
    fam = entry.family
    pf = _prepared(fam, args)
    bd0 = branch_form(fam)
    rep = pf.fixed
    line = {
        "family": fam.name,
        "f": str(fam.f),
        "disc": str(bd0.disc),
        "radical": str(bd0.radical),
        "infinity_branch": bd0.infinity,
        "r": bd0.r,
        "F": str(bd0.form),
        "F_coeffs": list(bd0.form.coeffs),
        "fixed_primes": list(rep.fixed_primes),
        "fixed_squares": list(rep.fixed_squares),
        "fixed_certificates": {str(p): (list(w) if w else None) for p, w in rep.certificates.items()},
        "N0": pf.N0,
        "working_F": str(pf.form),
        "working_F_coeffs": list(pf.form.coeffs),
        "working_fixed_primes": list(fixed_prime_divisors(pf.form).fixed_primes),
        "working_family": str(pf.family.f),
        "transform_steps": [list(s) for s in pf.transform.steps] if pf.transform else [],
        "S0": {str(p): list(t) for p, t in pf.s0.items()},
        "provenance": entry.provenance,
    }
    run.add(line)
    run.row(key="F", value=line["F"])
    run.row(key="fixed_primes", value=line["fixed_primes"])
    run.row(key="N0", value=pf.N0)
    run.row(key="working_F", value=line["working_F"])
    for p, tags in pf.s0.items():
        run.row(key=f"S0[{p}]", value=", ".join(tags))
    return EXIT_OK


def _spec_from_args(args):
    res = [ResidueConstraint(p, e, k) for p, k, e in args.residue]
    res += [ResidueConstraint(p, 1, 0, zero=True) for p in args.zero]
    frob = [FrobeniusConstraint(q, ct) for q, ct in args.frobenius]
    return TargetSpec(tuple(res), tuple(frob), args.sign, args.budget, args.max_hits,
                      not args.no_certificate, args.seed)


def cmd_target(run: Run, args, entry) -> int:
    pf = _prepared(entry.family, args)
    try:
        spec = _spec_from_args(args)
        res = run_target(pf, spec)
    except ValueError as exc:
        raise Precondition(str(exc)) from exc
    for rec in res.records:
        run.add(_record_line(rec, entry.family, args))
    run.row(found=len(res.records), tried=res.stats.tried, squarefree=res.stats.squarefree,
            basepoints=len(res.basepoints), outcome="found" if res.found else MISS_WORDING)
    return EXIT_OK if res.found else EXIT_MISSES


def cmd_survey(run: Run, args, entry) -> int:
    pf = _prepared(entry.family, args)
    if args.prime in pf.s0:
        raise Precondition(f"prime {args.prime} lies in S_0")
    try:
        cov = run_survey(pf, args.prime, args.include_zero, args.budget, args.seed, args.threads)
    except ValueError as exc:
        raise Precondition(str(exc)) from exc
    misses = 0
    for k, res in cov.items():
        rec = res.records[0] if res.records else None
        if rec is not None:
            run.add(_record_line(rec, entry.family, args, survey={"p": args.prime, "k": k}))
        else:
            misses += 1
        run.row(k=k, found=int(rec is not None),
                t0=rec.to_json()["t0"] if rec else None,
                delta=rec.delta if rec else None,
                delta_mod_p=rec.delta % args.prime if rec else None,
                certificate=rec.certificate.kind if rec else None,
                tried=res.stats.tried,
                outcome="found" if rec else MISS_WORDING)
    return EXIT_MISSES if misses else EXIT_OK


def twist_family(poly: str) -> Family:
    """X^2 - f(T) for a squarefree f given in X."""
    g = parse_poly(poly)
    if any(j for (_, j) in g.terms):
        raise ConfigError("twist polynomial must be in X only")
    f = UniPoly(tuple(g.terms.get((i, 0), 0) for i in range(g.degree(0) + 1)), "T")
    if f.degree < 1:
        raise ConfigError("twist polynomial must be non-constant")
    if poly_gcd(f, f.derivative()).degree > 0:
        raise ConfigError("twist polynomial must be squarefree")
    terms = {(2, 0): 1}
    for i, c in enumerate(f.coeffs):
        if c:
            terms[(0, i)] = -c
    fam = BiPoly(terms, ("X", "T"))
    if fam.content() != 1:
        raise ConfigError("twist polynomial must have content 1")
    return Family(f"twist:{poly}", fam, "yes" if f.degree % 2 else "no", group="C2", group_order=2,
                  inertia_indices=(1,))


def _is_rational_square(q: Fraction) -> bool:
    if q <= 0:
        return False
    return all(math.isqrt(x) ** 2 == x for x in (q.numerator, q.denominator))


def cmd_twist(run: Run, args) -> int:
    try:
        fam = twist_family(args.poly)
    except ValueError as exc:
        raise Precondition(str(exc)) from exc
    pf = _prepared(fam, args)
    p, k = args.prime, args.residue % args.prime
    if k == 0:
        raise Precondition("the twist mode targets nonzero classes")
    try:
        spec = TargetSpec((ResidueConstraint(p, 1, k),), budget=args.budget, seed=args.seed)
        res = run_target(pf, spec)
    except ValueError as exc:
        raise Precondition(str(exc)) from exc
    if not res.records:
        run.row(prime=p, residue=k, outcome=MISS_WORDING, tried=res.stats.tried)
        return EXIT_MISSES
    rec = res.records[0]
    c0, _, c2 = rec.g.coeffs
    d = squarefree_kernel(-c0 * c2)
    t0 = Fraction(rec.a, rec.b * pf.N0)
    ft0 = sum(Fraction(-c) * t0**j for (i, j), c in fam.f.terms.items() if i == 0)
    ok = _is_rational_square(ft0 / d)
    run.add(_record_line(rec, fam, args, twist={"poly": args.poly, "d": d, "t0": str(t0),
                                               "f_t0": str(ft0), "square_check": ok}))
    run.row(prime=p, residue=k, d=d, t0=str(t0), f_t0=str(ft0), delta=rec.delta,
            delta_mod_p=rec.delta % p, square_check=ok, certificate=rec.certificate.kind, outcome="found")
    if not ok:
        raise Precondition("f(t0)/d is not a rational square")
    return EXIT_OK


def cmd_density(run: Run, args, entry) -> int:
    pf = _prepared(entry.family, args)
    try:
        recs, stats = sample_records(pf, args.count, args.budget, args.seed)
    except RuntimeError as exc:
        raise Precondition(str(exc)) from exc
    for rec in recs:
        run.add(_record_line(rec, entry.family, args))
    rep = density_report(recs, args.grid)
    for B, c in zip(rep.grid, rep.counts):
        run.row(bound=B, distinct=c)
    run.row(bound="slope", distinct=rep.slope if rep.usable else "unusable")
    return EXIT_OK


def cmd_nonreduced(run: Run, args, entry) -> int:
    pf = _prepared(entry.family, args)
    try:
        rep = nonreduced_survey(pf, args.modulus, args.count, args.budget, args.e, args.seed)
    except (ValueError, RuntimeError) as exc:
        raise Precondition(str(exc)) from exc
    line = {"A": rep.A, "e": rep.e, "e_source": rep.e_source, "observed": list(rep.observed),
            "subgroup": list(rep.subgroup), "cosets_hit": [list(c) for c in rep.cosets_hit],
            "closed": rep.closed, "records_used": rep.records_used, "family": entry.name}
    run.add(line)
    run.row(A=rep.A, e=rep.e, e_source=rep.e_source, observed=len(rep.observed),
            subgroup=len(rep.subgroup), cosets=len(rep.cosets_hit), closed=rep.closed,
            records_used=rep.records_used)
    return EXIT_OK


def verify_file(path: str) -> tuple[int, list[str]]:
    """(number of record lines checked, failure messages)."""
    failures, checked = [], 0
    for i, raw in enumerate(Path(path).read_text().splitlines(), 1):
        if not raw.strip():
            continue
        rec = json.loads(raw)
        if "family_spec" not in rec or "a" not in rec:
            continue
        checked += 1
        fam = family_from_dict(rec["family_spec"], f"line {i}").family
        errs = verify_record(fam, rec, rec.get("s0_override_used", False), tuple(rec.get("extra_primes", ())))
        failures += [f"line {i}: {e}" for e in errs]
    return checked, failures


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.verify:
        try:
            checked, failures = verify_file(args.verify)
        except (OSError, ValueError) as exc:
            print(f"verify: {exc}", file=sys.stderr)
            return EXIT_PRECONDITION
        for f in failures:
            print(f"FAIL {f}")
        print(f"verified {checked} records, {len(failures)} failures")
        return EXIT_PRECONDITION if failures else EXIT_OK
    if not args.command:
        ap.print_help()
        return EXIT_PRECONDITION
    cfg = {k: v for k, v in vars(args).items() if k not in ("out", "threads", "verbose", "verify")}
    cfg["argv"] = list(argv) if argv is not None else sys.argv[1:]
    run = Run(args.command, args, cfg)
    code = EXIT_PRECONDITION
    try:
        entry = None
        if hasattr(args, "family"):
            entry = resolve(args.family)
            cfg["family_spec"] = family_to_dict(entry.family)
        handler = {
            "catalog": lambda: cmd_catalog(run, args),
            "analyze": lambda: cmd_analyze(run, args, entry),
            "target": lambda: cmd_target(run, args, entry),
            "survey": lambda: cmd_survey(run, args, entry),
            "twist": lambda: cmd_twist(run, args),
            "density": lambda: cmd_density(run, args, entry),
            "nonreduced-survey": lambda: cmd_nonreduced(run, args, entry),
        }[args.command]
        code = handler()
        run.status = {EXIT_OK: "ok", EXIT_MISSES: "misses"}.get(code, "failed")
    except (Precondition, ConfigError) as exc:
        run.status, run.error = "failed", str(exc)
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_PRECONDITION
    finally:
        run.write()
    sys.stdout.write(run.tsv())
    if code == EXIT_MISSES:
        print(f"# some targets: {MISS_WORDING}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
