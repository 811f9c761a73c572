"""Family configs: polynomial parsing, YAML loading and the bundled catalog."""
from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import yaml

from .exactalg import BiPoly
from .specialize import Family, branch_form

_IMPLICIT = re.compile(r"(\d)\s*(?=[A-Za-z(])")


class ConfigError(ValueError):
    pass


def parse_poly(text: str, vars=("X", "T")) -> BiPoly:
    """Integer polynomial in two named variables, e.g. "X^5 + T*X + T"."""
    if not isinstance(text, str) or not text.strip():
        raise ConfigError("polynomial must be a non-empty string")
    src = _IMPLICIT.sub(r"\1*", text.replace("^", "**"))
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"malformed polynomial {text!r}") from exc
    one = BiPoly({(0, 0): 1}, vars)
    gens = {vars[0]: BiPoly({(1, 0): 1}, vars), vars[1]: BiPoly({(0, 1): 1}, vars)}

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise ConfigError(f"malformed number {node.value!r} in {text!r}")
            return one * node.value
        if isinstance(node, ast.Name):
            if node.id not in gens:
                raise ConfigError(f"unknown variable {node.id!r}; expected {vars[0]} or {vars[1]}")
            return gens[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                e = node.right
                if not (isinstance(e, ast.Constant) and type(e.value) is int and e.value >= 0):
                    raise ConfigError(f"exponents must be non-negative integers in {text!r}")
                base, acc = ev(node.left), one
                for _ in range(e.value):
                    acc = acc * base
                return acc
            l, r = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return l + r
            if isinstance(node.op, ast.Sub):
                return l - r
            if isinstance(node.op, ast.Mult):
                return l * r
        raise ConfigError(f"unsupported syntax in {text!r}")

    return ev(tree)


def _int(v, what):
    if isinstance(v, bool) or not isinstance(v, int):
        if isinstance(v, str) and re.fullmatch(r"[+-]?\d+", v.strip()):
            return int(v)
        raise ConfigError(f"malformed number for {what}: {v!r}")
    return v


def _int_list(v, what):
    if v is None:
        return None
    if not isinstance(v, (list, tuple)):
        raise ConfigError(f"{what} must be a list of integers")
    return tuple(_int(x, what) for x in v)


@dataclass(frozen=True)
class CatalogEntry:
    family: Family
    provenance: str = ""
    expected_coverage: tuple = field(default=(), compare=False)
    source: str = ""

    @property
    def name(self) -> str:
        return self.family.name


_KNOWN = {
    "name", "f", "infinity_branch", "group", "group_order", "inertia_indices",
    "s0_override", "s0_extra", "unconditional", "perfect", "provenance", "expected_coverage",
    "coefficients",
}


def _from_triples(triples, source) -> BiPoly:
    if not isinstance(triples, (list, tuple)) or not triples:
        raise ConfigError(f"{source}: coefficients must be a non-empty list of [i, j, c] triples")
    out = []
    for t in triples:
        if not isinstance(t, (list, tuple)) or len(t) != 3:
            raise ConfigError(f"{source}: coefficient entry {t!r} is not an [i, j, c] triple")
        i, j, c = (_int(x, "coefficients") for x in t)
        if i < 0 or j < 0:
            raise ConfigError(f"{source}: negative exponent in {t!r}")
        out.append((i, j, c))
    return BiPoly.from_triples(out)


def family_from_dict(d: dict, source: str = "<dict>") -> CatalogEntry:
    if not isinstance(d, dict):
        raise ConfigError(f"{source}: config must be a mapping")
    unknown = set(d) - _KNOWN
    if unknown:
        raise ConfigError(f"{source}: unknown keys {sorted(unknown)}")
    if ("f" in d) == ("coefficients" in d):
        raise ConfigError(f"{source}: give the polynomial as exactly one of f or coefficients")
    f = parse_poly(d["f"]) if "f" in d else _from_triples(d["coefficients"], source)
    inf = d.get("infinity_branch", "auto")
    # YAML 1.1 reads bare yes/no as booleans
    if isinstance(inf, bool):
        inf = "yes" if inf else "no"
    order = d.get("group_order")
    try:
        fam = Family(
            name=str(d.get("name") or Path(source).stem),
            f=f,
            infinity_branch=str(inf),
            group=d.get("group"),
            group_order=_int(order, "group_order") if order is not None else None,
            inertia_indices=_int_list(d.get("inertia_indices"), "inertia_indices"),
            s0_override=_int_list(d.get("s0_override"), "s0_override"),
            s0_extra=_int_list(d.get("s0_extra"), "s0_extra") or (),
            unconditional=bool(d.get("unconditional", False)),
            perfect=bool(d.get("perfect", False)),
        )
        branch_form(fam)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    cov = []
    for c in d.get("expected_coverage") or ():
        cov.append({"prime": _int(c["prime"], "expected_coverage.prime"),
                    "include_zero": bool(c.get("include_zero", False))})
    return CatalogEntry(fam, str(d.get("provenance", "")).strip(), tuple(cov), source)


def parse_family(path) -> Family:
    return load_entry(path).family


def load_entry(path) -> CatalogEntry:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML ({exc})") from exc
    return family_from_dict(data, str(path))


def load_catalog() -> dict[str, CatalogEntry]:
    out = {}
    for item in sorted(resources.files("galspec").joinpath("families").iterdir(), key=lambda p: p.name):
        if item.name.endswith(".yaml"):
            entry = family_from_dict(yaml.safe_load(item.read_text()), item.name)
            out[entry.name] = entry
    return out


def resolve(name_or_path: str) -> CatalogEntry:
    """A catalog name, or a path to a YAML config."""
    cat = load_catalog()
    if name_or_path in cat:
        return cat[name_or_path]
    if Path(name_or_path).is_file():
        return load_entry(name_or_path)
    raise ConfigError(f"unknown family {name_or_path!r}; see the catalog subcommand")


def family_to_dict(fam: Family) -> dict:
    """Enough to rebuild the family; stored with every result line."""
    return {
        "name": fam.name,
        "f": str(fam.f),
        "infinity_branch": fam.infinity_branch,
        "group": fam.group,
        "group_order": fam.group_order,
        "inertia_indices": list(fam.inertia_indices) if fam.inertia_indices else None,
        "s0_override": list(fam.s0_override) if fam.s0_override else None,
        "s0_extra": list(fam.s0_extra),
        "unconditional": fam.unconditional,
        "perfect": fam.perfect,
    }
