import pytest
import yaml

from galspec.catalog import (
    ConfigError,
    family_from_dict,
    family_to_dict,
    load_catalog,
    parse_family,
    parse_poly,
    resolve,
)
from galspec.exactalg import BiPoly
from galspec.specialize import branch_form


def test_parse_poly():
    assert parse_poly("X^5 + T*X + T") == BiPoly.from_triples([(5, 0, 1), (1, 1, 1), (0, 1, 1)])
    assert parse_poly("X^5 - T*(5X - 4)") == BiPoly.from_triples([(5, 0, 1), (1, 1, -5), (0, 1, 4)])
    assert parse_poly("-(T^3 - T) + X**2") == BiPoly.from_triples([(2, 0, 1), (0, 3, -1), (0, 1, 1)])


@pytest.mark.parametrize(
    "text, msg",
    [
        ("X^2 + 1.5", "malformed number"),
        ("X^2 + Z", "unknown variable"),
        ("X^(-1)", "non-negative"),
        ("X^2 +", "malformed polynomial"),
        ("X / 2", "unsupported"),
        ("", "non-empty"),
    ],
)
def test_parse_poly_errors(text, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_poly(text)


def test_catalog_entries_all_analyze():
    cat = load_catalog()
    assert {"trinomial-3", "trinomial-5", "belyi-sn-5", "c2-cubic", "a5-quintic", "chebyshev-3"} <= set(cat)
    for e in cat.values():
        branch_form(e.family)
        assert e.provenance
    assert str(cat["trinomial-5"].family.f) == str(parse_poly("X^5 + T*X + T"))


def test_family_errors(tmp_path):
    with pytest.raises(ConfigError, match="inseparable"):
        family_from_dict({"name": "sq", "f": "(X - T)^2", "infinity_branch": "yes"})
    with pytest.raises(ConfigError, match="infinity_branch"):
        family_from_dict({"name": "odd", "f": "X^3 + T^2*X + T"})
    with pytest.raises(ConfigError, match="content"):
        family_from_dict({"name": "c", "f": "2*X^2 - 2*T", "infinity_branch": "yes"})
    with pytest.raises(ConfigError, match="unknown keys"):
        family_from_dict({"f": "X^2 - T", "colour": "red"})
    with pytest.raises(ConfigError, match="malformed number"):
        family_from_dict({"f": "X^2 - T", "group_order": "two"})
    p = tmp_path / "bad.yaml"
    p.write_text("f: [unclosed\n")
    with pytest.raises(ConfigError, match="YAML"):
        parse_family(p)


def test_coefficient_triples(tmp_path):
    p = tmp_path / "tri.yaml"
    p.write_text(yaml.safe_dump({"name": "tri", "coefficients": [[3, 0, 1], [1, 1, 1], [0, 1, 1]],
                                 "infinity_branch": "yes"}))
    fam = parse_family(p)
    assert fam.f == parse_poly("X^3 + T*X + T") and fam.name == "tri"
    with pytest.raises(ConfigError, match="triple"):
        family_from_dict({"coefficients": [[1, 2]]})
    with pytest.raises(ConfigError, match="exactly one"):
        family_from_dict({"f": "X^2 - T", "coefficients": [[2, 0, 1]]})


def test_yaml_booleans_for_infinity(tmp_path):
    p = tmp_path / "c2.yaml"
    p.write_text("name: c2\nf: X^2 - (T^3 - T)\ninfinity_branch: yes\ngroup: C2\ngroup_order: 2\n")
    assert parse_family(p).infinity_branch == "yes"


def test_round_trip_through_dict():
    for e in load_catalog().values():
        again = family_from_dict(family_to_dict(e.family)).family
        assert again.f == e.family.f
        assert family_to_dict(again) == family_to_dict(e.family)


def test_resolve():
    assert resolve("c2-cubic").name == "c2-cubic"
    with pytest.raises(ConfigError, match="unknown family"):
        resolve("no-such-family")
