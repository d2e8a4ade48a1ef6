import pytest

from pairing_miller.catalog import (
    ParseError,
    builtin_catalog,
    get_entry,
    load_entry,
    parse_entry,
    serialize_entry,
    validate_params,
)
from pairing_miller.field import is_irreducible


def test_builtin_entries():
    names = [e.name for e in builtin_catalog()]
    assert names == ["toy-11", "toy-19", "bn254", "k9", "k18"]
    bn = get_entry("bn254")
    assert bn.k == 12 and bn.p.bit_length() == 254
    assert bn.p + 1 - bn.trace == bn.r
    assert get_entry("toy-11").p + 1 - get_entry("toy-11").trace == 12
    k9 = get_entry("k9")
    assert len(k9.modulus) == 10 and is_irreducible(list(k9.modulus), k9.p)
    with pytest.raises(KeyError):
        get_entry("nope")


@pytest.mark.parametrize("name", ["toy-11", "toy-19", "bn254"])
def test_verified_curves(name):
    rep = validate_params(get_entry(name))
    assert rep.failures == [] and rep.status == "verified"
    assert rep.outcome("order_r_point") == "pass"


def test_bn_cofactor_one():
    rep = validate_params(get_entry("bn254"))
    detail = [c["detail"] for c in rep.checks if c["check"] == "order_r_point"][0]
    assert detail == "cofactor 1"


def test_even_r_fails():
    text = serialize_entry(get_entry("toy-11")).replace("r = 3", "r = 4")
    rep = validate_params(parse_entry(text))
    assert "r_prime" in rep.failures and rep.status == "benchmark-only"


def test_k9_k18_reports():
    for name in ("k9", "k18"):
        a = validate_params(get_entry(name)).as_dict()
        assert a == validate_params(get_entry(name)).as_dict()
        assert a["status"] == "benchmark-only"
    assert "r_prime" in validate_params(get_entry("k9")).failures
    assert validate_params(get_entry("k18")).failures == []


@pytest.mark.parametrize("entry", builtin_catalog(), ids=lambda e: e.name)
def test_round_trip(entry):
    assert parse_entry(serialize_entry(entry)) == entry


def test_parse_errors():
    text = serialize_entry(get_entry("toy-19"))
    missing = "\n".join(l for l in text.splitlines() if not l.startswith("r ="))
    with pytest.raises(ParseError) as exc:
        parse_entry(missing)
    assert exc.value.key == "r"
    with pytest.raises(ParseError) as exc:
        parse_entry(text.replace("p = 19", "p = 0x13"))
    assert exc.value.line == 2 and exc.value.key == "p"
    with pytest.raises(ParseError):
        parse_entry(text + "p = 19\n")
    with pytest.raises(ParseError):
        parse_entry(text + "colour = blue\n")


def test_comments_and_files(tmp_path):
    text = "# a comment\n\n" + serialize_entry(get_entry("toy-11"))
    path = tmp_path / "c.curve"
    path.write_text(text)
    assert load_entry(str(path)) == get_entry("toy-11")
    assert load_entry("toy-11") == get_entry("toy-11")
