"""Curve parameter registry, a small text format for it, and validation.

Curve files are plain ``key = value`` lines::

    # BN curve, embedding degree 12
    name = bn254
    p = 16030569...
    a = 0
    b = 5
    k = 12
    modulus = 5, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1
    rho = 1
    trace = 12681...

``modulus`` lists coefficients constant term first.  ``trace``,
``p_bits`` and ``note`` are optional; everything numeric is decimal.
"""
import random
from dataclasses import dataclass, field, fields
from fractions import Fraction

from sympy import isprime

from .curve import Curve, random_point, scalar_mul
from .field import PrimeField, is_irreducible


class ParseError(ValueError):
    def __init__(self, message, line=None, key=None):
        where = "" if line is None else "line %d: " % line
        super().__init__(where + message)
        self.line = line
        self.key = key


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    p: int
    r: int
    a: int
    b: int
    k: int
    modulus: tuple
    rho: Fraction
    trace: int = None
    p_bits: int = None
    note: str = ""

    @property
    def hamming_r(self):
        return bin(self.r).count("1")


def _cat(*parts):
    return int("".join(parts))


# digits as typeset, concatenated across line breaks
_BN_P = _cat("160305690344031282777566882874986495156", "36838101184337499778392980116222246913")
_BN_R = _cat("160305690344031282777566882874986495155", "10226217719936227669524443298095169537")
_K9_P = _cat("3061451105959572350992904218241517192718", "315802710560373001011629795786952195361",
             "19724392170588602764112177")
_K9_R = _cat("1758592360244376049423345540022962797459", "272736402347141193268746504567484534417")
_K18_P = _cat("58709285320900073406925617811693805623", "56430404913482030243997510873476960788",
              "5279673307215755454161141")
_K18_R = _cat("10786994225696144150491191871486839136", "9781354128945134119237266728176832001")


def builtin_catalog():
    return [
        CatalogEntry("toy-11", 11, 3, 1, 0, 2, (1, 0, 1), Fraction(2), 0,
                     note="supersingular y^2 = x^3 + x, #E = 12, found by enumeration"),
        CatalogEntry("toy-19", 19, 5, 1, 0, 2, (1, 0, 1), Fraction(5, 3), 0,
                     note="supersingular y^2 = x^3 + x, #E = 20, found by enumeration"),
        CatalogEntry("bn254", _BN_P, _BN_R, 0, 5, 12, (5,) + (0,) * 11 + (1,), Fraction(1),
                     _BN_P + 1 - _BN_R, 254, note="BN curve, rho = 1 so t = p + 1 - r"),
        CatalogEntry("k9", _K9_P, _K9_R, 0, 1, 9, (1, 1) + (0,) * 7 + (1,), Fraction(4, 3),
                     None, 348, note="k = 9 benchmark curve; trace not published"),
        CatalogEntry("k18", _K18_P, _K18_R, 0, 19, 18, (3, 1) + (0,) * 16 + (1,), Fraction(4, 3),
                     None, 335, note="k = 18 benchmark curve; trace not published"),
    ]


def get_entry(name):
    for entry in builtin_catalog():
        if entry.name == name:
            return entry
    known = ", ".join(e.name for e in builtin_catalog())
    raise KeyError("unknown curve %r (builtin: %s)" % (name, known))


# text format

_REQUIRED = ("name", "p", "r", "a", "b", "k", "modulus", "rho")
_INTS = ("p", "r", "a", "b", "k", "trace", "p_bits")


def _int(text, lineno, key):
    body = text[1:] if text[:1] == "-" else text
    if not body.isdigit() or not body.isascii():
        raise ParseError("%s must be a decimal integer, got %r" % (key, text), lineno, key)
    return int(text)


def parse_entry(text):
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ParseError("expected 'key = value', got %r" % raw, lineno)
        if key in values:
            raise ParseError("duplicate key %r" % key, lineno, key)
        if key in _INTS:
            values[key] = _int(value, lineno, key)
        elif key == "modulus":
            values[key] = tuple(_int(c.strip(), lineno, key) for c in value.split(","))
        elif key == "rho":
            num, _, den = value.partition("/")
            values[key] = Fraction(_int(num.strip(), lineno, key), _int(den.strip() or "1", lineno, key))
        elif key in ("name", "note"):
            values[key] = value
        else:
            raise ParseError("unknown key %r" % key, lineno, key)
    for key in _REQUIRED:
        if key not in values:
            raise ParseError("missing field %r" % key, key=key)
    return CatalogEntry(**values)


def serialize_entry(entry):
    lines = []
    for f in fields(entry):
        value = getattr(entry, f.name)
        if value is None or (f.name == "note" and not value):
            continue
        if f.name == "modulus":
            value = ", ".join(str(c) for c in value)
        lines.append("%s = %s" % (f.name, value))
    return "\n".join(lines) + "\n"


def load_entry(path_or_name):
    """A builtin by name, or a curve file on disk."""
    try:
        return get_entry(path_or_name)
    except KeyError:
        pass
    with open(path_or_name, encoding="utf-8") as fh:
        return parse_entry(fh.read())


# validation

@dataclass
class ValidationReport:
    name: str
    checks: list = field(default_factory=list)

    def add(self, check, outcome, detail=""):
        self.checks.append({"check": check, "outcome": outcome, "detail": detail})

    @property
    def failures(self):
        return [c["check"] for c in self.checks if c["outcome"] == "fail"]

    def outcome(self, check):
        for c in self.checks:
            if c["check"] == check:
                return c["outcome"]
        raise KeyError(check)

    @property
    def status(self):
        # order-r points need a known group order, otherwise only the Miller loop is meaningful
        if self.failures or self.outcome("order_r_point") != "pass":
            return "benchmark-only"
        return "verified"

    def as_dict(self):
        return {"curve": self.name, "status": self.status, "failures": self.failures, "checks": self.checks}


def _minimal_degree(p, r, k):
    return [i for i in range(1, k) if pow(p, i, r) == 1]


def validate_params(entry, seed=0):
    rep = ValidationReport(entry.name)
    p, r, k = entry.p, entry.r, entry.k
    rep.add("p_prime", "pass" if p > 3 and isprime(p) else "fail", "%d bits" % p.bit_length())
    rep.add("r_prime", "pass" if r > 2 and isprime(r) else "fail", "%d bits" % r.bit_length())
    disc = (4 * entry.a ** 3 + 27 * entry.b ** 2) % p
    rep.add("discriminant", "pass" if disc else "fail")
    mod = list(entry.modulus)
    if len(mod) != k + 1 or mod[-1] != 1:
        rep.add("modulus_irreducible", "fail", "modulus must be monic of degree k")
    else:
        rep.add("modulus_irreducible", "pass" if is_irreducible(mod, p) else "fail")
    rep.add("r_divides_p^k-1", "pass" if pow(p, k, r) == 1 else "fail")
    smaller = _minimal_degree(p, r, k)
    rep.add("embedding_degree_minimal", "fail" if smaller else "pass",
            "r | p^i - 1 for i = %s" % smaller if smaller else "")
    if entry.p_bits is None:
        rep.add("p_bits", "skip", "no stated size")
    else:
        ok = p.bit_length() == entry.p_bits
        rep.add("p_bits", "pass" if ok else "fail", "%d vs stated %d" % (p.bit_length(), entry.p_bits))
    t = entry.trace
    if t is None:
        for check in ("r_divides_order", "hasse_bound", "order_r_point"):
            rep.add(check, "skip", "trace unknown")
        return rep
    order = p + 1 - t
    rep.add("r_divides_order", "pass" if order % r == 0 else "fail", "cofactor %s" % (order // r if order % r == 0 else "-"))
    rep.add("hasse_bound", "pass" if t * t <= 4 * p else "fail")
    if rep.failures:
        rep.add("order_r_point", "skip", "earlier checks failed")
        return rep
    C = Curve(PrimeField(p)(entry.a), PrimeField(p)(entry.b))
    rng = random.Random(seed)
    for _ in range(64):
        P = scalar_mul(C, order // r, random_point(C, rng))
        if not P.is_infinity:
            break
    ok = not P.is_infinity and scalar_mul(C, r, P).is_infinity
    rep.add("order_r_point", "pass" if ok else "fail", "cofactor %d" % (order // r))
    return rep
