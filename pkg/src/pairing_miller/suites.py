"""Invariant suites shared by the CLI ``verify`` command and the tests.

Every suite returns a ``SuiteResult``; on failure ``counterexample``
holds enough of the inputs (as decimal coefficient lists) to replay it.
"""
import random
from dataclasses import dataclass, field

from .catalog import builtin_catalog, validate_params
from .counting import OpCounter, verify_cost
from .curve import (
    DegenerateSlope,
    Parabola,
    double_add,
    line_and_sum,
    line_through,
    point_add,
    point_neg,
    random_point,
    scalar_mul,
    vertical,
)
from .miller import ENGINES, EVEN_ONLY, DegenerateEvaluation, get_engine
from .pairing import point_pool, sample_g1, sample_g2, tate_reduced, weil

# L_{A,B}(Q) L_{-A,-B}(Q) = +V_A(Q) V_B(Q) V_{A+B}(Q) with lines monic in y
LINE_PAIR_SIGN = 1


def encode(v):
    """Field element or point as plain integers for JSON."""
    if v is None:
        return None
    if hasattr(v, "is_infinity"):
        return "O" if v.is_infinity else {"x": encode(v.x), "y": encode(v.y)}
    if hasattr(v, "coeffs"):
        return list(v.coeffs)
    return [int(v)]


@dataclass
class SuiteResult:
    name: str
    passed: bool = True
    checked: int = 0
    details: dict = field(default_factory=dict)
    counterexample: dict = None

    def fail(self, **inputs):
        if self.passed:
            self.counterexample = inputs
        self.passed = False

    def as_dict(self):
        out = {"suite": self.name, "passed": self.passed, "checked": self.checked}
        out.update(self.details)
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def _ext_points(ctx, rng, n):
    if ctx.p < 1000:
        return [random_point(ctx.ext_curve, rng) for _ in range(n)]
    return point_pool(ctx, rng, n)


def identity_suite(ctx, trials=1000, rng=None, pool_size=32):
    """Line identities on the extension layer, exact equality.

    line_pair:    L_{A,B} L_{-A,-B} = V_A V_B V_{A+B} with A = iP, B = jP
    tangent_pair: L_{T,T} L_{-T,-T} = V_T^2 V_{2T}        (cross-multiplied form)
    parabola:     parabola * V_{2T} = L_{T,T} L_{2T,P}
    """
    rng = rng or random.Random(0)
    C = ctx.ext_curve
    pool = _ext_points(ctx, rng, pool_size)
    res = SuiteResult("identities", details={"curve": ctx.name, "line_pair_sign": "+" if LINE_PAIR_SIGN > 0 else "-"})
    counts = {"line_pair": 0, "tangent_pair": 0, "parabola": 0}

    def pick():
        return rng.choice(pool)

    while counts["line_pair"] < trials:
        P, Q = pick(), pick()
        i, j = rng.randrange(1, 17), rng.randrange(1, 17)
        A, B = scalar_mul(C, i, P), scalar_mul(C, j, P)
        if A.is_infinity or B.is_infinity:
            continue
        lhs = line_through(C, A, B)(Q) * line_through(C, point_neg(C, A), point_neg(C, B))(Q)
        rhs = vertical(A)(Q) * vertical(B)(Q) * vertical(point_add(C, A, B))(Q)
        if lhs != LINE_PAIR_SIGN * rhs:
            res.fail(identity="line_pair", P=encode(P), Q=encode(Q), i=i, j=j)
        counts["line_pair"] += 1
    while counts["tangent_pair"] < trials:
        T, Q = pick(), pick()
        tangent, T2 = line_and_sum(C, T, T)
        lhs = tangent(Q) * line_through(C, point_neg(C, T), point_neg(C, T))(Q)
        rhs = vertical(T)(Q) ** 2 * vertical(T2)(Q)
        if lhs != LINE_PAIR_SIGN * rhs:
            res.fail(identity="tangent_pair", T=encode(T), Q=encode(Q))
        counts["tangent_pair"] += 1
    while counts["parabola"] < trials:
        T, P, Q = pick(), pick(), pick()
        try:
            trace = double_add(C, T, P)
        except DegenerateSlope:
            continue
        tangent, T2 = line_and_sum(C, T, T)
        lhs = Parabola(trace, T)(Q) * vertical(T2)(Q)
        rhs = tangent(Q) * line_through(C, T2, P)(Q)
        if lhs != rhs or trace.result != point_add(C, T2, P):
            res.fail(identity="parabola", T=encode(T), P=encode(P), Q=encode(Q))
        counts["parabola"] += 1
    res.checked = sum(counts.values())
    res.details["counts"] = counts
    return res


def _engine_input(ctx, rng, pool, n):
    """One (P, r, Q): the true subgroup order on toy curves, a random odd
    32-bit loop length on large curves (the loop never meets O there)."""
    if ctx.p < 1000:
        return sample_g1(ctx, rng), ctx.r, rng.choice(pool)
    r = rng.getrandbits(32) | 1 | (1 << 31)
    return random_point(ctx.curve, rng), r, pool[n % len(pool)]


def engine_suite(ctx, trials=100, rng=None):
    """novel_generic == classic exactly; bmx engines up to sign; squares equal.

    Degenerate inputs are redrawn, so ``trials`` triples are compared.
    """
    rng = rng or random.Random(1)
    res = SuiteResult("engines", details={"curve": ctx.name, "novel_generic_sign": "+"})
    pool = _ext_points(ctx, rng, min(trials, 64))
    skipped = 0
    while res.checked < trials:
        P, r, Q = _engine_input(ctx, rng, pool, res.checked + skipped)
        try:
            ref = get_engine("classic")(ctx.curve, P, r, [Q])[0]
            outs = {e: get_engine(e)(ctx.curve, P, r, [Q])[0] for e in ("bmx_binary", "bmx_radix4", "novel_generic")}
        except DegenerateEvaluation:
            skipped += 1
            if skipped > 10 * trials:
                raise
            continue
        res.checked += 1
        ok = outs["novel_generic"] == ref
        ok = ok and all(outs[e].equals_up_to_sign(ref) for e in ("bmx_binary", "bmx_radix4"))
        ok = ok and all(v.squared() == ref.squared() for v in outs.values())
        if not ok:
            res.fail(P=encode(P), r=r, Q=encode(Q))
    res.details["skipped_degenerate"] = skipped
    return res


def engines_for(ctx):
    return [e for e in ENGINES if ctx.k % 2 == 0 or e not in EVEN_ONLY]


def reduced_agreement_suite(ctx, pairs=None, rng=None):
    """Reduced Tate identical across engines; exhaustive G1 x G2 on toy curves."""
    rng = rng or random.Random(2)
    res = SuiteResult("reduced_agreement", details={"curve": ctx.name, "engines": engines_for(ctx)})
    if pairs is None:
        pairs = subgroup_pairs(ctx)
    for P, Q in pairs:
        vals = {e: tate_reduced(ctx, P, Q, e) for e in engines_for(ctx)}
        res.checked += 1
        ref = vals["classic"]
        if any(v != ref for v in vals.values()) or ref ** ctx.r != ctx.Fq.one():
            res.fail(P=encode(P), Q=encode(Q), values={e: encode(v) for e, v in vals.items()})
    return res


def subgroup_pairs(ctx):
    """All (P, Q) with P in G1 and Q in the trace-zero subgroup, both non-zero."""
    g1 = sample_g1(ctx, random.Random(0))
    g2 = sample_g2(ctx, random.Random(0))
    G1 = [scalar_mul(ctx.curve, a, g1) for a in range(1, ctx.r)]
    G2 = [scalar_mul(ctx.ext_curve, b, g2) for b in range(1, ctx.r)]
    return [(P, Q) for P in G1 for Q in G2]


def bilinearity_suite(ctx, samples=None, rng=None, engine="classic"):
    """tau(aP, bQ) = tau(P, Q)^(ab): every (a, b) on toy curves, random ones otherwise."""
    rng = rng or random.Random(3)
    P, Q = sample_g1(ctx, rng), sample_g2(ctx, rng)
    base = tate_reduced(ctx, P, Q, engine)
    res = SuiteResult("bilinearity", details={"curve": ctx.name, "non_degenerate": base != ctx.Fq.one()})
    if samples is None:
        ab = [(a, b) for a in range(1, ctx.r) for b in range(1, ctx.r)]
    else:
        ab = [(rng.randrange(1, ctx.r), rng.randrange(1, ctx.r)) for _ in range(samples)]
    for a, b in ab:
        lhs = tate_reduced(ctx, scalar_mul(ctx.curve, a, P), scalar_mul(ctx.ext_curve, b, Q), engine)
        res.checked += 1
        if lhs != base ** (a * b):
            res.fail(P=encode(P), Q=encode(Q), a=a, b=b)
    if not res.details["non_degenerate"]:
        res.fail(P=encode(P), Q=encode(Q), reason="tau(P, Q) = 1")
    return res


def weil_suite(ctx, rng=None, engines=("classic", "bmx_binary", "bmx_radix4", "novel_generic")):
    """omega^r = 1, antisymmetry, bilinearity over every (a, b), shift independence."""
    rng = rng or random.Random(4)
    C = ctx.ext_curve
    P, Q = ctx.lift(sample_g1(ctx, rng)), sample_g2(ctx, rng)
    w = weil(ctx, P, Q, "classic", rng)
    one = ctx.Fq.one()
    res = SuiteResult("weil", details={"curve": ctx.name, "non_degenerate": w != one})
    shifts = {encode(weil(ctx, P, Q, "classic", rng)) == encode(w) for _ in range(10)}
    checks = [("mu_r", w ** ctx.r == one), ("antisymmetry", w * weil(ctx, Q, P, "classic", rng) == one),
              ("shift_independence", shifts == {True}), ("non_degenerate", w != one),
              ("alternating", weil(ctx, P, P, "classic", rng) == one)]
    for a in range(1, ctx.r):
        for b in range(1, ctx.r):
            for e in engines:
                got = weil(ctx, scalar_mul(C, a, P), scalar_mul(C, b, Q), e, rng)
                checks.append(("bilinear", got == w ** (a * b)))
    for name, ok in checks:
        res.checked += 1
        if not ok:
            res.fail(check=name, P=encode(P), Q=encode(Q))
    return res


def cost_suite(ctx, trials=100, rng=None, engines=None, bits=64):
    """Per-iteration counter deltas against the table rows, random odd r."""
    rng = rng or random.Random(5)
    engines = engines or engines_for(ctx)
    res = SuiteResult("costs", details={"curve": ctx.name, "per_engine": {}})
    large = ctx.p.bit_length() > bits + 2
    pool = _ext_points(ctx, rng, min(trials, 64))
    for e in engines:
        fn = get_engine(e)
        summary = {"runs": 0, "interior_checked": 0, "boundary": 0, "boundary_mismatch": 0, "mismatches": 0}
        for n in range(trials):
            if large:
                r = rng.getrandbits(bits) | 1 | (1 << (bits - 1))
                P, reach = random_point(ctx.curve, rng), False
            else:
                r, P, reach = ctx.r, sample_g1(ctx, rng), True
            Q = pool[n % len(pool)]
            c = OpCounter()
            try:
                fn(ctx.curve, P, r, [Q], counter=c)
            except DegenerateEvaluation:
                continue
            rep = verify_cost(c.steps, e, r, reach)
            summary["runs"] += 1
            summary["interior_checked"] += rep.interior_checked
            summary["boundary"] += len(rep.boundary)
            summary["boundary_mismatch"] += sum(not b["match"] for b in rep.boundary)
            summary["mismatches"] += len(rep.mismatches)
            res.checked += 1
            if c.totals() != tuple(sum(getattr(s, a) for s in c.steps) for a in ("dM", "dS", "dI")):
                res.fail(engine=e, r=r, reason="step log does not sum to the totals")
            if not rep.passed or summary["boundary_mismatch"]:
                res.fail(engine=e, r=r, P=encode(P), Q=encode(Q), report=rep.as_dict())
        res.details["per_engine"][e] = summary
    return res


def savings(ctx, r, P, Q):
    """Measured classic - novel_generic multiplication difference for one run."""
    counts = {}
    for e in ("classic", "novel_generic"):
        c = OpCounter()
        get_engine(e)(ctx.curve, P, r, [Q], counter=c)
        counts[e] = c
    t = r.bit_length() - 1
    H = bin(r).count("1")
    c10 = sum(s.label.startswith("b=1,m=0") for s in counts["novel_generic"].steps)
    diff = counts["classic"].M - counts["novel_generic"].M
    return {"r_bits": r.bit_length(), "t": t, "H": H, "c10": c10, "saved_M": diff,
            "bound": t + H - c10 - 2, "holds": diff >= t + H - c10 - 2}


def savings_suite(ctx, trials=100, rng=None, bits=64):
    rng = rng or random.Random(6)
    res = SuiteResult("savings", details={"curve": ctx.name, "runs": []})
    pool = _ext_points(ctx, rng, min(trials, 64))
    for n in range(trials):
        r = rng.getrandbits(bits) | 1 | (1 << (bits - 1))
        row = savings(ctx, r, random_point(ctx.curve, rng), pool[n % len(pool)])
        res.details["runs"].append(row)
        res.checked += 1
        if not row["holds"]:
            res.fail(**row)
    return res


def catalog_suite(seed=0):
    res = SuiteResult("catalog", details={"reports": {}})
    for entry in builtin_catalog():
        first = validate_params(entry, seed).as_dict()
        again = validate_params(entry, seed).as_dict()
        res.details["reports"][entry.name] = {"status": first["status"], "failures": first["failures"]}
        res.checked += 1
        if first != again:
            res.fail(curve=entry.name, reason="validation is not deterministic")
        if entry.name in ("bn254", "toy-11", "toy-19") and first["status"] != "verified":
            res.fail(curve=entry.name, failures=first["failures"])
    return res

