"""Reduced Tate and Weil pairings on top of the Miller engines.

Points live in two layers: G1 points over F_p and points over F_{p^k}.
Sampling of order-r points needs the group order of the layer, which is
only available when the Frobenius trace of the curve is known.
"""
import random
from functools import lru_cache

from .catalog import CatalogEntry, get_entry
from .curve import AffinePoint, Curve, lift, on_curve, point_add, point_neg, random_point, scalar_mul
from .field import ExtField, PrimeField, final_exponentiation
from .miller import EVEN_ONLY, VALUE_EXACT, DegenerateEvaluation, Fraction, UnsupportedEngine, get_engine, run_with_divisor


class SamplingError(RuntimeError):
    """Ran out of retries while looking for a usable random point."""


class UnknownOrder(ValueError):
    """Order-r sampling asked for on a curve with unknown trace."""


def extension_group_order(p, t, k):
    """#E(F_{p^k}) = p^k + 1 - t_k with t_{i+1} = t*t_i - p*t_{i-1}."""
    prev, cur = 2, t
    for _ in range(k - 1):
        prev, cur = cur, t * cur - p * prev
    return p ** k + 1 - cur


class PairingContext:
    def __init__(self, entry: CatalogEntry):
        self.entry = entry
        self.name = entry.name
        self.p, self.r, self.k = entry.p, entry.r, entry.k
        self.trace = entry.trace
        self.Fp = PrimeField(entry.p)
        self.Fq = ExtField(self.Fp, list(entry.modulus))
        self.curve = Curve(self.Fp(entry.a), self.Fp(entry.b))
        self.ext_curve = self.curve.over(self.Fq)
        self._g2 = None
        self._seeds = []

    @classmethod
    def from_name(cls, name):
        return context(name)

    def order(self, layer):
        if self.trace is None:
            raise UnknownOrder("group order of %s is unknown (no trace)" % self.name)
        if layer == "base":
            return self.p + 1 - self.trace
        return extension_group_order(self.p, self.trace, self.k)

    def cofactor(self, layer):
        """Group order with every factor r removed."""
        h = self.order(layer)
        while h % self.r == 0:
            h //= self.r
        return h

    def layer_curve(self, layer):
        return self.curve if layer == "base" else self.ext_curve

    def lift(self, P):
        return P if P.is_infinity or P.x.field == self.Fq else lift(P, self.Fq)

    def __repr__(self):
        return "PairingContext(%s, k=%d)" % (self.name, self.k)


@lru_cache(maxsize=None)
def context(name):
    return PairingContext(get_entry(name))


def frobenius_point(Q, times=1):
    if Q.is_infinity:
        return Q
    return AffinePoint(Q.x.frobenius(times), Q.y.frobenius(times))


def sample_point(ctx, layer="base", order_target=None, rng=None, tries=64):
    """Random finite point of the layer; with order_target = r its order is exactly r."""
    rng = rng or random.Random()
    C = ctx.layer_curve(layer)
    if order_target is None:
        return random_point(C, rng)
    if order_target != ctx.r:
        raise ValueError("only the subgroup order r is supported as a target")
    h = ctx.cofactor(layer)
    r = ctx.r
    for _ in range(tries):
        P = scalar_mul(C, h, random_point(C, rng))
        # r^2 may divide the order: push down until r kills the point
        while not P.is_infinity:
            rP = scalar_mul(C, r, P)
            if rP.is_infinity:
                return P
            P = rP
    raise SamplingError("no order-%d point found on %s after %d tries" % (r, ctx.name, tries))


def anti_trace(ctx, Q):
    """k*Q - sum of Frobenius images: lands in the trace-zero subgroup."""
    C = ctx.ext_curve
    acc = scalar_mul(C, ctx.k, Q)
    img = Q
    for _ in range(ctx.k):
        acc = point_add(C, acc, point_neg(C, img))
        img = frobenius_point(img)
    return acc


def sample_g1(ctx, rng):
    return sample_point(ctx, "base", ctx.r, rng)


def g2_generator(ctx, rng=None):
    """One order-r point with pi(Q) = pQ, cached on the context."""
    if ctx._g2 is None:
        rng = rng or random.Random(0)
        for _ in range(16):
            Q = anti_trace(ctx, sample_point(ctx, "extension", ctx.r, rng))
            if not Q.is_infinity:
                ctx._g2 = Q
                break
        else:
            raise SamplingError("trace-zero subgroup sampling failed on %s" % ctx.name)
    return ctx._g2


def sample_g2(ctx, rng):
    return scalar_mul(ctx.ext_curve, rng.randrange(1, ctx.r), g2_generator(ctx))


def seed_points(ctx, n=4):
    """A fixed handful of square-root sampled extension points, cached."""
    if len(ctx._seeds) < n:
        rng = random.Random(0x5EED + len(ctx._seeds))
        while len(ctx._seeds) < n:
            ctx._seeds.append(random_point(ctx.ext_curve, rng))
    return ctx._seeds[:n]


def point_pool(ctx, rng, count, seeds=4):
    """Arbitrary extension points, cheaply: cached square-root samples
    shifted by random base-field points.  No order guarantee."""
    C = ctx.ext_curve
    roots = seed_points(ctx, seeds)
    out = []
    while len(out) < count:
        Q = point_add(C, rng.choice(roots), ctx.lift(random_point(ctx.curve, rng)))
        if not Q.is_infinity:
            out.append(Q)
    return out


def _check_engine(ctx, engine, value_exact=False):
    get_engine(engine)
    if value_exact and engine not in VALUE_EXACT:
        raise UnsupportedEngine("%s is not value-exact; use one of %s" % (engine, ", ".join(VALUE_EXACT)))
    if engine in EVEN_ONLY and ctx.k % 2:
        raise UnsupportedEngine("%s needs an even embedding degree, %s has k = %d" % (engine, ctx.name, ctx.k))


def miller_value(ctx, P, Q, engine="classic", counter=None):
    """The engine's Miller function value at Q, one inversion for Fraction engines."""
    _check_engine(ctx, engine)
    out = get_engine(engine)(ctx.curve, P, ctx.r, [ctx.lift(Q)], counter=counter)[0]
    if isinstance(out, Fraction):
        return out.value(counter)
    return out


def tate_reduced(ctx, P, Q, engine="classic", counter=None, S=None):
    """Reduced Tate pairing; with a shift S the divisor (Q+S) - (S) is used."""
    if P.is_infinity:
        raise ValueError("P must be finite")
    if S is None:
        f = miller_value(ctx, P, Q, engine, counter)
    else:
        _check_engine(ctx, engine, value_exact=True)
        f = run_with_divisor(engine, ctx.curve, P, ctx.r, ctx.lift(Q), ctx.lift(S), counter).value(counter)
    return final_exponentiation(f, ctx.r)


def _quotient(a, b):
    num, den = a.num * b.den, a.den * b.num
    if num.is_zero() or den.is_zero():
        raise DegenerateEvaluation("divisor evaluation", "weil")
    return num * den.inverse()


def weil_with_shift(ctx, P, Q, S, engine="classic"):
    """f_P((Q+S) - (S)) / f_Q((P-S) - (-S)).

    The second divisor is shifted by -S; with independent shifts the
    quotient is not well defined.
    """
    _check_engine(ctx, engine, value_exact=True)
    C = ctx.ext_curve
    P, Q, S = ctx.lift(P), ctx.lift(Q), ctx.lift(S)
    if P.is_infinity or Q.is_infinity:
        return ctx.Fq.one()
    fp = run_with_divisor(engine, C, P, ctx.r, Q, S)
    fq = run_with_divisor(engine, C, Q, ctx.r, P, point_neg(C, S))
    return _quotient(fp, fq)


def weil(ctx, P, Q, engine="classic", rng=None, retries=32):
    rng = rng or random.Random()
    _check_engine(ctx, engine, value_exact=True)
    for _ in range(retries):
        S = random_point(ctx.ext_curve, rng)
        try:
            return weil_with_shift(ctx, P, Q, S, engine)
        except (DegenerateEvaluation, ZeroDivisionError):
            continue
    raise SamplingError("no usable shift point after %d tries" % retries)


def in_subgroup(ctx, P):
    C = ctx.layer_curve("base" if P.is_infinity or P.x.field == ctx.Fp else "extension")
    return on_curve(C, P) and scalar_mul(C, ctx.r, P).is_infinity
