"""Miller-loop engines.

Every engine builds f_{r,P} (divisor r(P) - (rP) - (r-1)(O)) and evaluates
it at a list of points sharing one pass over the bits of r.  Value-exact
engines keep numerator and denominator apart and return ``Fraction``s;
the two even-degree engines drop subfield factors and return a single
accumulator that only agrees with the others after final exponentiation.

Engines:

* ``classic``       -- textbook double-and-add with lines over verticals.
* ``bmx_binary``    -- delays one vertical per step and cancels it with
                       the tangent evaluated at -Q.
* ``bmx_radix4``    -- same trick over base-4 digits.
* ``novel_generic`` -- no vertical lines at all: the conjugate tangent
                       L_{-T,-T} absorbs pending verticals and the
                       double-add parabola replaces L_{T,T} L_{2T,P}/V_{2T}.
* ``novel_even``    -- single accumulator; 1/L_{-T,-T} becomes its
                       conjugate over the half-degree subfield.
* ``bls_even``      -- classic loop with every vertical dropped.

Counting goes through an ``OpCounter``; each loop iteration appends one
``StepRecord``.  Iterations that are not generic (initialisation, the
final step reaching O, the closing pending-vertical fix-up for loops
that never reach O) are flagged ``terminal``.
"""
from .counting import OpCounter
from .curve import (
    INFINITY,
    DegenerateSlope,
    Line,
    Parabola,
    double_add,
    line_and_sum,
    point_add,
    point_neg,
    scalar_mul,
    vertical,
)


class DegenerateEvaluation(ArithmeticError):
    """An evaluation point hit a zero of some line in the loop."""

    def __init__(self, line, iteration):
        super().__init__("%s vanished at the evaluation point (iteration %s)" % (line, iteration))
        self.line = line
        self.iteration = iteration


class UnsupportedEngine(ValueError):
    pass


class Fraction:
    """Deferred quotient num/den of extension-field values."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = num
        self.den = den

    def value(self, counter=None):
        inv = counter.inv(self.den) if counter is not None else self.den.inverse()
        return self.num * inv

    def squared(self):
        return Fraction(self.num * self.num, self.den * self.den)

    def __neg__(self):
        return Fraction(-self.num, self.den)

    def __eq__(self, other):
        if not isinstance(other, Fraction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def equals_up_to_sign(self, other):
        lhs, rhs = self.num * other.den, other.num * self.den
        return lhs == rhs or lhs == -rhs

    __hash__ = None

    def __repr__(self):
        return "Fraction(%r, %r)" % (self.num, self.den)


class _EvalPoint:
    __slots__ = ("x", "y", "xx")

    def __init__(self, x, y, xx):
        self.x = x
        self.y = y
        self.xx = xx


class _Run:
    """Evaluation points, counter and bookkeeping shared by one engine run."""

    def __init__(self, curve, P, r, points, counter, check):
        if r < 1:
            raise ValueError("r must be positive")
        if P.is_infinity:
            raise ValueError("P must be a finite point")
        pts = []
        for Q in points:
            if Q.is_infinity:
                raise ValueError("evaluation points must be finite")
            pts.append(_EvalPoint(Q.x, Q.y, Q.x * Q.x))
        if not pts:
            raise ValueError("at least one evaluation point is required")
        self.curve = curve
        self.P = P
        self.r = r
        self.pts = pts
        self.neg = [_EvalPoint(q.x, -q.y, q.xx) for q in pts]
        self.ctr = counter if counter is not None else OpCounter()
        self.check = check
        self.one = pts[0].x.field.one()

    def vals(self, fn, name, it, neg=False):
        out = []
        for q in (self.neg if neg else self.pts):
            v = fn(q, q.xx) if isinstance(fn, Parabola) else fn(q)
            if v.is_zero():
                raise DegenerateEvaluation(name, it)
            out.append(v)
        return out

    def times(self, acc, fn, name, it, tag, neg=False):
        """acc * fn(Q) pointwise; the constant-one vertical V_O costs nothing."""
        if isinstance(fn, Line) and fn.is_one:
            return acc
        return [self.ctr.mul(a, v, tag) for a, v in zip(acc, self.vals(fn, name, it, neg))]

    def sq(self, acc):
        return [self.ctr.sq(a) for a in acc]

    def verify(self, T, prefix):
        if self.check:
            expected = scalar_mul(self.curve, prefix, self.P)
            if T != expected:
                raise AssertionError("loop invariant broken: T != %d*P" % prefix)


def _loop_bits(r):
    """(position, bit) for every bit below the leading one, high to low."""
    bits = bin(r)[3:]
    n = len(bits)
    return [(n - 1 - i, int(b)) for i, b in enumerate(bits)]


def _ones(run):
    return [Fraction(run.one, run.one) for _ in run.pts]


def miller_classic(curve, P, r, points, counter=None, check=False):
    run = _Run(curve, P, r, points, counter, check)
    ctr = run.ctr
    num = [run.one] * len(run.pts)
    den = [run.one] * len(run.pts)
    T = P
    for pos, bit in _loop_bits(r):
        mark = ctr.mark()
        tangent, T = line_and_sum(curve, T, T)
        num = run.times(run.sq(num), tangent, "L_{T,T}", pos, "L")
        den = run.times(run.sq(den), vertical(T), "V_{2T}", pos, "V")
        if bit:
            chord, T = line_and_sum(curve, T, P)
            num = run.times(num, chord, "L_{T,P}", pos, "L")
            den = run.times(den, vertical(T), "V_{T+P}", pos, "V")
        ctr.record(mark, pos, bit, "dbl+add" if bit else "dbl", T.is_infinity, len(run.pts))
        run.verify(T, r >> pos)
    return [Fraction(n, d) for n, d in zip(num, den)]


def miller_bmx_binary(curve, P, r, points, counter=None, check=False):
    run = _Run(curve, P, r, points, counter, check)
    if r == 1:
        return _ones(run)
    ctr = run.ctr
    bits = _loop_bits(r)
    pos, first = bits[0]
    mark = ctr.mark()
    tangent, T = line_and_sum(curve, P, P)
    if first == 0:
        num = run.vals(tangent, "L_{P,P}", pos)
        den = [run.one] * len(run.pts)
    else:
        chord, T3 = line_and_sum(curve, T, P)
        num = run.times(run.vals(tangent, "L_{P,P}", pos), chord, "L_{2P,P}", pos, "L")
        den = [run.one] * len(run.pts) if T.is_infinity else run.vals(vertical(T), "V_{2P}", pos)
        T = T3
    ctr.record(mark, pos, first, "init", True, len(run.pts))
    run.verify(T, r >> pos)
    # invariant from here on: f = f_true * V_T, up to sign
    for pos, bit in bits[1:]:
        mark = ctr.mark()
        tangent, T2 = line_and_sum(curve, T, T)
        if bit == 0:
            num = run.times(run.sq(num), vertical(T2), "V_{2T}", pos, "V")
            T = T2
        else:
            chord, T = line_and_sum(curve, T2, P)
            num = run.times(run.sq(num), chord, "L_{2T,P}", pos, "L")
        den = run.times(run.sq(den), tangent, "L_{T,T}(-Q)", pos, "L", neg=True)
        ctr.record(mark, pos, bit, "b=%d" % bit, T.is_infinity, len(run.pts))
        run.verify(T, r >> pos)
    den = _close_pending(run, den, T)
    return [Fraction(n, d) for n, d in zip(num, den)]


def _close_pending(run, den, T):
    """Divide out the pending vertical V_T when the loop stops short of O."""
    if T.is_infinity:
        return den
    mark = run.ctr.mark()
    den = run.times(den, vertical(T), "V_{rP}", "fixup", "V")
    run.ctr.record(mark, -1, 0, "fixup", True, len(run.pts))
    return den


def _radix4_digits(r):
    digits = []
    while r:
        digits.append(r % 4)
        r //= 4
    return digits[::-1]


def miller_bmx_radix4(curve, P, r, points, counter=None, check=False):
    run = _Run(curve, P, r, points, counter, check)
    ctr = run.ctr
    digits = _radix4_digits(r)
    top = len(digits) - 1
    mark = ctr.mark()
    ones = [run.one] * len(run.pts)
    if digits[0] == 1:
        num, den, T = ones, ones, P
    else:
        tangent, T2 = line_and_sum(curve, P, P)
        if digits[0] == 2:
            num = run.vals(tangent, "L_{P,P}", top)
            den = ones if T2.is_infinity else run.vals(vertical(T2), "V_{2P}", top)
            T = T2
        else:
            # L_{P,P} V_P / L_{2P,P}(-Q) = -f_3; the f^3 L_{P,P}^2 form carries a stray L_{P,P}
            chord, T = line_and_sum(curve, T2, P)
            num = run.times(run.vals(tangent, "L_{P,P}", top), vertical(P), "V_P", top, "V")
            den = run.vals(chord, "L_{2P,P}(-Q)", top, neg=True)
    ctr.record(mark, top, digits[0], "init", True, len(run.pts))
    run.verify(T, r >> (2 * top))
    for i, q in enumerate(digits[1:], start=1):
        pos = top - i
        mark = ctr.mark()
        tangent, T2 = line_and_sum(curve, T, T)
        if q < 2:
            tangent2, T4 = line_and_sum(curve, T2, T2)
            num = run.sq(run.times(run.sq(num), tangent, "L_{T,T}", pos, "L"))
            den = run.times(run.sq(run.sq(den)), tangent2, "L_{2T,2T}(-Q)", pos, "L", neg=True)
            T = T4
            if q == 1:
                chord, T = line_and_sum(curve, T4, P)
                num = run.times(num, chord, "L_{4T,P}", pos, "L")
                den = run.times(den, vertical(T), "V_{4T+P}", pos, "V")
        else:
            chord, U = line_and_sum(curve, T2, P)
            tangent_u, W = line_and_sum(curve, U, U)
            num = run.times(run.sq(num), tangent, "L_{T,T}", pos, "L")
            num = run.sq(run.times(num, chord, "L_{2T,P}", pos, "L"))
            den = run.sq(run.times(run.sq(den), vertical(T2), "V_{2T}", pos, "V"))
            den = run.times(den, tangent_u, "L_{2T+P,2T+P}(-Q)", pos, "L", neg=True)
            T = W
            if q == 3:
                chord2, T = line_and_sum(curve, W, P)
                num = run.times(num, chord2, "L_{4T+2P,P}", pos, "L")
                den = run.times(den, vertical(T), "V_{4T+3P}", pos, "V")
        ctr.record(mark, pos, q, "q=%d" % q, T.is_infinity, len(run.pts))
        run.verify(T, r >> (2 * pos))
    return [Fraction(n, d) for n, d in zip(num, den)]


def _vertical_free_loop(run, num, den, single):
    """Shared control flow of the two vertical-free engines.

    ``single`` selects the even-degree variant, where the denominator
    factor L_{-T,-T} is replaced by its conjugate and multiplied into the
    one accumulator.
    """
    curve, P, ctr = run.curve, run.P, run.ctr
    T = P
    m = 0
    for pos, bit in _loop_bits(run.r):
        mark = ctr.mark()
        sq_num = run.sq(num)
        sq_den = den if single else run.sq(den)
        if bit == 0:
            tangent, T = line_and_sum(curve, T, T)
            if m == 0:
                num, den = run.times(sq_num, tangent, "L_{T,T}", pos, "L"), sq_den
                m = 1
            else:
                num, den = _conjugate_line(run, sq_num, sq_den, tangent.conjugate(), pos, single)
                m = 0
            label = "b=0,m=%d" % (1 - m)
        elif m == 1:
            tangent, T2 = line_and_sum(curve, T, T)
            chord, T = line_and_sum(curve, T2, P)
            num = run.times(sq_num, chord, "L_{2T,P}", pos, "L")
            num, den = _conjugate_line(run, num, sq_den, tangent.conjugate(), pos, single)
            label = "b=1,m=1"
        else:
            try:
                trace = double_add(curve, T, P)
            except DegenerateSlope as exc:
                tangent, T2 = line_and_sum(curve, T, T)
                if exc.line != "chord" or point_add(curve, T2, P) != INFINITY:
                    raise DegenerateEvaluation("double_add (%s)" % exc.line, pos) from exc
                # 2T = -P: L_{2T,P} is V_{2T} itself, so the quotient is just L_{T,T}
                num, den, T = run.times(sq_num, tangent, "L_{T,T}", pos, "L"), sq_den, INFINITY
                label = "b=1,m=0/terminal"
            else:
                num = run.times(sq_num, Parabola(trace, T), "P_{T,P}", pos, "P")
                den, T = sq_den, trace.result
                label = "b=1,m=0/parabola"
            m = 1
        ctr.record(mark, pos, bit, label, T.is_infinity, len(run.pts))
        run.verify(T, run.r >> pos)
    if m == 1 and not T.is_infinity:
        mark = ctr.mark()
        if single:
            vals = run.vals(vertical(T), "V_{rP}", "fixup")
            num = [ctr.mul(a, ctr.conj(v), "V") for a, v in zip(num, vals)]
        else:
            den = run.times(den, vertical(T), "V_{rP}", "fixup", "V")
        ctr.record(mark, -1, 0, "fixup", True, len(run.pts))
    return num, den


def _conjugate_line(run, num, den, conj_line, pos, single):
    if single:
        vals = run.vals(conj_line, "L_{-T,-T}", pos)
        num = [run.ctr.mul(a, run.ctr.conj(v), "Lc") for a, v in zip(num, vals)]
        return num, den
    return num, run.times(den, conj_line, "L_{-T,-T}", pos, "Lc")


def miller_novel_generic(curve, P, r, points, counter=None, check=False):
    run = _Run(curve, P, r, points, counter, check)
    ones = [run.one] * len(run.pts)
    num, den = _vertical_free_loop(run, ones, ones, single=False)
    return [Fraction(n, d) for n, d in zip(num, den)]


def _require_even(run, name):
    k = getattr(run.one.field, "k", 1)
    if k % 2:
        raise UnsupportedEngine("%s needs an even embedding degree, got k = %d" % (name, k))


def miller_novel_even(curve, P, r, points, counter=None, check=False):
    run = _Run(curve, P, r, points, counter, check)
    _require_even(run, "novel_even")
    f, _ = _vertical_free_loop(run, [run.one] * len(run.pts), None, single=True)
    return f


def miller_bls_even(curve, P, r, points, counter=None, check=False):
    run = _Run(curve, P, r, points, counter, check)
    _require_even(run, "bls_even")
    ctr = run.ctr
    f = [run.one] * len(run.pts)
    T = P
    for pos, bit in _loop_bits(r):
        mark = ctr.mark()
        tangent, T = line_and_sum(curve, T, T)
        f = run.times(run.sq(f), tangent, "L_{T,T}", pos, "L")
        if bit:
            chord, T = line_and_sum(curve, T, P)
            f = run.times(f, chord, "L_{T,P}", pos, "L")
        ctr.record(mark, pos, bit, "dbl+add" if bit else "dbl", T.is_infinity, len(run.pts))
        run.verify(T, r >> pos)
    return f


ENGINES = {
    "classic": miller_classic,
    "bmx_binary": miller_bmx_binary,
    "bmx_radix4": miller_bmx_radix4,
    "novel_generic": miller_novel_generic,
    "novel_even": miller_novel_even,
    "bls_even": miller_bls_even,
}
VALUE_EXACT = ("classic", "bmx_binary", "bmx_radix4", "novel_generic")
EVEN_ONLY = ("novel_even", "bls_even")


def get_engine(name):
    try:
        return ENGINES[name]
    except KeyError:
        raise UnsupportedEngine("unknown engine %r (choose from %s)" % (name, ", ".join(ENGINES))) from None


def run_with_divisor(engine, curve, P, r, Q, S, counter=None):
    """f_{r,P}((Q+S) - (S)) from one loop evaluated at Q+S and S."""
    name = engine if isinstance(engine, str) else engine.__name__.replace("miller_", "")
    if name not in VALUE_EXACT:
        raise UnsupportedEngine("divisor evaluation needs a value-exact engine, not %s" % name)
    fn = get_engine(name)
    if S.is_infinity:
        raise ValueError("shift point S must be finite")
    if Q.is_infinity:
        one = S.x.field.one()
        return Fraction(one, one)
    layer = curve if S.x.field == curve.field else curve.over(S.x.field)
    if S == Q or S == point_neg(layer, Q):
        raise DegenerateEvaluation("shift S = +-Q", "setup")
    QS = point_add(layer, Q, S)
    shifted, base = fn(curve, P, r, [QS, S], counter=counter)
    return Fraction(shifted.num * base.den, shifted.den * base.num)
