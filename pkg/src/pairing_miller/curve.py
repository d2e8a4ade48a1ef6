"""Short Weierstrass curves y^2 = x^3 + a*x + b in affine coordinates.

Besides the group law this module provides the functions a Miller loop
multiplies together: lines (monic in y), verticals ``x - x_A`` and the
double-add parabola that replaces ``L_{T,T} * L_{2T,P} / V_{2T}``.
"""
from dataclasses import dataclass


class DegenerateSlope(ArithmeticError):
    """A tangent or chord needed by double_add is vertical."""

    def __init__(self, line):
        super().__init__("vertical %s line in double_add" % line)
        self.line = line


class AffinePoint:
    __slots__ = ("x", "y")

    def __init__(self, x=None, y=None):
        self.x = x
        self.y = y

    @property
    def is_infinity(self):
        return self.x is None

    def __eq__(self, other):
        if not isinstance(other, AffinePoint):
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        if self.is_infinity:
            return "O"
        return "(%r, %r)" % (self.x, self.y)


INFINITY = AffinePoint()


class Curve:
    def __init__(self, a, b):
        self.a = a
        self.b = b
        self.field = a.field
        if (4 * a ** 3 + 27 * b * b).is_zero():
            raise ValueError("singular curve: 4a^3 + 27b^2 = 0")

    def over(self, ext):
        """The same equation read over an extension field."""
        return Curve(ext(self.a), ext(self.b))

    def point(self, x, y):
        P = AffinePoint(self.field(x), self.field(y))
        if not on_curve(self, P):
            raise ValueError("point not on curve: %r" % (P,))
        return P

    def rhs(self, x):
        return x * x * x + self.a * x + self.b

    def __repr__(self):
        return "Curve(a=%r, b=%r, over %r)" % (self.a, self.b, self.field)


def lift(P, ext):
    """Embed a base-field point into an extension layer."""
    if P.is_infinity:
        return P
    return AffinePoint(ext(P.x), ext(P.y))


def on_curve(C, P):
    if P.is_infinity:
        return True
    return P.y * P.y == C.rhs(P.x)


def point_neg(C, P):
    if P.is_infinity:
        return P
    return AffinePoint(P.x, -P.y)


def _slope(C, A, B):
    """Slope of the line through A and B, or None if that line is vertical."""
    if A.x == B.x:
        if A.y != B.y or A.y.is_zero():
            return None
        return (3 * A.x * A.x + C.a) / (2 * A.y)
    return (B.y - A.y) / (B.x - A.x)


def _third(A, B, lam):
    x3 = lam * lam - A.x - B.x
    return AffinePoint(x3, lam * (A.x - x3) - A.y)


def point_add(C, P, Q):
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    lam = _slope(C, P, Q)
    if lam is None:
        return INFINITY
    return _third(P, Q, lam)


def point_double(C, P):
    return point_add(C, P, P)


def scalar_mul(C, n, P):
    if n < 0:
        return scalar_mul(C, -n, point_neg(C, P))
    R = INFINITY
    for bit in bin(n)[2:]:
        R = point_double(C, R)
        if bit == "1":
            R = point_add(C, R, P)
    return R


class Line:
    """``y - y0 - slope*(x - x0)``; vertical ``x - x0`` when slope is None;
    the constant 1 when x0 is None (the vertical at infinity)."""

    __slots__ = ("x0", "y0", "slope")

    def __init__(self, x0=None, y0=None, slope=None):
        self.x0 = x0
        self.y0 = y0
        self.slope = slope

    @property
    def is_one(self):
        return self.x0 is None

    @property
    def is_vertical(self):
        return self.x0 is not None and self.slope is None

    def __call__(self, Q):
        if self.x0 is None:
            return Q.x.field.one()
        if self.slope is None:
            return Q.x - self.x0
        return Q.y - self.y0 - self.slope * (Q.x - self.x0)

    def conjugate(self):
        """The mirror line through the negated points."""
        if self.x0 is None or self.slope is None:
            return self
        return Line(self.x0, -self.y0, -self.slope)


def vertical(A):
    return Line() if A.is_infinity else Line(A.x)


def line_through(C, A, B):
    if A.is_infinity and B.is_infinity:
        return Line()
    if A.is_infinity:
        return vertical(B)
    if B.is_infinity:
        return vertical(A)
    lam = _slope(C, A, B)
    if lam is None:
        return Line(A.x)
    return Line(A.x, A.y, lam)


def line_and_sum(C, A, B):
    """(L_{A,B}, A + B) sharing one slope computation."""
    line = line_through(C, A, B)
    if A.is_infinity:
        return line, B
    if B.is_infinity:
        return line, A
    if line.slope is None:
        return line, INFINITY
    return line, _third(A, B, line.slope)


def line_eval(C, A, B, Q):
    return line_through(C, A, B)(Q)


def vertical_eval(C, A, Q):
    return vertical(A)(Q)


@dataclass(frozen=True)
class DoubleAddTrace:
    result: AffinePoint
    lambda1: object
    lambda2: object
    x3: object


def double_add(C, T, P):
    """2T + P together with the two slopes and x(2T)."""
    if T.is_infinity or P.is_infinity:
        raise ValueError("double_add needs finite T and P")
    if T.y.is_zero():
        raise DegenerateSlope("tangent")
    lam1 = (3 * T.x * T.x + C.a) / (2 * T.y)
    x3 = lam1 * lam1 - 2 * T.x
    y3 = lam1 * (T.x - x3) - T.y
    if x3 == P.x:
        if y3 != P.y or y3.is_zero():
            raise DegenerateSlope("chord")
        lam2 = (3 * x3 * x3 + C.a) / (2 * y3)
    else:
        lam2 = (P.y - y3) / (P.x - x3)
    x4 = lam2 * lam2 - x3 - P.x
    y4 = lam2 * (P.x - x4) - P.y
    return DoubleAddTrace(AffinePoint(x4, y4), lam1, lam2, x3)


class Parabola:
    """(x - x1)(x + x1 + x3 + l1*l2) - (l1 + l2)(y - y1) for a double-add step."""

    __slots__ = ("x1", "y1", "c", "lin", "lam_sum")

    def __init__(self, trace, T):
        self.x1 = T.x
        self.y1 = T.y
        self.lin = trace.x3 + trace.lambda1 * trace.lambda2
        self.c = self.x1 + self.lin
        self.lam_sum = trace.lambda1 + trace.lambda2

    def __call__(self, Q, xx=None):
        # with x_Q^2 supplied, (x - x1)(x + c) = x^2 + (c - x1) x - x1 c needs no full product
        if xx is None:
            head = (Q.x - self.x1) * (Q.x + self.c)
        else:
            head = xx + self.lin * Q.x - self.x1 * self.c
        return head - self.lam_sum * (Q.y - self.y1)


def parabola_eval(trace, T, Q):
    return Parabola(trace, T)(Q)


def random_point(C, rng):
    """Uniform-ish finite point: random x until x^3 + ax + b is a square."""
    F = C.field
    while True:
        x = F.random(rng)
        g = C.rhs(x)
        if not g.is_square():
            continue
        y = g.sqrt()
        if rng.getrandbits(1):
            y = -y
        return AffinePoint(x, y)
