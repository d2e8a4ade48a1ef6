"""Prime fields F_p and flat extensions F_p[x]/(f(x)).

Extension elements count their own multiplications, squarings and
inversions when a counter is attached to their field (see
``ExtField.counting``).  Scalar operations against base-field values are
never counted.
"""
from contextlib import contextmanager
from functools import cached_property

from sympy import isprime, primefactors


class FieldMismatch(TypeError):
    """Operands belong to different fields."""


class PrimeField:
    def __init__(self, p, check=True):
        if check and (p <= 3 or not isprime(p)):
            raise ValueError("modulus must be a prime > 3, got %d" % p)
        self.p = p
        self.k = 1

    def __call__(self, value):
        if isinstance(value, Fp):
            _same(self, value.field)
            return value
        return Fp(value % self.p, self)

    def zero(self):
        return Fp(0, self)

    def one(self):
        return Fp(1, self)

    def random(self, rng):
        return Fp(rng.randrange(self.p), self)

    @property
    def order(self):
        return self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return "PrimeField(%d)" % self.p


def _same(f, g):
    if f is not g and f != g:
        raise FieldMismatch("%r vs %r" % (f, g))


class Fp:
    """Residue modulo p, always kept in [0, p)."""

    __slots__ = ("value", "field")

    def __init__(self, value, field):
        self.value = value
        self.field = field

    def _coerce(self, other):
        if isinstance(other, Fp):
            _same(self.field, other.field)
            return other.value
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp((self.value + o) % self.field.p, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp((self.value - o) % self.field.p, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp((o - self.value) % self.field.p, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp(self.value * o % self.field.p, self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * Fp(o % self.field.p, self.field).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.inverse() * o

    def __neg__(self):
        return Fp(-self.value % self.field.p, self.field)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** -e
        return Fp(pow(self.value, e, self.field.p), self.field)

    def square(self):
        return self * self

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.field.p)
        return Fp(pow(self.value, -1, self.field.p), self.field)

    def is_zero(self):
        return self.value == 0

    def is_one(self):
        return self.value == 1

    def is_square(self):
        return self.value == 0 or pow(self.value, (self.field.p - 1) // 2, self.field.p) == 1

    def sqrt(self):
        return tonelli_shanks(self)

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.value == other.value and self.field.p == other.field.p
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __int__(self):
        return self.value

    def __repr__(self):
        return "Fp(%d)" % self.value


# --- polynomial helpers over F_p; lists of ints, constant term first -------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_divmod(a, b, p):
    a = [x % p for x in a]
    _trim(a)
    b = _trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    db = len(b) - 1
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        q[shift] = c
        for i in range(db + 1):
            a[shift + i] = (a[shift + i] - c * b[i]) % p
        _trim(a)
    return _trim(q), a


def poly_gcd(a, b, p):
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    while b:
        a, b = b, poly_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def poly_mulmod(a, b, mod, p):
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    return poly_divmod(prod, mod, p)[1]


def poly_powmod(a, e, mod, p):
    result = [1]
    base = poly_divmod(a, mod, p)[1]
    while e:
        if e & 1:
            result = poly_mulmod(result, base, mod, p)
        base = poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _frobenius_matrix(xp, mod, p, k):
    """Columns are (x^p)^j mod f, j = 0..k-1: the p-power map in the monomial basis.

    Columns are kept sparse as (row, coeff) pairs; for binomial moduli the
    map is diagonal and applying it costs k products.
    """
    cols = [((0, 1),)]
    cur = [1]
    for _ in range(1, k):
        cur = poly_mulmod(cur, xp, mod, p)
        cols.append(tuple((i, c) for i, c in enumerate(cur) if c))
    return cols


def _apply(cols, v, p):
    out = [0] * len(cols)
    for vj, col in zip(v, cols):
        if vj:
            for i, c in col:
                out[i] += vj * c
    return [x % p for x in out]


def is_irreducible(modulus, p):
    """Rabin's test for a monic polynomial (constant term first)."""
    mod = _trim([c % p for c in modulus])
    k = len(mod) - 1
    if k < 1 or mod[-1] != 1:
        return False
    if k == 1:
        return True
    xp = poly_powmod([0, 1], p, mod, p)
    cols = _frobenius_matrix(xp, mod, p, k)
    # x^(p^j) for j = 0..k
    powers = [[0, 1] + [0] * (k - 2)]
    for _ in range(k):
        powers.append(_apply(cols, powers[-1], p))
    x = [0, 1] + [0] * (k - 2)
    if powers[k] != x:
        return False
    for q in primefactors(k):
        diff = [(a - b) % p for a, b in zip(powers[k // q], x)]
        if len(poly_gcd(diff, mod, p)) != 1:
            return False
    return True


class ExtField:
    """F_p[x]/(f) for a monic irreducible f of degree k.

    ``modulus`` lists the k+1 coefficients of f, constant term first.
    """

    def __init__(self, base, modulus, check=True):
        if not isinstance(base, PrimeField):
            base = PrimeField(base, check=check)
        p = base.p
        modulus = [int(c) % p for c in modulus]
        k = len(modulus) - 1
        if k < 1 or modulus[-1] != 1:
            raise ValueError("modulus polynomial must be monic of degree >= 1")
        if check and not is_irreducible(modulus, p):
            raise ValueError("modulus polynomial is reducible over F_%d" % p)
        self.base = base
        self.p = p
        self.k = k
        self.modulus = tuple(modulus)
        # x^k = -sum(c_i x^i); keep only the non-zero tail terms
        self._tail = tuple((i, (-c) % p) for i, c in enumerate(modulus[:k]) if c)
        self.counter = None
        self._zero = ExtElement((0,) * k, self)
        self._one = ExtElement((1,) + (0,) * (k - 1), self)

    def __call__(self, value):
        if isinstance(value, ExtElement):
            _same(self, value.field)
            return value
        if isinstance(value, Fp):
            _same(self.base, value.field)
            value = value.value
        if isinstance(value, int):
            return ExtElement((value % self.p,) + (0,) * (self.k - 1), self)
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.k:
            raise ValueError("too many coefficients for degree %d" % self.k)
        return ExtElement(tuple(coeffs) + (0,) * (self.k - len(coeffs)), self)

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def gen(self):
        return self([0, 1])

    def random(self, rng):
        return ExtElement(tuple(rng.randrange(self.p) for _ in range(self.k)), self)

    @property
    def order(self):
        return self.p ** self.k

    @contextmanager
    def counting(self, counter):
        """Tally M/S/I on ``counter`` for every counted op inside the block."""
        previous = self.counter
        self.counter = counter
        try:
            yield counter
        finally:
            self.counter = previous

    @cached_property
    def frobenius_table(self):
        xp = poly_powmod([0, 1], self.p, list(self.modulus), self.p)
        return _frobenius_matrix(xp, list(self.modulus), self.p, self.k)

    @cached_property
    def frobenius_half_table(self):
        if self.k % 2:
            raise ValueError("half Frobenius needs an even extension degree")
        cols = self.frobenius_table
        x = [0, 1] + [0] * (self.k - 2)
        for _ in range(self.k // 2):
            x = _apply(cols, x, self.p)
        return _frobenius_matrix(x, list(self.modulus), self.p, self.k)

    def __eq__(self, other):
        return isinstance(other, ExtField) and other.p == self.p and other.modulus == self.modulus

    def __hash__(self):
        return hash(("Fpk", self.p, self.modulus))

    def __repr__(self):
        return "ExtField(p=%d, k=%d)" % (self.p, self.k)

    # raw coefficient arithmetic, never counted

    def _reduce(self, c):
        k, p = self.k, self.p
        for d in range(len(c) - 1, k - 1, -1):
            t = c[d]
            if t:
                for i, ci in self._tail:
                    c[d - k + i] += t * ci
        return tuple(x % p for x in c[:k])

    def _mul(self, a, b):
        k = self.k
        c = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    c[i + j] += ai * bj
        return self._reduce(c)

    def _sqr(self, a):
        k = self.k
        c = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                c[2 * i] += ai * ai
                ai2 = ai << 1
                for j in range(i + 1, k):
                    c[i + j] += ai2 * a[j]
        return self._reduce(c)

    def _inv(self, a):
        p = self.p
        # fraction-free extended Euclid on (f, a), keeping s_i * a = r_i (mod f);
        # scaling rows by leading coefficients avoids one inversion per step
        r0, r1 = list(self.modulus), _trim(list(a))
        if not r1:
            raise ZeroDivisionError("inverse of zero in F_p^%d" % self.k)
        s0, s1 = [], [1]
        while len(r1) > 1:
            c1 = r1[-1]
            n1 = len(r1)
            while len(r0) >= n1:
                c0 = r0[-1]
                d = len(r0) - n1
                r0 = [c1 * x for x in r0]
                for i, y in enumerate(r1):
                    r0[d + i] -= c0 * y
                r0 = _trim([x % p for x in r0])
                size = max(len(s0), len(s1) + d)
                s = [c1 * x for x in s0] + [0] * (size - len(s0))
                for i, y in enumerate(s1):
                    s[d + i] -= c0 * y
                s0 = _trim([x % p for x in s])
            if not r0:
                raise ZeroDivisionError("element not invertible: modulus is reducible")
            r0, r1, s0, s1 = r1, r0, s1, s0
        inv_c = pow(r1[0], -1, p)
        s = [x * inv_c % p for x in s1]
        if len(s) > self.k:
            s = list(poly_divmod(s, list(self.modulus), p)[1])
        return tuple(s) + (0,) * (self.k - len(s))

    def _pow(self, a, e):
        result = self._one.coeffs
        base = a
        for bit in bin(e)[2:]:
            result = self._sqr(result)
            if bit == "1":
                result = self._mul(result, base)
        return result


class ExtElement:
    """Element of F_p^k stored as a tuple of k integer coefficients."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, field):
        self.coeffs = coeffs
        self.field = field

    def _scalar(self, other):
        if isinstance(other, Fp):
            _same(self.field.base, other.field)
            return other.value
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        if isinstance(other, ExtElement):
            _same(self.field, other.field)
            p = self.field.p
            return ExtElement(tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)), self.field)
        s = self._scalar(other)
        if s is None:
            return NotImplemented
        c = self.coeffs
        return ExtElement(((c[0] + s) % self.field.p,) + c[1:], self.field)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ExtElement):
            _same(self.field, other.field)
            p = self.field.p
            return ExtElement(tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)), self.field)
        s = self._scalar(other)
        if s is None:
            return NotImplemented
        c = self.coeffs
        return ExtElement(((c[0] - s) % self.field.p,) + c[1:], self.field)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p = self.field.p
        return ExtElement(tuple(-a % p for a in self.coeffs), self.field)

    def __mul__(self, other):
        if isinstance(other, ExtElement):
            _same(self.field, other.field)
            counter = self.field.counter
            if counter is not None:
                counter.M += 1
            return ExtElement(self.field._mul(self.coeffs, other.coeffs), self.field)
        s = self._scalar(other)
        if s is None:
            return NotImplemented
        p = self.field.p
        return ExtElement(tuple(a * s % p for a in self.coeffs), self.field)

    __rmul__ = __mul__

    def square(self):
        counter = self.field.counter
        if counter is not None:
            counter.S += 1
        return ExtElement(self.field._sqr(self.coeffs), self.field)

    def inverse(self):
        counter = self.field.counter
        if counter is not None:
            counter.I += 1
        return ExtElement(self.field._inv(self.coeffs), self.field)

    def __truediv__(self, other):
        if isinstance(other, ExtElement):
            return self * other.inverse()
        s = self._scalar(other)
        if s is None:
            return NotImplemented
        return self * pow(s, -1, self.field.p)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e):
        """Uncounted square-and-multiply; negative exponents invert once."""
        if e < 0:
            return ExtElement(self.field._inv(self.coeffs), self.field) ** -e
        return ExtElement(self.field._pow(self.coeffs, e), self.field)

    def frobenius(self, times=1):
        """v -> v^(p^times) through the precomputed linear map."""
        cols = self.field.frobenius_table
        c = list(self.coeffs)
        for _ in range(times % self.field.k):
            c = _apply(cols, c, self.field.p)
        return ExtElement(tuple(c), self.field)

    def conjugate(self):
        """v -> v^(p^(k/2)), the conjugate over the half-degree subfield."""
        table = self.field.frobenius_half_table
        counter = self.field.counter
        if counter is not None:
            counter.frobenius += 1
        return ExtElement(tuple(_apply(table, self.coeffs, self.field.p)), self.field)

    def norm(self):
        """Product of all Frobenius conjugates; lands in F_p."""
        acc = self.coeffs
        cur = list(self.coeffs)
        f = self.field
        for _ in range(f.k - 1):
            cur = _apply(f.frobenius_table, cur, f.p)
            acc = f._mul(acc, cur)
        return f.base(acc[0])

    def is_zero(self):
        return not any(self.coeffs)

    def is_one(self):
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def is_square(self):
        # v is a square in F_q iff its norm is a square in F_p (p odd)
        return self.is_zero() or self.norm().is_square()

    def sqrt(self):
        return tonelli_shanks(self)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, ExtElement):
            return self.coeffs == other.coeffs and self.field == other.field
        s = self._scalar(other)
        if s is None:
            return NotImplemented
        return self.coeffs[0] == s % self.field.p and not any(self.coeffs[1:])

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "ExtElement(%r)" % (list(self.coeffs),)


def tonelli_shanks(a):
    """Square root in F_p or F_p^k; raises ValueError on non-residues."""
    field = a.field
    if a.is_zero():
        return a
    if not a.is_square():
        raise ValueError("not a quadratic residue")
    q = field.order
    if q % 4 == 3:
        root = a ** ((q + 1) // 4)
    else:
        s, m = 0, q - 1
        while m % 2 == 0:
            s, m = s + 1, m // 2
        z = _non_residue(field)
        c = z ** m
        x = a ** ((m + 1) // 2)
        t = a ** m
        while not t.is_one():
            i, t2 = 0, t
            while not t2.is_one():
                t2 = t2 * t2
                i += 1
            b = c ** (1 << (s - i - 1))
            x = x * b
            c = b * b
            t = t * c
            s = i
        root = x
    assert root * root == a
    return root


def _non_residue(field):
    # deterministic scan keeps square roots reproducible
    if isinstance(field, PrimeField):
        candidates = (field(n) for n in range(2, field.p))
    else:
        g = field.gen()
        candidates = (g + n for n in range(field.p))
    for z in candidates:
        if not z.is_square():
            return z
    raise ValueError("no quadratic non-residue found")


def final_exponentiation(f, r):
    """Raise f to (p^k - 1)/r by plain square-and-multiply."""
    q = f.field.order
    if r <= 0 or (q - 1) % r:
        raise ValueError("r = %d does not divide p^k - 1" % r)
    if f.is_zero():
        raise ValueError("final exponentiation of zero")
    return f ** ((q - 1) // r)
