import pytest
from conftest import enumerate_points

from pairing_miller.curve import (
    INFINITY,
    AffinePoint,
    Curve,
    DegenerateSlope,
    double_add,
    line_eval,
    on_curve,
    parabola_eval,
    point_add,
    point_double,
    point_neg,
    random_point,
    scalar_mul,
    vertical_eval,
)
from pairing_miller.field import PrimeField
from pairing_miller.pairing import point_pool
from pairing_miller.suites import identity_suite

F11 = PrimeField(11)
E11 = Curve(F11(1), F11(0))


def test_on_curve_examples():
    assert on_curve(E11, INFINITY)
    assert on_curve(E11, AffinePoint(F11(0), F11(0)))
    assert not on_curve(E11, AffinePoint(F11(1), F11(1)))


def test_singular_curve_rejected():
    with pytest.raises(ValueError):
        Curve(F11(0), F11(0))


def test_group_law_basics(toy11_points):
    P = toy11_points[3]
    assert point_add(E11, P, INFINITY) == P
    assert point_add(E11, INFINITY, P) == P
    assert point_add(E11, P, point_neg(E11, P)) == INFINITY
    assert point_neg(E11, P) == AffinePoint(P.x, -P.y)
    assert point_double(E11, AffinePoint(F11(0), F11(0))) == INFINITY


def test_toy11_order_is_twelve(toy11_points):
    assert len(toy11_points) + 1 == 12
    for P in toy11_points:
        assert scalar_mul(E11, 12, P) == INFINITY
        assert scalar_mul(E11, 0, P) == INFINITY
        assert scalar_mul(E11, 1, P) == P


def test_associativity_exhaustive(toy11_points):
    pts = toy11_points + [INFINITY]
    table = {(i, j): point_add(E11, A, B) for i, A in enumerate(pts) for j, B in enumerate(pts)}
    for i, A in enumerate(pts):
        for j, B in enumerate(pts):
            assert table[i, j] == table[j, i]
            for C in pts:
                assert point_add(E11, table[i, j], C) == point_add(E11, A, point_add(E11, B, C))


def test_scalar_mul_additive(bn, rng):
    P = random_point(bn.curve, rng)
    for _ in range(20):
        m, n = rng.randrange(1 << 64), rng.randrange(1 << 64)
        assert scalar_mul(bn.curve, m + n, P) == point_add(bn.curve, scalar_mul(bn.curve, m, P), scalar_mul(bn.curve, n, P))


def test_double_add_matches_group_law(toy19, rng):
    C = toy19.ext_curve
    done = 0
    while done < 100:
        T, P = random_point(C, rng), random_point(C, rng)
        try:
            tr = double_add(C, T, P)
        except DegenerateSlope:
            continue
        T2 = point_double(C, T)
        assert tr.result == point_add(C, T2, P)
        assert tr.x3 == T2.x
        done += 1


def test_double_add_degenerate_chord(toy19, rng):
    C = toy19.curve
    while True:
        T = random_point(C, rng)
        T2 = point_double(C, T)
        if not T2.is_infinity:
            break
    with pytest.raises(DegenerateSlope) as exc:
        double_add(C, T, point_neg(C, T2))
    assert exc.value.line == "chord"
    two_torsion = AffinePoint(toy19.Fp(0), toy19.Fp(0))
    with pytest.raises(DegenerateSlope) as exc:
        double_add(C, two_torsion, T)
    assert exc.value.line == "tangent"


def test_line_conventions(toy19, rng):
    C = toy19.ext_curve
    A, B, Q = random_point(C, rng), random_point(C, rng), random_point(C, rng)
    assert line_eval(C, A, B, A).is_zero()
    assert line_eval(C, A, B, B).is_zero()
    assert line_eval(C, A, point_neg(C, A), Q) == Q.x - A.x
    assert line_eval(C, INFINITY, INFINITY, Q).is_one()
    assert line_eval(C, A, INFINITY, Q) == vertical_eval(C, A, Q)
    assert vertical_eval(C, A, A).is_zero()
    assert vertical_eval(C, INFINITY, Q).is_one()
    assert vertical_eval(C, A, Q) == vertical_eval(C, point_neg(C, A), Q)
    # tangent: monic in y, slope (3x^2 + a)/2y
    lam = (3 * A.x * A.x + C.a) / (2 * A.y)
    assert line_eval(C, A, A, Q) == Q.y - A.y - lam * (Q.x - A.x)


def test_parabola_zeros(toy19, rng):
    C = toy19.ext_curve
    done = 0
    while done < 50:
        T, P = random_point(C, rng), random_point(C, rng)
        try:
            tr = double_add(C, T, P)
        except DegenerateSlope:
            continue
        assert parabola_eval(tr, T, T).is_zero()
        assert parabola_eval(tr, T, P).is_zero()
        assert parabola_eval(tr, T, point_neg(C, tr.result)).is_zero()
        done += 1


@pytest.mark.parametrize("name", ["toy11", "toy19", "bn"])
def test_parabola_identity(name, request, rng):
    ctx = request.getfixturevalue(name)
    C = ctx.ext_curve
    pool = point_pool(ctx, rng, 40) if name == "bn" else [random_point(C, rng) for _ in range(40)]
    done = 0
    while done < (200 if name == "bn" else 1000):
        T, P, Q = rng.choice(pool), rng.choice(pool), rng.choice(pool)
        try:
            tr = double_add(C, T, P)
        except DegenerateSlope:
            continue
        T2 = point_double(C, T)
        lhs = parabola_eval(tr, T, Q) * vertical_eval(C, T2, Q)
        assert lhs == line_eval(C, T, T, Q) * line_eval(C, T2, P, Q)
        done += 1


@pytest.mark.parametrize("name", ["toy11", "toy19"])
def test_line_identities_toy(name, request, rng):
    res = identity_suite(request.getfixturevalue(name), 1000, rng)
    assert res.passed, res.counterexample
    assert res.details["counts"] == {"line_pair": 1000, "tangent_pair": 1000, "parabola": 1000}


def test_line_pair_sign_is_plus_exhaustively(toy11, toy11_ext_points):
    """With lines monic in y the product of a line and its mirror is +V V V."""
    C = toy11.ext_curve
    pts = toy11_ext_points
    for A in pts[::7]:
        for B in pts[::11]:
            S = point_add(C, A, B)
            for Q in pts[::13]:
                lhs = line_eval(C, A, B, Q) * line_eval(C, point_neg(C, A), point_neg(C, B), Q)
                rhs = vertical_eval(C, A, Q) * vertical_eval(C, B, Q) * vertical_eval(C, S, Q)
                assert lhs == rhs


def test_enumerated_toy_points_match_random_sampler(toy11, rng):
    pts = enumerate_points(toy11.curve, [toy11.Fp(i) for i in range(11)])
    for _ in range(20):
        assert random_point(toy11.curve, rng) in pts
