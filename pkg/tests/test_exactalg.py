from fractions import Fraction as F

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hcolor.exactalg import (
    DistinctnessError,
    DivisionDomainError,
    Poly,
    PreconditionError,
    RationalInterval,
    char_poly,
    closed_root_count,
    discriminant,
    format_rational,
    isolate_real_roots,
    parse_rational,
    poly_eval,
    refine_root,
    squarefree_part,
    sturm_root_count,
    vandermonde_coefficients,
    vieta_reduce,
)
from hcolor.orbits import structural_orbits_T

I = RationalInterval


def f_T(x, y, z):
    return Poly([x * z, 0, -(x + y + z), 0, 1])


F_HAT = Poly([320000, 803, -1203, -1, 1])
CUBIC_H = Poly([84378752000000, 211737930800, 47344149200, -5066563600])


# -- polynomials ------------------------------------------------------------

def test_poly_arithmetic_and_printing():
    p = Poly([1, 2, 3])
    q = Poly([0, 1])
    assert p * q == Poly([0, 1, 2, 3])
    assert (p + q) - q == p
    quo, rem = divmod(p, q)
    assert quo * q + rem == p
    assert str(f_T(7, 1, 9)) == "t^4 - 17*t^2 + 63"
    assert Poly([0, 0]).is_zero()


@pytest.mark.parametrize("x,y,z", [(7, 1, 9), (18, 3, 32), (1, 1, 1), (4, 2, 5)])
def test_char_poly_of_T(x, y, z):
    assert char_poly(structural_orbits_T(x, y, z).quotient) == f_T(x, y, z)


def test_char_poly_examples():
    assert char_poly(structural_orbits_T(400, 3, 800, True).quotient) == F_HAT
    assert char_poly([[0, 1], [1, 0]]) == Poly([-1, 0, 1])


def test_char_poly_rejects_non_square():
    with pytest.raises(ValueError):
        char_poly([[1, 2, 3], [4, 5, 6]])


def _matmul(A, B):
    return [[sum(A[i][l] * B[l][j] for l in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda k: st.lists(st.lists(st.integers(-6, 6), min_size=k, max_size=k), min_size=k, max_size=k)
))
def test_cayley_hamilton(M):
    k = len(M)
    p = char_poly(M)
    acc = [[F(0)] * k for _ in range(k)]
    power = [[F(int(i == j)) for j in range(k)] for i in range(k)]
    for c in p.coeffs:
        acc = [[acc[i][j] + c * power[i][j] for j in range(k)] for i in range(k)]
        power = _matmul(power, M)
    assert all(v == 0 for row in acc for v in row)
    t = sympy.symbols("t")
    ref = sympy.Matrix(M).charpoly(t).all_coeffs()[::-1]
    assert list(p.coeffs) == [F(int(c)) for c in ref]


def test_squarefree_part():
    p = Poly([-1, 0, 1]) * Poly([-1, 0, 1]) * Poly([0, 1])
    assert squarefree_part(p) == Poly([0, -1, 0, 1])


# -- sturm counting ---------------------------------------------------------

def test_sturm_examples():
    assert sturm_root_count(Poly([-1, 0, 1]), I(0, 2)) == 1
    assert sturm_root_count(f_T(7, 1, 9), I(F("2.3363"), F("2.3364"))) == 1
    assert sturm_root_count(F_HAT, I(F("28.393"), F("28.394"))) == 1


def test_sturm_half_open():
    p = Poly([-1, 0, 1])
    assert sturm_root_count(p, I(-1, 0)) == 0
    assert sturm_root_count(p, I(-2, -1)) == 1
    assert closed_root_count(p, I(-1, 0)) == 1


def test_sturm_repeated_roots_counted_once():
    p = Poly([-1, 1]) * Poly([-1, 1]) * Poly([2, 1])
    assert sturm_root_count(p, I(-10, 10)) == 2


def test_sturm_rejects_zero():
    with pytest.raises(ValueError):
        sturm_root_count(Poly([]), I(0, 1))


# -- isolation --------------------------------------------------------------

def test_isolate_t2_minus_1():
    roots = isolate_real_roots(Poly([-1, 0, 1]), F(1, 1000))
    assert len(roots) == 2
    assert -1 in roots[0] and 1 in roots[1]
    assert all(r.width <= F(1, 1000) for r in roots)


def test_isolate_f_7_1_9_reproduces_brackets():
    roots = isolate_real_roots(f_T(7, 1, 9), F(1, 10**4))
    assert len(roots) == 4
    assert roots[2].to_pair() == [format_rational(F("2.3363")), format_rational(F("2.3364"))]
    assert roots[3].to_pair() == [format_rational(F("3.3972")), format_rational(F("3.3973"))]


def test_isolate_f_hat_sign_table():
    roots = isolate_real_roots(F_HAT, F(1, 1000))
    expected = [("-28.386", "-28.385"), ("-19.436", "-19.435"), ("20.428", "20.429"), ("28.393", "28.394")]
    for r, (lo, hi) in zip(roots, expected):
        assert F(lo) <= r.lo and r.hi <= F(hi)
    assert F_HAT(F("28.394")) > 0 > F_HAT(F("28.393"))
    assert F_HAT(F("20.429")) < 0 < F_HAT(F("20.428"))


def test_isolate_rejects_zero_polynomial():
    with pytest.raises(ValueError):
        isolate_real_roots(Poly([]), F(1, 10))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(-20, 20), min_size=1, max_size=5),
    st.integers(-3, 3).filter(lambda c: c != 0),
    st.sampled_from([F(1, 10), F(1, 1000), F(1, 10**6)]),
)
def test_isolation_properties(roots, scale, width):
    p = Poly([scale])
    for r in roots:
        p = p * Poly([-F(r, 3), 1])
    p = p * Poly([1, 0, 1])  # a complex pair that must be ignored
    found = isolate_real_roots(p, width)
    assert len(found) == len(set(roots))
    sq = squarefree_part(p)
    for a, b in zip(found, found[1:]):
        assert a.hi < b.lo
    for J in found:
        assert J.width <= width
        assert closed_root_count(sq, J) == 1
        if J.width:
            assert sq(J.lo) * sq(J.hi) <= 0
    for r in set(roots):
        assert sum(F(r, 3) in J for J in found) == 1


def test_refine_root():
    J = refine_root(f_T(7, 1, 9), I(3, 4), F(1, 10**12))
    assert J.width <= F(1, 10**12)
    with pytest.raises(PreconditionError):
        refine_root(f_T(7, 1, 9), I(-4, 4), F(1, 10))


def sqrt_enclosure(J, width):
    """Enclose sqrt over a nonnegative interval by isolating endpoint square roots."""
    lo = isolate_real_roots(Poly([-J.lo, 0, 1]), width)[-1].lo if J.lo > 0 else F(0)
    hi = isolate_real_roots(Poly([-J.hi, 0, 1]), width)[-1].hi
    return I(lo, hi)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.integers(1, 40), st.integers(1, 40))
def test_closed_form_roots_of_f(x, y, z):
    s = x + y + z
    disc = s * s - 4 * x * z
    assert disc > (x - z) ** 2
    roots = isolate_real_roots(f_T(x, y, z), F(1, 10**4))
    assert len(roots) == 4
    mu, lam = roots[2], roots[3]
    assert lam.lo > mu.hi and mu.lo > 0
    r = sqrt_enclosure(I(disc), F(1, 10**12))
    lam_cf = sqrt_enclosure((s + r) / 2, F(1, 10**12))
    mu_cf = sqrt_enclosure((s - r) / 2, F(1, 10**12))
    assert lam_cf.overlaps(lam) and not lam_cf.overlaps(mu)
    assert mu_cf.overlaps(mu) and not mu_cf.overlaps(lam)


# -- intervals --------------------------------------------------------------

def test_interval_examples():
    assert I(1, 2) * I(-1, 3) == I(-2, 6)
    with pytest.raises(DivisionDomainError):
        I(1, 2) / I(0, 1)
    with pytest.raises(ValueError):
        I(2, 1)


def test_poly_eval_encloses_samples():
    p = Poly([-17, 0, 1])
    J = I(F("2.3363"), F("2.3364"))
    E = poly_eval(p, J)
    samples = [p(J.lo + J.width * F(k, 100)) for k in range(101)]
    assert E.lo <= min(samples) and max(samples) <= E.hi


def test_interval_even_power_straddling_zero():
    assert I(-2, 1) ** 2 == I(0, 4)
    assert abs(I(-3, 1)) == I(0, 3)


fractions = st.fractions(min_value=-50, max_value=50, max_denominator=60)


@st.composite
def intervals_with_point(draw):
    a, b = sorted((draw(fractions), draw(fractions)))
    t = a + (b - a) * draw(st.fractions(min_value=0, max_value=1, max_denominator=30))
    return I(a, b), t


@settings(max_examples=200, deadline=None)
@given(intervals_with_point(), intervals_with_point(), st.sampled_from("+-*/^"))
def test_interval_soundness(A, B, op):
    (X, s), (Y, t) = A, B
    if op == "+":
        assert s + t in X + Y
    elif op == "-":
        assert s - t in X - Y
    elif op == "*":
        assert s * t in X * Y
    elif op == "^":
        assert s**3 in X**3 and s**2 in X**2
    else:
        assume(not Y.contains_zero())
        assert s / t in X / Y


@settings(max_examples=100, deadline=None)
@given(intervals_with_point(), st.lists(st.integers(-9, 9), min_size=1, max_size=5))
def test_poly_eval_soundness(A, coeffs):
    X, s = A
    p = Poly(coeffs)
    assert p(s) in poly_eval(p, X)


# -- vandermonde, vieta, discriminant ----------------------------------------

def test_vandermonde_simple():
    assert vandermonde_coefficients([I(1), I(-1)], [2, 0]) == [I(1), I(1)]


def test_vandermonde_overlap_rejected():
    with pytest.raises(DistinctnessError):
        vandermonde_coefficients([I(1, 2), I(F(3, 2), 3)], [1, 1])


@settings(max_examples=60, deadline=None)
@given(st.lists(fractions, min_size=1, max_size=4, unique=True), st.data())
def test_vandermonde_exact_points(nodes, data):
    k = len(nodes)
    values = data.draw(st.lists(st.integers(-1000, 1000), min_size=k, max_size=k))
    c = vandermonde_coefficients([I(v) for v in nodes], values)
    assert all(ci.width == 0 for ci in c)
    for n in range(k):
        assert sum(ci.lo * nodes[i] ** n for i, ci in enumerate(c)) == values[n]
    ref = sympy.Matrix(k, k, lambda n, i: sympy.Rational(nodes[i].numerator, nodes[i].denominator) ** n)
    sol = ref.LUsolve(sympy.Matrix(values))
    assert [F(int(v.p), int(v.q)) for v in sol] == [ci.lo for ci in c]


def test_vandermonde_odd_coefficient_bound():
    f = f_T(7, 1, 9)
    roots = isolate_real_roots(f, F(1, 10**4))
    mu, lam = roots[2], roots[3]
    c, _d = vandermonde_coefficients([lam**2, mu**2], [9366, 106302])
    c_odd = c / lam
    assert c_odd.lo >= F(229896697436000, 86112348317)
    assert c_odd.lo > 2669


def test_vieta_examples():
    p = Poly([4, 0, -5, 0, 1])
    r = vieta_reduce(p, I(2))
    assert (r.total, r.product, r.pair_sum) == (I(-2), I(2), I(-1))
    lam1 = I(F("28.393"), F("28.394"))
    assert vieta_reduce(F_HAT, lam1).total == I(1 - F("28.394"), 1 - F("28.393"))
    with pytest.raises(PreconditionError):
        vieta_reduce(p, I(0, 3))


def test_discriminant_examples():
    assert discriminant(Poly([0, -1, 0, 1])) == 4
    assert discriminant(Poly([0, 1, 0, 1])) == -4
    assert discriminant(CUBIC_H) < 0
    with pytest.raises(ValueError):
        discriminant(Poly([1, 0, 1]))


def test_rational_text_round_trip():
    for text in ("229896697436000/86112348317", "-3/7", "5/1"):
        assert format_rational(parse_rational(text)) == text
    assert parse_rational("2.3363") == F(23363, 10000)
