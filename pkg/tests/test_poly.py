import itertools
import random

import pytest
from conftest import brute_irreducible, field_of
from hypothesis import given, settings
from hypothesis import strategies as st

from ffstab.field import make_field
from ffstab.poly import (
    DegreeCapExceeded,
    Poly,
    compose,
    flint_available,
    format_poly,
    frobenius_power,
    gcd,
    is_irreducible,
    iterate,
    parse_poly,
    pow_mod,
    to_flint,
)

F5 = make_field(5)


def P(spec, *coeffs):
    return Poly(spec, list(coeffs))


def test_compose_examples():
    f = P(F5, -2, 0, 1)
    assert compose(f, Poly.x(F5)) == f
    g = P(F5, 2, 0, 1)
    assert compose(g, g) == P(F5, 1, 0, 4, 0, 1)
    c = Poly.constant(F5, 3)
    assert compose(f, c) == Poly.constant(F5, 3**2 - 2)


def test_iterate_examples():
    F3 = make_field(3)
    f = P(F3, 1, 0, 1)
    assert iterate(f, 2) == P(F3, 2, 0, 2, 0, 1)
    assert iterate(f, 1) == f
    F19 = make_field(19)
    f6 = iterate(Poly.binomial(F19, 2, 12), 6)
    assert f6.degree == 64 and f6[0].value == 5
    with pytest.raises(DegreeCapExceeded):
        iterate(f, 13)


def test_text_forms():
    assert format_poly(P(F5, 1, 0, 4, 0, 1)) == "x^4+4*x^2+1"
    assert parse_poly(F5, "x^4+4*x^2+1") == P(F5, 1, 0, 4, 0, 1)
    assert parse_poly(F5, "1,0,4,0,1") == P(F5, 1, 0, 4, 0, 1)
    assert parse_poly(F5, "2x^2-1") == P(F5, -1, 0, 2)
    F9 = make_field(3, 2)
    f = parse_poly(F9, "a^3*x^2+a")
    assert f[2] == F9.gen**3 and f[0] == F9.gen
    assert parse_poly(F9, format_poly(f)) == f


def test_divmod_and_gcd():
    F7 = make_field(7)
    rng = random.Random(1)
    for _ in range(50):
        a = Poly(F7, [rng.randrange(7) for _ in range(rng.randrange(1, 9))])
        b = Poly(F7, [rng.randrange(7) for _ in range(rng.randrange(1, 6))] + [1])
        qt, r = divmod(a, b)
        assert qt * b + r == a and r.degree < b.degree
    x = Poly.x(F7)
    assert gcd((x - 1) * (x - 2), (x - 2) * (x - 3)) == x - 2


def test_frobenius_examples():
    F3 = make_field(3)
    f = P(F3, 1, 0, 1)
    assert frobenius_power(F3, 0, f) == Poly.x(F3)
    assert frobenius_power(F3, 1, f) == P(F3, 0, 2)
    F9 = make_field(3, 2)
    c = F9.gen**5
    lin = Poly(F9, [-c, 1])
    for k in range(3):
        assert frobenius_power(F9, k, lin) == Poly.constant(F9, c)


def test_pow_mod_matches_plain():
    F9 = make_field(3, 2)
    f = Poly(F9, [F9.gen, 0, 1, 2, 1])
    h = Poly(F9, [1, F9.gen**3, 2])
    assert pow_mod(h, 13, f) == (h**13) % f


def test_is_irreducible_examples():
    F3 = make_field(3)
    assert is_irreducible(P(F3, 1, 0, 1))
    assert not is_irreducible(P(F5, -1, 0, 1))
    g = P(F5, 2, 0, 1)
    assert is_irreducible(g) and not is_irreducible(compose(g, g))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_is_irreducible_matches_trial_division(q):
    F = field_of(q)
    for n in (1, 2, 3):
        for tail in itertools.product(range(q), repeat=n):
            f = Poly(F, [F.element(i) for i in tail] + [F.one])
            assert is_irreducible(f) == brute_irreducible(f), f
    # non-monic inputs
    for lead in range(2, min(q, 4)):
        f = Poly(F, [F.one, F.root if F.e > 1 else F.one, F.element(lead)])
        assert is_irreducible(f) == brute_irreducible(f.monic())


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27])
def test_moduli_pass_is_irreducible(q):
    F = field_of(q)
    Fp = make_field(F.p)
    assert is_irreducible(Poly(Fp, list(F.modulus)))


@pytest.mark.skipif(not flint_available(), reason="python-flint missing")
@pytest.mark.parametrize("q,d,a", [(3, 2, 2), (8, 7, 3), (19, 2, 12), (27, 2, 5), (16, 5, 5)])
def test_native_and_flint_agree(q, d, a):
    F = field_of(q)
    f = Poly.binomial(F, d, F.element(a))
    g = f
    while g.degree <= 200:
        assert is_irreducible(g, backend="native") == is_irreducible(g, backend="flint")
        g = compose(f, g)


@pytest.mark.skipif(not flint_available(), reason="python-flint missing")
@pytest.mark.parametrize("q", [2, 5, 4, 8, 9, 16, 25])
def test_flint_route_matches_flint_fq(q):
    # the norm criterion against FLINT's own factoring-based test, including
    # f times its coefficient conjugate, which has a norm that is a perfect square
    F = field_of(q)
    rng = random.Random(q)
    els = [F.element(i) for i in range(q)]
    for deg in range(1, 7):
        for _ in range(25):
            f = Poly(F, [rng.choice(els) for _ in range(deg)] + [F.one])
            conj = Poly(F, [c**F.p for c in f.coeffs])
            for h in (f, f * conj, f * f):
                assert is_irreducible(h, backend="flint") == bool(to_flint(h).is_irreducible()), h


coeff_lists = st.lists(st.integers(0, 24), min_size=2, max_size=5)


@settings(max_examples=60, deadline=None)
@given(coeff_lists, coeff_lists, coeff_lists)
def test_composition_properties(a, b, c):
    F25 = make_field(5, 2)
    f, g, h = (Poly(F25, [F25.element(i) for i in cs]) for cs in (a, b, c))
    if f.degree >= 1 and g.degree >= 1:
        assert compose(f, g).degree == f.degree * g.degree
    assert compose(compose(f, g), h) == compose(f, compose(g, h))
    assert compose(f + g, h) == compose(f, h) + compose(g, h)
    assert compose(f * g, h) == compose(f, h) * compose(g, h)


@pytest.mark.parametrize("q,d,a", [(5, 2, 3), (9, 2, 4), (7, 3, 2), (4, 3, 2)])
def test_iterate_splits(q, d, a):
    F = field_of(q)
    f = Poly.binomial(F, d, F.element(a))
    for m in (1, 2):
        for n in (1, 2):
            assert iterate(f, m + n) == compose(iterate(f, m), iterate(f, n))


def test_kronecker_matches_schoolbook():
    from ffstab.poly import _KRONECKER_MIN, _mul

    rng = random.Random(7)
    for q in (2, 3, 8, 9, 25, 27):
        F = field_of(q)
        a = [rng.randrange(q) for _ in range(3 * _KRONECKER_MIN)]
        b = [rng.randrange(q) for _ in range(2 * _KRONECKER_MIN)]
        slow = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                slow[i + j] = (F.element(slow[i + j]) + F.element(x) * F.element(y)).value
        assert list(_mul(F, a, b)) == slow
