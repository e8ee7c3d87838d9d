import itertools

import pytest

from ffstab.field import make_field
from ffstab.poly import Poly

SMALL_QS = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27)


def field_of(q):
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23):
        e, n = 0, q
        while n % p == 0:
            n //= p
            e += 1
        if n == 1 and e:
            return make_field(p, e)
    raise ValueError(q)


def brute_power_set(spec, k):
    """{b^k : b != 0} by enumeration."""
    return {(b**k).value for b in spec.nonzero()}


def brute_order(a):
    t, x = 1, a
    while not x.is_one():
        x = x * a
        t += 1
    return t


def monic_polys(spec, n):
    for tail in itertools.product(range(spec.q), repeat=n):
        yield Poly(spec, [spec.element(i) for i in tail] + [spec.one])


def brute_irreducible(f):
    """Trial division by every monic polynomial of degree 1..deg f // 2."""
    n = f.degree
    for k in range(1, n // 2 + 1):
        for g in monic_polys(f.spec, k):
            if not (f % g):
                return False
    return True


@pytest.fixture(scope="session")
def fields():
    return {q: field_of(q) for q in SMALL_QS}
