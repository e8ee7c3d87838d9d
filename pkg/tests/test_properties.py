"""Exhaustive property checks over small fields.

Each check_* returns a list of violations (empty when the property holds);
the acceptance suite reuses them.
"""

from math import gcd

import pytest
from conftest import brute_order, brute_power_set, field_of

from ffstab import table as tbl
from ffstab.field import (
    element_order,
    embed,
    is_lth_power,
    is_power,
    make_field,
    norm_to_subfield,
    prime_factors,
)
from ffstab.oracle import _max_iterate, constant_term_identity
from ffstab.poly import Poly, is_irreducible
from ffstab.stability import (
    binomial_irreducible_lang,
    binomial_irreducible_order,
    critical_orbit,
    stability_verdict,
    transform_suite,
)

PRIME_POWERS = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27)
ODD_QS = tuple(q for q in PRIME_POWERS if q % 2)
CRITERIA_DS = (2, 3, 5, 6, 7, 9, 10)


def check_criteria_agree():
    """Both irreducibility criteria agree with each other and with the generic test."""
    bad = []
    for q in PRIME_POWERS:
        F = field_of(q)
        for d in CRITERIA_DS:
            for a in F.nonzero():
                lang, order = binomial_irreducible_lang(a, d), binomial_irreducible_order(a, d)
                if lang != order or lang != is_irreducible(Poly.binomial(F, d, a)):
                    bad.append((q, d, a))
    return bad


def check_prime_level_criteria():
    """l | ord(a) and l not dividing (q-1)/ord(a)  <=>  a not an l-th power (by enumeration)."""
    bad = []
    for q in PRIME_POWERS:
        F = field_of(q)
        for l in (2, 3, 5, 7):
            powers = brute_power_set(F, l)
            for a in F.nonzero():
                e = brute_order(a)
                lhs = e % l == 0 and ((q - 1) // e) % l != 0
                if lhs != (a.value not in powers):
                    bad.append((q, l, a))
    return bad


def check_euler():
    bad = []
    for q in ODD_QS:
        F = field_of(q)
        squares = brute_power_set(F, 2)
        for a in F.nonzero():
            euler = (a ** ((q - 1) // 2)).is_one()
            if euler != (a.value in squares) or is_lth_power(a, 2) != euler:
                bad.append((q, a))
    return bad


def check_minus_one_square():
    bad = []
    for q in ODD_QS:
        F = field_of(q)
        for k in (1, 2, 3):
            E = make_field(F.p, F.e * k)
            got = is_lth_power(-E.one, 2)
            if got != (k % 2 == 0 or q % 4 == 1):
                bad.append((q, k))
    return bad


def _descent_cases():
    for q in (3, 5, 7, 11, 13):
        for l in prime_factors(q - 1):
            for delta in range(2, 5):
                if delta % l == 1:
                    yield q, l, delta


def check_descent():
    bad, seen = [], 0
    for q, l, delta in _descent_cases():
        K, F = make_field(q), make_field(q, delta)
        for a in K.nonzero():
            seen += 1
            if is_lth_power(a, l) != is_lth_power(embed(a, F), l):
                bad.append((q, l, delta, a))
    assert seen
    return bad


def check_norm():
    """l-th powers are detected by the norm; the norm is multiplicative and onto K^*."""
    bad = []
    for q in (3, 5, 7, 11, 13):
        K = make_field(q)
        for delta in (1, 2, 3):
            F = make_field(q, delta)
            els = list(F.nonzero())
            norms = {x: norm_to_subfield(x, q) for x in els}
            if {n.value for n in norms.values()} != {x.value for x in K.nonzero()}:
                bad.append(("onto", q, delta))
            g = els[len(els) // 2]
            for x in els:
                if norms[x * g] != norms[x] * norms[g]:
                    bad.append(("mult", q, delta, x))
            for l in prime_factors(q - 1):
                for x in els:
                    if is_lth_power(x, l) != is_lth_power(norms[x], l):
                        bad.append(("power", q, delta, l, x))
    return bad


def check_order_divides():
    bad = []
    for q in PRIME_POWERS:
        F = field_of(q)
        gens = {a for a in F.nonzero() if element_order(a) == q - 1}
        for a in F.nonzero():
            if (q - 1) % element_order(a):
                bad.append((q, a))
        if len(gens) != sum(1 for k in range(1, q) if gcd(k, q - 1) == 1):
            bad.append((q, "generator count"))
    return bad


# --- the eight transfer rules --------------------------------------------------------

TRANSFER_DS = (2, 3, 5, 6, 7, 9, 10)


def check_transfer_rules():
    bad, counts = [], dict.fromkeys(range(1, 9), 0)

    def run(item, a, d, **kw):
        counts[item] += 1
        if not transform_suite(item, a, d, **kw):
            bad.append((item, a, d, kw))

    for q in PRIME_POWERS:
        F = field_of(q)
        els = list(F.nonzero())
        for d in TRANSFER_DS:
            rad = 1
            for l in prime_factors(d):
                rad *= l
            rad_powers = [b for b in els if is_power(b, rad)]
            for a in els:
                run(1, a, d)
                for b in els:
                    if element_order(a) == element_order(b):
                        run(2, a, d, b=b)
                if d % 2 or q % 4 != 3:
                    run(3, a, d)
                for e in range(1, 13):
                    run(4 if gcd(d, e) != 1 else 5, a, d, e=e)
                for b in rad_powers:
                    run(6, a, d, b=b)
                for d2 in TRANSFER_DS:
                    if d2 != d and prime_factors(d2) == prime_factors(d):
                        run(7, a, d, d2=d2)
            for d2 in TRANSFER_DS:
                if gcd(d, d2) == 1 and d * d2 <= 30:
                    for a in els[:6]:
                        for a2 in els:
                            run(8, a, d, d2=d2, a2=a2)
    return bad, counts


def test_transfer_item6_needs_radical():
    # for d = 9, d divided by its largest square is 1, which would allow any b;
    # a non-cube b then changes irreducibility, so b must be a rad(d)-th power
    F7 = make_field(7)
    assert any(
        binomial_irreducible_order(a, 9) != binomial_irreducible_order(a * b, 9)
        for a in F7.nonzero() for b in F7.nonzero() if not is_power(b, 3)
    )


def test_transfer_item8_agrees_with_generic_test():
    # spot-check the composite side against explicit irreducibility
    for q in (7, 13, 16):
        F = field_of(q)
        for a1 in list(F.nonzero())[:5]:
            for a2 in list(F.nonzero())[:5]:
                f = Poly.binomial(F, 6, a1**3 * a2**2)
                both = binomial_irreducible_order(a1, 2) and binomial_irreducible_order(a2, 3)
                assert is_irreducible(f) == both


# --- stability ---------------------------------------------------------------------


def check_extension_verdicts():
    """Stability over F_q matches stability over F_{q^delta} when delta = 1 mod every l | d."""
    bad, seen = [], 0
    for q in (3, 5, 7, 11):
        K = make_field(q)
        for d in (2, 3):
            for delta in range(2, 5):
                if delta % d != 1:
                    continue
                F = make_field(q, delta)
                for a in K.nonzero():
                    seen += 1
                    if stability_verdict(a, d).stable != stability_verdict(embed(a, F), d).stable:
                        bad.append((q, d, delta, a))
    assert seen
    return bad


def check_sign_flip():
    bad = []
    for q in PRIME_POWERS:
        F = field_of(q)
        for d in (3, 5, 7, 9):
            for a in F.nonzero():
                pos, neg = critical_orbit(a, d), critical_orbit(-a, d)
                n = max(pos.m0, neg.m0) + 2
                if any(neg.value(k) != -pos.value(k) for k in range(1, n)):
                    bad.append(("orbit", q, d, a))
                if stability_verdict(a, d).stable != stability_verdict(-a, d).stable:
                    bad.append(("verdict", q, d, a))
    return bad


def check_constant_terms():
    bad = []
    for q in tbl.TABLE_QS:
        F = tbl.field_for(q)
        for d in tbl.table_degrees(q):
            for a in tbl.table_elements(F):
                if not constant_term_identity(a, d, _max_iterate(d, 4096)):
                    bad.append((q, d, a))
    return bad


def _recompute_orbit(a, d):
    sign = a if d % 2 else -a
    seen, t = [], a
    while t not in seen:
        seen.append(t)
        t = t**d + sign
    return seen, seen.index(t) + 1, len(seen) + 1


def check_orbit_bounds():
    bad = []
    for q in PRIME_POWERS:
        F = field_of(q)
        for d in (2, 3, 5, 6, 7, 9, 10):
            delta = gcd(q - 1, d)
            for a in F.nonzero():
                r = critical_orbit(a, d)
                values, n0, m0 = _recompute_orbit(a, d)
                if list(r.values) != values or (r.n0, r.m0) != (n0, m0):
                    bad.append(("recompute", q, d, a))
                if len(set(r.values)) != len(r.values) or r.value(m0) != r.value(n0):
                    bad.append(("repeat", q, d, a))
                if m0 > q + 1:
                    bad.append(("q+1", q, d, a))
                if not r.contains_zero and m0 > (q - 1) // delta + 2:
                    bad.append(("zero-free", q, d, a))
    return bad


def check_iterate_one():
    """First iterate verdicts against the generic test over the table domain."""
    bad = []
    for q in tbl.TABLE_QS:
        F = tbl.field_for(q)
        for d in tbl.table_degrees(q):
            for a in tbl.table_elements(F):
                v = stability_verdict(a, d)
                if (v.reducible_at == 1) == is_irreducible(Poly.binomial(F, d, a)):
                    bad.append((q, d, a))
    return bad


CHECKS = {
    "criteria agreement": check_criteria_agree,
    "criteria per prime": check_prime_level_criteria,
    "Euler criterion": check_euler,
    "-1 as a square": check_minus_one_square,
    "l-th power descent": check_descent,
    "norm and l-th powers": check_norm,
    "element orders": check_order_divides,
    "transfer rules 1-8": lambda: check_transfer_rules()[0],
    "extension verdicts": check_extension_verdicts,
    "sign flip": check_sign_flip,
    "constant terms": check_constant_terms,
    "orbit bounds": check_orbit_bounds,
    "iterate one": check_iterate_one,
}


@pytest.mark.parametrize("name", [n for n in CHECKS if not n.startswith("transfer")])
def test_property(name):
    assert CHECKS[name]() == []


def test_transfer_rules_cover_every_item():
    bad, counts = check_transfer_rules()
    assert bad == []
    assert all(counts[i] > 0 for i in range(1, 9)), counts
