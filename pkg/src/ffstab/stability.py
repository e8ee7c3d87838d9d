"""Irreducibility and stability of binomials x^d - a over F_q.

The stability decision runs on the critical orbit P_1(a) = a,
P_n(a) = P_{n-1}(a)^d + (-1)^(d-1) a: x^d - a (d not divisible by 4) is
stable iff no orbit value is 0 or an l-th power for a prime l | d, and the
first such index is the first reducible iterate.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from sympy import isprime

from .field import (
    FieldError,
    element_order,
    find_generator,
    format_element,
    is_lth_power,
    is_power,
    lth_root,
    make_field,
    prime_factors,
)


class UnsupportedDegree(ValueError):
    """Stability theory needs d >= 2 with d not divisible by 4."""


def _check_a(a):
    if not a:
        raise FieldError("a must be nonzero")


def _check_d(d):
    if not isinstance(d, int) or d < 2:
        raise UnsupportedDegree(f"degree d = {d} must be an integer >= 2")


@dataclass(frozen=True)
class Failure:
    """First orbit index k whose value is 0 or an l-th power (cause "zero" or "power")."""

    index: int
    cause: str
    prime: int | None = None
    value: object = None

    def witness(self):
        """An l-th root of the failing value (computed on request)."""
        if self.cause != "power":
            return None
        return lth_root(self.value, self.prime)


@dataclass(frozen=True)
class OrbitReport:
    a: object
    d: int
    values: tuple  # P_1(a), ..., P_{m0-1}(a), pairwise distinct
    n0: int
    m0: int
    first_failure: Failure | None

    @property
    def contains_zero(self):
        return any(not v for v in self.values)

    @property
    def printed(self):
        """P_1(a), ..., P_{m0}(a): the orbit with its first repeat, as the table lists it."""
        return self.values + (self.values[self.n0 - 1],)

    def value(self, n):
        """P_n(a) for any n >= 1, read off the eventually periodic orbit."""
        if n < 1:
            raise ValueError("orbit indices start at 1")
        if n < self.m0:
            return self.values[n - 1]
        period = self.m0 - self.n0
        return self.values[self.n0 - 1 + (n - self.n0) % period]


def orbit_step(t, a, d):
    """t^d + (-1)^(d-1) a."""
    return t**d + a if d % 2 else t**d - a


def critical_orbit(a, d):
    """Critical orbit of x^d - a with minimal (n0, m0) and the first failing index."""
    _check_a(a)
    _check_d(d)
    seen = {}
    values = []
    t = a
    while t.value not in seen:
        seen[t.value] = len(values) + 1
        values.append(t)
        t = orbit_step(t, a, d)
    n0 = seen[t.value]
    m0 = len(values) + 1
    return OrbitReport(a, d, tuple(values), n0, m0, _scan(values, d))


def _scan(values, d):
    primes = prime_factors(d)
    for k, v in enumerate(values, start=1):
        if not v:
            return Failure(k, "zero", None, v)
        for l in primes:
            if is_lth_power(v, l):
                return Failure(k, "power", l, v)
    return None


# --- irreducibility of x^d - a ----------------------------------------------


def binomial_irreducible_lang(a, d):
    """No prime l | d has a in (F_q^*)^l, and a not in -4 (F_q^*)^4 when 4 | d."""
    _check_a(a)
    _check_d(d)
    if any(is_lth_power(a, l) for l in prime_factors(d)):
        return False
    if d % 4 == 0:
        m4 = -4 * a.spec.one
        if m4 and is_power(a / m4, 4):
            return False
    return True


def binomial_irreducible_order(a, d):
    """Every prime l | d divides ord(a) but not (q-1)/ord(a); q = 1 mod 4 when 4 | d."""
    _check_a(a)
    _check_d(d)
    q = a.spec.q
    e = element_order(a)
    for l in prime_factors(d):
        if e % l or ((q - 1) // e) % l == 0:
            return False
    return not (d % 4 == 0 and q % 4 != 1)


# --- stability -------------------------------------------------------------------


@dataclass(frozen=True)
class StabilityVerdict:
    a: object
    d: int
    reducible_at: int | None  # None means stable
    cause: str | None = None  # "power", "zero" or "char" (p | d)
    failure: Failure | None = None
    orbit: OrbitReport | None = None

    @property
    def stable(self):
        return self.reducible_at is None

    @property
    def kind(self):
        return "Stable" if self.stable else f"ReducibleAtIterate({self.reducible_at})"

    @property
    def failing_index(self):
        return self.failure.index if self.failure else None

    @property
    def failing_prime(self):
        if self.cause == "char":
            return self.a.spec.p
        return self.failure.prime if self.failure else None

    def witness(self):
        return self.failure.witness() if self.failure else None

    def record(self):
        """Flat key/value form shared by the text, CSV and JSON outputs."""
        spec = self.a.spec
        orbit = self.orbit
        return {
            "field": str(spec),
            "q": spec.q,
            "d": self.d,
            "a": format_element(self.a),
            "orbit": [format_element(v) for v in orbit.values] if orbit else [],
            "n0": orbit.n0 if orbit else None,
            "m0": orbit.m0 if orbit else None,
            "verdict": self.kind,
            "cause": self.cause,
            "failing_index": self.failing_index,
            "failing_prime": self.failing_prime,
            "stable": self.stable,
        }


def stability_verdict(a, d):
    """Stable, or the first reducible iterate of x^d - a (d not divisible by 4)."""
    _check_d(d)
    if d % 4 == 0:
        raise UnsupportedDegree(f"stability criterion needs d not divisible by 4 (d = {d})")
    _check_a(a)
    if d % a.spec.p == 0:
        return StabilityVerdict(a, d, 1, "char")
    orbit = critical_orbit(a, d)
    fail = orbit.first_failure
    if fail is None:
        return StabilityVerdict(a, d, None, orbit=orbit)
    # a zero anywhere in the orbit already makes f itself reducible
    n = 1 if fail.cause == "zero" else fail.index
    return StabilityVerdict(a, d, n, fail.cause, fail, orbit)


def early_stable_bound(a, d):
    """(q-1)/gcd(q-1, d) + 1: irreducible iterates up to here certify stability."""
    _check_d(d)
    if d % 4 == 0:
        raise UnsupportedDegree(f"d = {d} is divisible by 4")
    _check_a(a)
    q = a.spec.q
    return (q - 1) // gcd(q - 1, d) + 1


def lambda_solutions(b, d):
    """All lam in F_q^* with lam^(d-1) = b, in canonical order."""
    if not b:
        raise FieldError("b must be nonzero")
    _check_d(d)
    if not is_power(b, d - 1):
        return []
    return [lam for lam in b.spec.nonzero() if lam ** (d - 1) == b]


def normalize_nonmonic(b, c, d):
    """(lam, a) with b x^d - c = u^-1 o (x^d - a) o u for u(x) = lam x, or None.

    lam is the first solution of lam^(d-1) = b in canonical order and a = c lam.
    """
    if not b:
        raise FieldError("b must be nonzero")
    _check_d(d)
    c = b.spec(c)
    for lam in b.spec.nonzero():
        if lam ** (d - 1) == b:
            return lam, c * lam
    return None


def _radical(n):
    r = 1
    for l in prime_factors(n):
        r *= l
    return r


def transform_suite(item, a, d, **params):
    """Check one of eight transfer rules for irreducibility of x^d - a.

    Both sides are evaluated with the order criterion. Returns whether the
    rule holds on this instance; raises ValueError if its hypotheses fail.
    Parameters by item: 2 b; 4, 5 e; 6 b (a rad(d)-th power); 7 d2; 8 d2, a2.
    """
    _check_a(a)
    _check_d(d)
    if d % 4 == 0:
        raise ValueError(f"d = {d} is divisible by 4")
    spec = a.spec
    q = spec.q
    irr = binomial_irreducible_order

    def need(cond, msg):
        if not cond:
            raise ValueError(f"item {item}: {msg}")

    if item == 1:
        if not irr(a, d):
            return True
        return all((q - 1) % l == 0 for l in prime_factors(d)) and pow(q, d, d) == 1 % d
    if item == 2:
        b = params["b"]
        need(b and element_order(a) == element_order(b), "orders differ")
        return irr(a, d) == irr(b, d)
    if item == 3:
        need(d % 2 or q % 4 != 3, "q = -1 mod 4 with d even")
        return irr(a, d) == irr(-a, d)
    if item == 4:
        e = params["e"]
        need(e >= 1 and gcd(d, e) != 1, "gcd(d, e) = 1")
        return not irr(a**e, d)
    if item == 5:
        e = params["e"]
        need(e >= 1 and gcd(d, e) == 1, "gcd(d, e) != 1")
        return irr(a, d) == irr(a**e, d)
    if item == 6:
        b = params["b"]
        need(b and is_power(b, _radical(d)), "b is not a rad(d)-th power")
        return irr(a, d) == irr(a * b, d)
    if item == 7:
        d2 = params["d2"]
        _check_d(d2)
        need(d2 % 4 and prime_factors(d2) == prime_factors(d), "prime factors differ")
        return irr(a, d) == irr(a, d2)
    if item == 8:
        d2, a2 = params["d2"], params["a2"]
        _check_a(a2)
        _check_d(d2)
        need(d2 % 4 and gcd(d, d2) == 1, "d, d2 not coprime")
        return irr(a**d2 * a2**d, d * d2) == (irr(a, d) and irr(a2, d2))
    raise ValueError(f"unknown item {item}")


def sign_flip_verdict_equal(a, d):
    """Whether x^d - a and x^d + a get the same verdict (d odd)."""
    if d % 2 == 0 or d < 3:
        raise UnsupportedDegree(f"sign flip check needs odd d >= 3 (d = {d})")
    return stability_verdict(a, d).kind == stability_verdict(-a, d).kind


# --- Mersenne fields -------------------------------------------------------------

MERSENNE_SAMPLE = 4096


@dataclass(frozen=True)
class MersenneReport:
    m: int
    q: int
    mersenne: int
    factors: tuple
    prime: bool
    checked: int
    sampled: bool
    all_irreducible: bool
    all_stable: bool
    counterexample: object  # alpha with x^(q-1) - alpha reducible, or None
    counterexample_order: int | None
    equivalence_holds: bool

    def record(self):
        return {
            "m": self.m,
            "q": self.q,
            "mersenne": self.mersenne,
            "factors": "x".join(map(str, self.factors)),
            "prime": self.prime,
            "checked": self.checked,
            "sampled": self.sampled,
            "all_irreducible": self.all_irreducible,
            "all_stable": self.all_stable,
            "counterexample": format_element(self.counterexample) if self.counterexample else None,
            "counterexample_order": self.counterexample_order,
            "equivalence_holds": self.equivalence_holds,
        }


def mersenne_report(m, sample=MERSENNE_SAMPLE):
    """Check, over F_{2^m}, that x^(q-1) - alpha is stable for every alpha not in {0, 1}
    iff it is irreducible for every such alpha iff 2^m - 1 is prime.

    Above q = 2^12 only the first ``sample`` alphas in canonical order are
    checked, together with gen^r for the smallest prime r | q - 1.
    """
    if not isinstance(m, int) or not 2 <= m <= 20:
        raise ValueError(f"m = {m} outside 2..20")
    spec = make_field(2, m)
    q = spec.q
    d = q - 1
    factors = tuple(prime_factors(d))
    prime = isprime(d)
    sampled = q > 2**12
    if sampled:
        alphas = [spec.element(i) for i in range(2, min(q, sample + 2))]
        extra = find_generator(spec) ** factors[0]
        if extra.value >= 2 and extra not in alphas:
            alphas.append(extra)
    else:
        alphas = [spec.element(i) for i in range(2, q)]
    all_irr = all_stable = True
    counter = None
    counter_order = None
    for alpha in alphas:
        irr = element_order(alpha) == d
        stable = stability_verdict(alpha, d).stable
        if irr != binomial_irreducible_order(alpha, d):
            raise AssertionError(f"order criterion disagrees at {alpha}")
        all_irr &= irr
        all_stable &= stable
        if not irr and counter is None:
            counter, counter_order = alpha, element_order(alpha)
    if sampled:
        # a sample cannot prove "all"; the claim checked is the sampled one
        equivalence = (prime and all_irr and all_stable) or (not prime and counter is not None and not all_stable)
    else:
        equivalence = all_irr == all_stable == prime
    return MersenneReport(
        m, q, d, tuple(_factorization(d)), prime, len(alphas), sampled,
        all_irr, all_stable, counter, counter_order, equivalence,
    )


def _factorization(n):
    out = []
    for l in prime_factors(n):
        while n % l == 0:
            out.append(l)
            n //= l
    return out
