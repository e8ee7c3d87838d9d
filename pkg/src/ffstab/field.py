"""Finite fields F_p and F_{p^e}.

An element is stored as its canonical index: the coefficient vector
(c_0, ..., c_{e-1}) of c_0 + c_1*A + ... + c_{e-1}*A^{e-1} read as a base-p
integer with c_0 least significant, where A is a root of the field modulus.
For prime fields the index is the residue itself.  Canonical enumeration of
the field is ascending index order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

from sympy import factorint, isprime

# Field moduli used by the published table headers.  The q=27 header prints
# X^3+X+1, which has the root 1 over F_3; X^3+2X+1 is the modulus that
# reproduces the printed orbits.
PAPER_MODULI = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (2, 2, 1),
    16: (1, 1, 0, 0, 1),
    25: (2, 4, 1),
    27: (1, 2, 0, 1),
}

MAX_FIELD_ORDER = 2**20


class FieldError(ValueError):
    """Invalid field construction or unsupported field operation."""


class FieldMismatchError(TypeError):
    """Arithmetic between elements of different fields."""


def prime_factors(n):
    """Sorted distinct prime factors of n >= 1."""
    return sorted(factorint(n))


@dataclass(frozen=True)
class FieldSpec:
    """Description of F_q, q = p^e.

    ``modulus`` is the ascending coefficient tuple of a monic irreducible
    polynomial of degree e over F_p, or None for prime fields.  Build specs
    with :func:`make_field`, which validates them.
    """

    p: int
    e: int = 1
    modulus: tuple | None = None

    @property
    def q(self):
        return self.p**self.e

    @property
    def is_prime_field(self):
        return self.e == 1

    def __call__(self, value):
        """Coerce an int (into the prime subfield), a coefficient list, or an element."""
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise FieldMismatchError(f"element of {value.spec} used in {self}")
            return value
        if isinstance(value, int):
            return FieldElement(self, value % self.p)
        if isinstance(value, (list, tuple)):
            return self.from_coeffs(value)
        raise TypeError(f"cannot coerce {value!r} into {self}")

    def from_coeffs(self, coeffs):
        coeffs = [c % self.p for c in coeffs]
        if len(coeffs) > self.e and any(coeffs[self.e:]):
            raise FieldError(f"coefficient vector longer than extension degree {self.e}")
        return FieldElement(self, encode(coeffs[: self.e], self.p))

    def element(self, index):
        """The element with canonical index ``index``."""
        if not 0 <= index < self.q:
            raise FieldError(f"index {index} out of range for {self}")
        return FieldElement(self, index)

    def elements(self):
        """All elements in canonical enumeration order."""
        return (FieldElement(self, i) for i in range(self.q))

    def nonzero(self):
        return (FieldElement(self, i) for i in range(1, self.q))

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    @property
    def root(self):
        """The modulus root A (the element x for prime fields is meaningless)."""
        if self.e == 1:
            raise FieldError("prime fields have no modulus root")
        return FieldElement(self, self.p)

    @property
    def gen(self):
        """Canonical generator of the multiplicative group, see :func:`find_generator`."""
        return find_generator(self)

    def modulus_str(self):
        if self.modulus is None:
            return ""
        return _poly_str(self.modulus, "X")

    def __str__(self):
        if self.e == 1:
            return f"F_{self.p}"
        return f"F_{self.q}[{self.modulus_str()}]"


def encode(coeffs, p):
    index = 0
    for c in reversed(coeffs):
        index = index * p + c
    return index


def decode(index, p, e):
    out = []
    for _ in range(e):
        index, c = divmod(index, p)
        out.append(c)
    return out


def _poly_str(coeffs, var):
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        if k == 0:
            terms.append(str(c))
        else:
            mono = var if k == 1 else f"{var}^{k}"
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) or "0"


# --- raw arithmetic on canonical indices ---------------------------------


class _PrimeArith:
    def __init__(self, spec):
        self.p = spec.p

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def neg(self, x):
        return -x % self.p

    def mul(self, x, y):
        return x * y % self.p

    def pow(self, x, n):
        return pow(x, n, self.p)


class _Char2Arith:
    """F_{2^e}: indices are bit-packed polynomials over F_2."""

    def __init__(self, spec):
        self.e = spec.e
        self.mod = encode(spec.modulus, 2)

    def add(self, x, y):
        return x ^ y

    sub = add

    def neg(self, x):
        return x

    def mul(self, x, y):
        r = 0
        while y:
            if y & 1:
                r ^= x
            y >>= 1
            x <<= 1
            if x >> self.e:
                x ^= self.mod
        return r

    def pow(self, x, n):
        r = 1
        while n:
            if n & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            n >>= 1
        return r


class _ExtArith:
    """F_{p^e}, odd p: schoolbook multiplication of digit vectors mod the modulus."""

    def __init__(self, spec):
        self.p, self.e = spec.p, spec.e
        self.low = spec.modulus[: spec.e]
        self._digits = lru_cache(maxsize=1 << 16)(lambda x: decode(x, self.p, self.e))

    def add(self, x, y):
        a, b = self._digits(x), self._digits(y)
        return encode([(u + v) % self.p for u, v in zip(a, b)], self.p)

    def sub(self, x, y):
        a, b = self._digits(x), self._digits(y)
        return encode([(u - v) % self.p for u, v in zip(a, b)], self.p)

    def neg(self, x):
        return encode([-u % self.p for u in self._digits(x)], self.p)

    def mul(self, x, y):
        p, e = self.p, self.e
        a, b = self._digits(x), self._digits(y)
        prod = [0] * (2 * e - 1)
        for i, u in enumerate(a):
            if u:
                for j, v in enumerate(b):
                    prod[i + j] += u * v
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k] % p
            if c:
                for i, m in enumerate(self.low):
                    prod[k - e + i] -= c * m
        return encode([c % p for c in prod[:e]], p)

    def pow(self, x, n):
        r = 1
        while n:
            if n & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            n >>= 1
        return r


@lru_cache(maxsize=None)
def arith(spec):
    if spec.e == 1:
        return _PrimeArith(spec)
    if spec.p == 2:
        return _Char2Arith(spec)
    return _ExtArith(spec)


@dataclass(frozen=True, slots=True)
class FieldElement:
    spec: FieldSpec
    value: int

    @property
    def coeffs(self):
        """Coefficient vector over F_p (length e)."""
        return tuple(decode(self.value, self.spec.p, self.spec.e))

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldMismatchError(f"{self.spec} and {other.spec} are different fields")
            return other.value
        if isinstance(other, int):
            return other % self.spec.p
        return None

    def __add__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.spec, arith(self.spec).add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.spec, arith(self.spec).sub(self.value, v))

    def __rsub__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.spec, arith(self.spec).sub(v, self.value))

    def __neg__(self):
        return FieldElement(self.spec, arith(self.spec).neg(self.value))

    def __mul__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.spec, arith(self.spec).mul(self.value, v))

    __rmul__ = __mul__

    def inverse(self):
        if not self.value:
            raise ZeroDivisionError("0 has no inverse")
        return FieldElement(self.spec, arith(self.spec).pow(self.value, self.spec.q - 2))

    def __truediv__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return self * FieldElement(self.spec, v).inverse()

    def __rtruediv__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.spec, v) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** -n
        if not self.value:
            return self if n else self.spec.one
        # exponents act modulo the group order on F_q^*
        return FieldElement(self.spec, arith(self.spec).pow(self.value, n % (self.spec.q - 1)))

    def __bool__(self):
        return self.value != 0

    def is_one(self):
        return self.value == 1

    def __repr__(self):
        return f"FieldElement({self.spec}, {self})"

    def __str__(self):
        return format_element(self)


# --- labels ----------------------------------------------------------------


def format_element(x, style="power"):
    """Print form: residues for prime fields; "0", "1", "a", "a^k" otherwise.

    ``style="poly"`` prints extension elements as polynomials in A instead.
    """
    spec = x.spec
    if spec.e == 1:
        return str(x.value)
    if style == "poly":
        return _poly_str(list(x.coeffs), "A")
    if not x.value:
        return "0"
    k = discrete_log(x)
    if k == 0:
        return "1"
    return "a" if k == 1 else f"a^{k}"


@lru_cache(maxsize=32)
def _bsgs_table(spec):
    g = find_generator(spec)
    m = isqrt(spec.q - 1) + 1
    table = {}
    y = spec.one
    for j in range(m):
        table.setdefault(y.value, j)
        y = y * g
    return g, m, table


def discrete_log(x):
    """k in [0, q-2] with x = gen^k, by baby-step giant-step."""
    if not x:
        raise FieldError("discrete log of 0")
    g, m, table = _bsgs_table(x.spec)
    step = g ** (-m)
    y = x
    for i in range(m + 1):
        j = table.get(y.value)
        if j is not None:
            return (i * m + j) % (x.spec.q - 1)
        y = y * step
    raise AssertionError("generator does not generate")  # pragma: no cover


# --- construction ------------------------------------------------------------


def make_field(p, e=1, modulus=None):
    """Build and validate the spec of F_{p^e}.

    Without a modulus, extension fields use the table-header modulus for
    q in PAPER_MODULI, else the monic irreducible polynomial whose ascending
    coefficient tuple is smallest as a base-p integer.
    """
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if not isinstance(e, int) or e < 1:
        raise FieldError(f"extension degree {e} must be a positive integer")
    if p**e > MAX_FIELD_ORDER:
        raise FieldError(f"fields larger than 2^20 are unsupported (q = {p}^{e})")
    if e == 1:
        if modulus is not None:
            modulus = [c % p for c in modulus]
            if len(modulus) != 2 or modulus[1] != 1:
                raise FieldError("prime field modulus must be monic of degree 1")
        return FieldSpec(p, 1, None)
    if modulus is None:
        q = p**e
        if q in PAPER_MODULI:
            return FieldSpec(p, e, PAPER_MODULI[q])
        return FieldSpec(p, e, _smallest_irreducible(p, e))
    modulus = tuple(c % p for c in modulus)
    while len(modulus) > 1 and modulus[-1] == 0:
        modulus = modulus[:-1]
    if len(modulus) != e + 1:
        raise FieldError(f"modulus degree {len(modulus) - 1} does not match e = {e}")
    if modulus[-1] != 1:
        raise FieldError("modulus must be monic")
    if not _is_irreducible_over_prime(p, modulus):
        raise FieldError(f"modulus {_poly_str(modulus, 'X')} is reducible over F_{p}")
    return FieldSpec(p, e, modulus)


def _is_irreducible_over_prime(p, coeffs):
    from .poly import Poly, is_irreducible

    return is_irreducible(Poly(make_field(p), coeffs), backend="native")


@lru_cache(maxsize=None)
def _smallest_irreducible(p, e):
    for low in range(p**e):
        coeffs = tuple(decode(low, p, e)) + (1,)
        if coeffs[0] and _is_irreducible_over_prime(p, coeffs):
            return coeffs
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def parse_field(text, modulus=None):
    """Parse "q=9", "q=3^2", "p=3,e=3,mod=1,2,0,1" (ascending, monic) into a spec."""
    text = text.strip().replace(" ", "")
    if text.startswith("q="):
        body = text[2:]
        if "^" in body:
            base, exp = body.split("^", 1)
            p, e = int(base), int(exp)
        else:
            q = int(body)
            fac = factorint(q)
            if len(fac) != 1:
                raise FieldError(f"q = {q} is not a prime power")
            ((p, e),) = fac.items()
        return make_field(p, e, modulus)
    fields = {}
    key = None
    for part in text.split(","):
        if "=" in part:
            key, val = part.split("=", 1)
            fields[key] = [val]
        elif key == "mod":
            fields[key].append(part)
        else:
            raise FieldError(f"cannot parse field spec {text!r}")
    if "p" not in fields:
        raise FieldError(f"cannot parse field spec {text!r}")
    p = int(fields["p"][0])
    e = int(fields.get("e", ["1"])[0])
    mod = [int(c) for c in fields["mod"]] if "mod" in fields else modulus
    return make_field(p, e, mod)


def parse_element(spec, text):
    """Parse "-3", "7" (prime subfield), "a", "a^k", "alpha^k", "-a^2", or "v:c0,c1"."""
    text = text.strip().replace(" ", "")
    if text.startswith("v:"):
        return spec.from_coeffs([int(c) for c in text[2:].split(",")])
    sign = 1
    if text.startswith("-"):
        sign, text = -1, text[1:]
    elif text.startswith("+"):
        text = text[1:]
    if text.startswith("alpha"):
        text = "a" + text[5:]
    if text.startswith("a"):
        if spec.e == 1:
            raise FieldError("generator-power labels need an extension field; use integers")
        if text == "a":
            k = 1
        elif text.startswith("a^"):
            k = int(text[2:].strip("{}"))
        else:
            raise FieldError(f"cannot parse element {text!r}")
        x = spec.gen**k
    else:
        try:
            x = spec(int(text))
        except ValueError:
            raise FieldError(f"cannot parse element {text!r}") from None
    return -x if sign < 0 else x


# --- group structure ---------------------------------------------------------


def element_order(a):
    """Multiplicative order of a != 0."""
    if not a:
        raise FieldError("0 has no multiplicative order")
    t = a.spec.q - 1
    for l in prime_factors(t):
        while t % l == 0 and (a ** (t // l)).is_one():
            t //= l
    return t


@lru_cache(maxsize=None)
def find_generator(spec):
    """First element in canonical order whose order is q - 1."""
    if spec.q < 3:
        raise FieldError("find_generator needs q >= 3")
    for a in spec.nonzero():
        if element_order(a) == spec.q - 1:
            return a
    raise AssertionError("F_q^* is cyclic")  # pragma: no cover


def is_power(a, k):
    """a in (F_q^*)^k for any k >= 1; membership via a^((q-1)/gcd(k, q-1)) = 1."""
    if not a:
        raise FieldError("power-residue test of 0")
    m = a.spec.q - 1
    return (a ** (m // gcd(k, m))).is_one()


def is_lth_power(a, l):
    """Whether a = b^l for some b in F_q^*, l prime."""
    if not isprime(l):
        raise FieldError(f"{l} is not prime")
    if not a:
        raise FieldError("power-residue test of 0")
    m = a.spec.q - 1
    if m % l:
        return True
    return (a ** (m // l)).is_one()


def lth_root(a, l):
    """Some b with b^l = a, by exhaustive search; None when a is not an l-th power."""
    if not a:
        raise FieldError("lth_root of 0")
    if a.spec.q > MAX_FIELD_ORDER:
        raise FieldError("exhaustive root search is limited to q <= 2^20")
    for b in a.spec.nonzero():
        if b**l == a:
            return b
    return None


def embed(a, spec):
    """Image of a prime-field element a in an extension of the same characteristic."""
    if a.spec == spec:
        return a
    if a.spec.e != 1 or a.spec.p != spec.p:
        raise FieldError(f"only F_p embeds into {spec} here")
    return FieldElement(spec, a.value)


def norm_to_subfield(a, q):
    """N(a) = a^(1 + q + ... + q^(delta-1)) from F_{q^delta} down to F_q, q prime."""
    spec = a.spec
    if q != spec.p:
        raise FieldError(f"F_{q} is not identifiable inside {spec}; only the prime subfield is")
    delta = spec.e
    exponent = sum(q**i for i in range(delta))
    n = a ** exponent if a else spec.zero
    if n.value >= q:
        raise AssertionError("norm left the prime subfield")  # pragma: no cover
    return make_field(q)(n.value)
