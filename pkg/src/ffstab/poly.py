"""Dense univariate polynomials over a fixed F_q.

Coefficients are stored ascending as canonical element indices.  Large
products go through Kronecker substitution (pack digits into one Python
integer, multiply, unpack), which keeps iterates of degree 4096 cheap.
"""

from __future__ import annotations

import re
from functools import lru_cache
from math import gcd as gcd_int

import numpy as np

from .field import (
    FieldElement,
    FieldMismatchError,
    arith,
    decode,
    format_element,
    parse_element,
    prime_factors,
)

DEFAULT_DEGREE_CAP = 4096
# Above this degree the "auto" irreducibility backend hands off to FLINT.
NATIVE_DEGREE_LIMIT = 256
_KRONECKER_MIN = 24


class DegreeCapExceeded(ValueError):
    pass


class Poly:
    """Polynomial over ``spec``; ``coeffs`` is a normalized tuple of element indices."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec, coeffs=()):
        vals = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.spec != spec:
                    raise FieldMismatchError(f"coefficient from {c.spec} in a polynomial over {spec}")
                vals.append(c.value)
            else:
                vals.append(spec(c).value)
        while vals and not vals[-1]:
            vals.pop()
        self.spec = spec
        self.coeffs = tuple(vals)

    @classmethod
    def _raw(cls, spec, vals):
        vals = list(vals)
        while vals and not vals[-1]:
            vals.pop()
        f = cls.__new__(cls)
        f.spec = spec
        f.coeffs = tuple(vals)
        return f

    @classmethod
    def x(cls, spec):
        return cls._raw(spec, (0, 1))

    @classmethod
    def constant(cls, spec, c):
        return cls(spec, [c])

    @classmethod
    def binomial(cls, spec, d, a, b=None):
        """b*x^d - a (b defaults to 1)."""
        a = spec(a)
        lead = spec.one if b is None else spec(b)
        return cls(spec, [-a] + [0] * (d - 1) + [lead])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return FieldElement(self.spec, self.coeffs[k])
        return self.spec.zero

    @property
    def lc(self):
        return self[self.degree] if self.coeffs else self.spec.zero

    def __iter__(self):
        return (FieldElement(self.spec, c) for c in self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.spec == other.spec and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.coeffs))

    def _check(self, other):
        if isinstance(other, Poly):
            if other.spec != self.spec:
                raise FieldMismatchError(f"polynomials over {self.spec} and {other.spec}")
            return other
        if isinstance(other, (int, FieldElement)):
            return Poly(self.spec, [other])
        return None

    def __add__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        ar = arith(self.spec)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = ar.add(out[i], v)
        return Poly._raw(self.spec, out)

    __radd__ = __add__

    def __neg__(self):
        ar = arith(self.spec)
        return Poly._raw(self.spec, [ar.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return Poly._raw(self.spec, _mul(self.spec, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly._raw(self.spec, (1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        q, r = _divmod(self.spec, self.coeffs, other.coeffs)
        return Poly._raw(self.spec, q), Poly._raw(self.spec, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, arg):
        """Evaluate at a field element, or compose with a polynomial."""
        if isinstance(arg, Poly):
            return compose(self, arg)
        x = self.spec(arg)
        acc = self.spec.zero
        for c in reversed(self.coeffs):
            acc = acc * x + FieldElement(self.spec, c)
        return acc

    def monic(self):
        if not self:
            raise ZeroDivisionError("zero polynomial has no monic form")
        inv = self.lc.inverse()
        return self * inv

    def __repr__(self):
        return f"Poly({self.spec}, {self})"

    def __str__(self):
        return format_poly(self)


# --- multiplication and division ------------------------------------------


def _mul(spec, a, b):
    if not a or not b:
        return ()
    if min(len(a), len(b)) >= _KRONECKER_MIN:
        return _kronecker_mul(spec, a, b)
    if spec.e == 1:
        p = spec.p
        out = [0] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if u:
                for j, v in enumerate(b):
                    out[i + j] += u * v
        return [c % p for c in out]
    ar = arith(spec)
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                if v:
                    out[i + j] = ar.add(out[i + j], ar.mul(u, v))
    return out


def _digits(spec, values):
    """(n, e) array of base-p digits of element indices."""
    v = np.asarray(values, dtype=np.int64)
    if spec.e == 1:
        return v.reshape(-1, 1)
    powers = spec.p ** np.arange(spec.e, dtype=np.int64)
    return (v[:, None] // powers) % spec.p


def _undigits(spec, digits):
    """Reduce an (n, w) digit array with w <= 2e-1 modulo p and the modulus; return indices."""
    p, e = spec.p, spec.e
    c = digits % p
    if e > 1 and c.shape[1] > e:
        low = np.asarray(spec.modulus[:e], dtype=np.int64)
        c = c.copy()
        for t in range(c.shape[1] - 1, e - 1, -1):
            top = c[:, t]
            c[:, t - e : t] -= top[:, None] * low
            c[:, t - e : t] %= p
        c = c[:, :e]
    if e == 1:
        return c[:, 0].tolist()
    powers = spec.p ** np.arange(e, dtype=np.int64)
    return (c[:, :e] @ powers).tolist()


_DTYPES = ((8, np.uint8), (16, np.uint16), (32, np.uint32), (64, np.uint64))


def _kronecker_mul(spec, a, b):
    p, e = spec.p, spec.e
    w = 2 * e - 1
    bound = min(len(a), len(b)) * e * (p - 1) ** 2
    width, dt = next((bits, t) for bits, t in _DTYPES if bits > bound.bit_length())

    def pack(vals):
        slots = np.zeros((len(vals), w), dtype=dt)
        slots[:, :e] = _digits(spec, vals)
        return int.from_bytes(slots.tobytes(), "little")

    n = len(a) + len(b) - 1
    prod = pack(a) * pack(b)
    raw = np.frombuffer(prod.to_bytes(n * w * width // 8, "little"), dtype=dt)
    return _undigits(spec, raw.reshape(n, w).astype(np.int64))


def _divmod(spec, a, b):
    ar = arith(spec)
    db = len(b) - 1
    inv = ar.pow(b[-1], spec.q - 2)
    r = list(a)
    if len(a) <= db:
        return [], r
    quo = [0] * (len(a) - db)
    if spec.e == 1:
        p = spec.p
        for k in range(len(a) - 1 - db, -1, -1):
            c = r[k + db] * inv % p
            if c:
                quo[k] = c
                for i, v in enumerate(b):
                    r[k + i] = (r[k + i] - c * v) % p
        return quo, r[:db]
    for k in range(len(a) - 1 - db, -1, -1):
        c = ar.mul(r[k + db], inv)
        if c:
            quo[k] = c
            for i, v in enumerate(b):
                if v:
                    r[k + i] = ar.sub(r[k + i], ar.mul(c, v))
    return quo, r[:db]


def gcd(f, g):
    """Monic gcd (zero if both are zero)."""
    while g:
        f, g = g, f % g
    return f.monic() if f else f


def pow_mod(f, n, m):
    """f^n mod m by square-and-multiply."""
    result = Poly._raw(f.spec, (1,)) % m
    base = f % m
    while n:
        if n & 1:
            result = (result * base) % m
        n >>= 1
        if n:
            base = (base * base) % m
    return result


# --- composition and iteration ---------------------------------------------


def compose(f, g):
    """f(g(x)); sparse Horner over the nonzero coefficients of f."""
    if f.spec != g.spec:
        raise FieldMismatchError(f"polynomials over {f.spec} and {g.spec}")
    spec = f.spec
    terms = [(k, c) for k, c in enumerate(f.coeffs) if c]
    if not terms:
        return Poly._raw(spec, ())
    top, lead = terms[-1]
    result = Poly._raw(spec, (lead,))
    for k, c in reversed(terms[:-1]):
        result = result * g ** (top - k) + FieldElement(spec, c)
        top = k
    return result * g**top if top else result


def iterate(f, n, degree_cap=DEFAULT_DEGREE_CAP):
    """The n-th iterate f_n: f_1 = f, f_n = f_{n-1} o f.

    Built as f o f_{n-1}, the same polynomial since composition is associative.
    """
    if f.degree < 1:
        raise ValueError("iteration needs a nonconstant polynomial")
    if n < 1:
        raise ValueError("iterate index starts at 1")
    if f.degree**n > degree_cap:
        raise DegreeCapExceeded(f"deg f_{n} = {f.degree}^{n} exceeds the cap {degree_cap}")
    g = f
    for _ in range(n - 1):
        g = compose(f, g)
    return g


# --- Frobenius and irreducibility ---------------------------------------------


def frobenius_power(spec, k, f):
    """x^(q^k) mod f, by k successive q-th powers with square-and-multiply."""
    if f.spec != spec:
        raise FieldMismatchError(f"{f} is not over {spec}")
    if f.degree < 1:
        raise ValueError("frobenius_power needs deg f >= 1")
    h = Poly.x(spec) % f
    for _ in range(k):
        h = pow_mod(h, spec.q, f)
    return h


def _scalar_times(spec, c_digits, vec):
    """c * vec for a field scalar (digits, shape (e,)) and a vector (n, e) of digits."""
    e = spec.e
    out = np.zeros((vec.shape[0], 2 * e - 1), dtype=np.int64)
    for j in range(e):
        if c_digits[j]:
            out[:, j : j + e] += c_digits[j] * vec
    return out


def _frobenius_matrix(f):
    """Digits of x^(q*i) mod f for i < n, shape (n, n, e); f monic of degree n >= 2."""
    spec = f.spec
    p, e, n, q = spec.p, spec.e, f.degree, spec.q
    fd = _digits(spec, f.coeffs[:n])  # x^n = -sum f_i x^i
    rows = np.zeros((n, n, e), dtype=np.int64)
    cur = np.zeros((n, e), dtype=np.int64)
    cur[0, 0] = 1
    for i in range(n):
        rows[i] = cur
        for _ in range(q):
            top = cur[n - 1].copy()
            cur = np.roll(cur, 1, axis=0)
            cur[0] = 0
            if top.any():
                if e == 1:
                    cur[:, 0] = (cur[:, 0] - top[0] * fd[:, 0]) % p
                else:
                    sub = _scalar_times(spec, top, fd)
                    full = np.zeros((n, 2 * e - 1), dtype=np.int64)
                    full[:, :e] = cur
                    full -= sub
                    cur = _digits(spec, _undigits(spec, full))
    return rows


def _apply_frobenius(spec, rows, h):
    """h^q mod f given h as (n, e) digits: sum_i h_i * (x^(q i) mod f)."""
    e = spec.e
    n = h.shape[0]
    out = np.zeros((n, 2 * e - 1), dtype=np.int64)
    for j in range(e):
        if h[:, j].any():
            for k in range(e):
                out[:, j + k] += h[:, j] @ rows[:, :, k]
    return _digits(spec, _undigits(spec, out))


def _is_irreducible_native(f):
    """Rabin: f | x^(q^n) - x and gcd(x^(q^(n/t)) - x, f) = 1 for primes t | n."""
    spec = f.spec
    n = f.degree
    if n == 1:
        return True
    f = f.monic()
    rows = _frobenius_matrix(f)
    x = Poly.x(spec)
    checkpoints = {n // t for t in prime_factors(n)}
    h = _digits(spec, [0, 1] + [0] * (n - 2))
    saved = {}
    for k in range(1, n + 1):
        h = _apply_frobenius(spec, rows, h)
        if k in checkpoints:
            saved[k] = Poly._raw(spec, _undigits(spec, h))
    if Poly._raw(spec, _undigits(spec, h)) != x:
        return False
    return all(gcd(saved[k] - x, f).degree == 0 for k in checkpoints)


@lru_cache(maxsize=None)
def _flint_context(spec):
    import flint

    if spec.e == 1:
        return flint.fmpz_mod_poly_ctx(spec.p), None
    mod = flint.fmpz_mod_poly_ctx(spec.p)(list(spec.modulus))
    ctx = flint.fq_default_ctx(modulus=mod)
    return ctx, flint.fq_default_poly_ctx(ctx)


def to_flint(f):
    """The same polynomial as a python-flint object (fmpz_mod_poly or fq_default_poly)."""
    spec = f.spec
    if spec.e == 1:
        return _flint_context(spec)[0](list(f.coeffs))
    ctx, ring = _flint_context(spec)
    return ring([ctx(decode(c, spec.p, spec.e)) for c in f.coeffs])


def _rabin_nmod(m):
    """Rabin's test for a monic flint nmod_poly over F_p.

    x^(p^k) mod m comes from composing cached x^(p^(2^i)), since
    x^(p^(a+b)) = x^(p^a) o x^(p^b) mod m.  Far fewer modular products than
    raising to p-th powers k times when p is small and k large.
    """
    import flint

    n = m.degree()
    if n <= 1:
        return n == 1
    p = m.modulus()
    x = flint.nmod_poly([0, 1], p)
    doubling = [x.pow_mod(p, m)]

    def frob(k):
        out, i = None, 0
        while k:
            if i == len(doubling):
                doubling.append(doubling[-1].compose_mod(doubling[-1], m))
            if k & 1:
                out = doubling[i] if out is None else doubling[i].compose_mod(out, m)
            k >>= 1
            i += 1
        return out

    ts = prime_factors(n)
    partial = {t: frob(n // t) for t in ts}
    t0 = ts[0]
    full = partial[t0]
    for _ in range(t0 - 1):
        full = partial[t0].compose_mod(full, m)
    if full != x:
        return False
    return all(m.gcd(partial[t] - x).degree() == 0 for t in ts)


def _is_irreducible_flint(f):
    """Irreducibility through FLINT arithmetic over the prime field.

    Over F_{p^e} the norm N = f * f^sigma * ... (sigma the Frobenius on
    coefficients) lies in F_p[x].  f of degree n is irreducible exactly when f
    is squarefree and N = r^k with r irreducible of degree D, n*gcd(D, e) = D.
    """
    import flint

    spec, n = f.spec, f.degree
    if n == 1:
        return True
    if spec.e == 1:
        g = to_flint(f).monic()
        return _rabin_nmod(flint.nmod_poly([int(c) for c in g.coeffs()], spec.p))
    ring = _flint_context(spec)[1]
    h = to_flint(f).monic()
    norm, g = h, h
    for _ in range(spec.e - 1):
        g = ring([c.frobenius() for c in g.coeffs()])
        norm = norm * g
    coeffs = []
    for c in norm.coeffs():
        digits = [int(v) for v in c.to_list()]
        if any(digits[1:]):
            raise AssertionError("norm left the prime field")
        coeffs.append(digits[0] if digits else 0)
    factors = flint.nmod_poly(coeffs, spec.p).factor_squarefree()[1]
    if len(factors) != 1:
        return False
    r = factors[0][0]
    D = r.degree()
    if n * gcd_int(D, spec.e) != D:
        return False
    return bool(h.is_squarefree()) and _rabin_nmod(r)


def flint_available():
    try:
        import flint  # noqa: F401
    except ImportError:
        return False
    return True


def is_irreducible(f, backend=None):
    """Irreducibility over the coefficient field.

    backend: "native" (Rabin test above), "flint", or None to pick native up to
    NATIVE_DEGREE_LIMIT and FLINT beyond it when installed.
    """
    if f.degree < 1:
        raise ValueError("irreducibility needs deg f >= 1")
    if backend is None:
        backend = "flint" if f.degree > NATIVE_DEGREE_LIMIT and flint_available() else "native"
    if backend == "native":
        return _is_irreducible_native(f)
    if backend == "flint":
        return _is_irreducible_flint(f)
    raise ValueError(f"unknown irreducibility backend {backend!r}")


# --- text forms ----------------------------------------------------------------


def format_poly(f):
    """Text form like "x^4+4*x^2+1"; coefficients in element print form."""
    if not f:
        return "0"
    terms = []
    for k in range(f.degree, -1, -1):
        c = f.coeffs[k]
        if not c:
            continue
        label = format_element(FieldElement(f.spec, c))
        mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
        if not mono:
            terms.append(label)
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{label}*{mono}")
    return "+".join(terms)


_TERM_SPLIT = re.compile(r"(?=[+-])")


def parse_poly(spec, text):
    """Parse "x^4+4*x^2+1" or the ascending coefficient list "1,0,4,0,1"."""
    text = text.replace(" ", "")
    if "x" not in text:
        return Poly(spec, [parse_element(spec, t) for t in text.split(",")])
    total = Poly(spec)
    for term in _TERM_SPLIT.split(text):
        if not term:
            continue
        sign = -1 if term[0] == "-" else 1
        term = term.lstrip("+-")
        coeff = spec.one
        power = 0
        for factor in term.split("*"):
            if "x" in factor and not factor.startswith("x"):
                head, factor = factor.split("x", 1)
                coeff = coeff * parse_element(spec, head)
                factor = "x" + factor
            if factor == "x":
                power += 1
            elif factor.startswith("x^"):
                power += int(factor[2:])
            else:
                coeff = coeff * parse_element(spec, factor)
        mono = Poly(spec, [0] * power + [coeff])
        total = total - mono if sign < 0 else total + mono
    return total

