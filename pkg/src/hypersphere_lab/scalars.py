"""Scalar backends and the sign/zero decision contract.

Three interchangeable scalar kinds flow through the geometry layer:

* exact rationals -- plain ``fractions.Fraction`` (always reduced, positive
  denominator);
* cyclotomic field elements -- coefficient vectors modulo the N-th
  cyclotomic polynomial, N a multiple of 4 so that i, cos(2*pi*j/n) and
  sin(2*pi*j/n) all live in one field for every n dividing N;
* certified intervals -- outward-rounded mpmath intervals carrying their
  working precision in bits.

Zero-testing is exact on the first two backends.  Interval scalars never
certify equality: their zero test answers False (certified nonzero) or
``INDETERMINATE``, never True.
"""

from __future__ import annotations

import functools
import math
import os
from fractions import Fraction

import numpy as np
from mpmath import iv

from .errors import ConductorError, DomainError, ResourceError

DEFAULT_START_BITS = 128
DEFAULT_BITS_CAP = 4096
BITS_ENV_VAR = "HYPERSPHERE_LAB_BITS"

# int64 headroom for the numpy convolution fast path
_SAFE_INT64 = 1 << 62


_configured_cap: int | None = None


def configure_bits_cap(cap: int | None):
    """Set the process-wide precision ceiling (the env var still wins)."""
    global _configured_cap
    if cap is not None and cap < DEFAULT_START_BITS:
        raise ResourceError(f"precision cap must be at least {DEFAULT_START_BITS}, got {cap}")
    _configured_cap = cap


def bits_cap() -> int:
    """Precision ceiling for the escalation ladder.

    Precedence: HYPERSPHERE_LAB_BITS environment variable, then the value
    set by configure_bits_cap, then the default.
    """
    raw = os.environ.get(BITS_ENV_VAR)
    if raw is not None:
        cap = int(raw)
        if cap < DEFAULT_START_BITS:
            raise ResourceError(
                f"{BITS_ENV_VAR} must be at least {DEFAULT_START_BITS}, got {cap}"
            )
        return cap
    if _configured_cap is not None:
        return _configured_cap
    return DEFAULT_BITS_CAP


class _IndeterminateType:
    """Tri-state 'unknown' outcome. Refuses truth-testing so it can never be
    silently coerced to False inside a counting loop."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        raise TypeError("indeterminate predicate outcome has no truth value")

    def __repr__(self):
        return "INDETERMINATE"


INDETERMINATE = _IndeterminateType()


def is_indeterminate(value) -> bool:
    return value is INDETERMINATE


# ---------------------------------------------------------------------------
# cyclotomic polynomial machinery
# ---------------------------------------------------------------------------


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _pdeg(p) -> int:
    for i in range(len(p) - 1, -1, -1):
        if p[i]:
            return i
    return -1


def _pdivmod(num, den):
    """Quotient and remainder in Q[x]; den must be nonzero."""
    num = list(num)
    dd = _pdeg(den)
    q = [Fraction(0)] * max(1, _pdeg(num) - dd + 1)
    while _pdeg(num) >= dd:
        dn = _pdeg(num)
        c = num[dn] / den[dd]
        k = dn - dd
        q[k] += c
        for i in range(dd + 1):
            num[i + k] -= c * den[i]
    return q, num


def _pmul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _psub(p, q):
    out = [Fraction(c) for c in p] + [Fraction(0)] * max(0, len(q) - len(p))
    for i, b in enumerate(q):
        out[i] -= b
    return out


def _poly_divide_exact(num: list[int], den: list[int]) -> list[int]:
    # den is monic up to its leading +/-1 coefficient; division is exact here
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        q, r = divmod(c, lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[i] = q
        if q:
            for j, dj in enumerate(den):
                num[i + j] -= q * dj
    if any(num[: len(den) - 1]):
        raise ArithmeticError("nonzero remainder in exact polynomial division")
    return out


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, low degree first."""
    if n == 1:
        return (-1, 1)
    poly = [0] * n + [1]
    poly[0] = -1  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divide_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


class CyclotomicContext:
    """Arithmetic context for Q(zeta_N) with N a multiple of 4.

    Elements are represented on the power basis 1, z, ..., z^(phi(N)-1)
    modulo the N-th cyclotomic polynomial.  The complex embedding used for
    interval evaluation sends z to exp(2*pi*i*embedding_index/N).
    """

    def __init__(self, conductor: int, embedding_index: int = 1, degree_cap: int | None = 1024):
        if conductor % 4 != 0:
            raise ConductorError(f"conductor must be a multiple of 4, got {conductor}")
        if math.gcd(embedding_index, conductor) != 1:
            raise ConductorError("embedding index must be coprime to the conductor")
        self.conductor = conductor
        self.embedding_index = embedding_index
        self.degree = euler_phi(conductor)
        if degree_cap is not None and self.degree > degree_cap:
            raise ResourceError(
                f"field degree {self.degree} for conductor {conductor} exceeds cap {degree_cap}"
            )
        self.poly = cyclotomic_polynomial(conductor)
        assert len(self.poly) == self.degree + 1 and self.poly[-1] == 1

        # power_table[k] = coefficient vector of z^k reduced mod the
        # cyclotomic polynomial, for 0 <= k < N.
        deg = self.degree
        table = []
        vec = [0] * deg
        vec[0] = 1
        for _ in range(conductor):
            table.append(tuple(vec))
            carry = vec[deg - 1]
            vec = [0] + vec[: deg - 1]
            if carry:
                for i in range(deg):
                    vec[i] -= carry * self.poly[i]
        self.power_table = tuple(table)
        self._reduction_np = np.array(
            [table[deg + i] for i in range(deg - 1)], dtype=np.int64
        ) if deg > 1 else np.zeros((0, 1), dtype=np.int64)
        self._table_max = max(1, max(abs(c) for row in table for c in row))
        self._root_cache: dict[int, list[tuple]] = {}

    # -- element constructors ------------------------------------------------

    def element(self, coeffs) -> "CycloElement":
        coeffs = list(coeffs)
        if len(coeffs) > self.degree:
            raise ValueError("coefficient vector longer than field degree")
        coeffs += [0] * (self.degree - len(coeffs))
        den = 1
        for c in coeffs:
            if isinstance(c, Fraction):
                den = den * c.denominator // math.gcd(den, c.denominator)
        num = tuple(int(c * den) if isinstance(c, Fraction) else c * den for c in coeffs)
        return CycloElement(self, num, den)

    def from_rational(self, value) -> "CycloElement":
        q = Fraction(value)
        num = (q.numerator,) + (0,) * (self.degree - 1)
        return CycloElement(self, num, q.denominator)

    def zero(self) -> "CycloElement":
        return CycloElement(self, (0,) * self.degree, 1)

    def one(self) -> "CycloElement":
        return self.from_rational(1)

    def zeta_power(self, k: int) -> "CycloElement":
        return CycloElement(self, self.power_table[k % self.conductor], 1)

    def cos_sin(self, j: int, n: int) -> tuple["CycloElement", "CycloElement"]:
        """Exact (cos(2*pi*j/n), sin(2*pi*j/n)); n must divide the conductor."""
        if n <= 0 or self.conductor % n != 0:
            raise ConductorError(f"{n} does not divide conductor {self.conductor}")
        step = self.conductor // n
        m = (j * step) % self.conductor
        quarter = 3 * self.conductor // 4
        cos = (self.zeta_power(m) + self.zeta_power(-m)) * Fraction(1, 2)
        # sin t = -i (z^m - z^-m)/2 with -i = z^(3N/4)
        sin = (self.zeta_power(quarter + m) - self.zeta_power(quarter - m)) * Fraction(1, 2)
        return cos, sin

    # -- embedding support ----------------------------------------------------

    def _roots(self, bits: int) -> list[tuple]:
        """Interval enclosures of (Re, Im) of z^k for k < degree."""
        cached = self._root_cache.get(bits)
        if cached is not None:
            return cached
        old = iv.prec
        iv.prec = bits + 16
        try:
            two_pi = 2 * iv.pi
            roots = []
            for k in range(self.degree):
                theta = (two_pi * ((k * self.embedding_index) % self.conductor)) / self.conductor
                roots.append((iv.cos(theta), iv.sin(theta)))
        finally:
            iv.prec = old
        self._root_cache[bits] = roots
        return roots

    def __repr__(self):
        return f"CyclotomicContext(conductor={self.conductor}, degree={self.degree})"


_CONTEXT_CACHE: dict[tuple[int, int], CyclotomicContext] = {}


def get_context(conductor: int, embedding_index: int = 1) -> CyclotomicContext:
    key = (conductor, embedding_index)
    ctx = _CONTEXT_CACHE.get(key)
    if ctx is None:
        ctx = CyclotomicContext(conductor, embedding_index)
        _CONTEXT_CACHE[key] = ctx
    return ctx


def context_for_order(n: int) -> CyclotomicContext:
    """Smallest valid context containing cos/sin of all multiples of 2*pi/n."""
    return get_context(4 * n // math.gcd(4, n))


def trig_pair(j: int, n: int, ctx: CyclotomicContext | None = None):
    """Exact cyclotomic (cos(2*pi*j/n), sin(2*pi*j/n))."""
    if ctx is None:
        ctx = context_for_order(n)
    return ctx.cos_sin(j, n)


def _mul_vectors(ctx: CyclotomicContext, x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
    deg = ctx.degree
    if deg == 1:
        return (x[0] * y[0],)
    xmax = max(map(abs, x))
    ymax = max(map(abs, y))
    if xmax and ymax:
        bound = xmax * ymax * deg
        if bound * ctx._table_max * deg < _SAFE_INT64:
            conv = np.convolve(np.array(x, dtype=np.int64), np.array(y, dtype=np.int64))
            out = conv[:deg].copy()
            high = conv[deg:]
            if high.size:
                out += high @ ctx._reduction_np
            return tuple(int(v) for v in out)
    # big-coefficient fallback: exact python integers
    conv = [0] * (2 * deg - 1)
    for i, xi in enumerate(x):
        if xi:
            for j, yj in enumerate(y):
                conv[i + j] += xi * yj
    out = conv[:deg]
    for i in range(deg, 2 * deg - 1):
        c = conv[i]
        if c:
            row = ctx.power_table[i]
            for j in range(deg):
                if row[j]:
                    out[j] += c * row[j]
    return tuple(out)


class CycloElement:
    """Immutable element of Q(zeta_N): integer coefficient vector over a
    positive common denominator."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx: CyclotomicContext, num: tuple[int, ...], den: int):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num = tuple(-c for c in num)
            den = -den
        self.ctx = ctx
        self.num = num
        self.den = den

    # -- representation -------------------------------------------------------

    def _normalized(self) -> tuple[tuple[int, ...], int]:
        g = self.den
        for c in self.num:
            g = math.gcd(g, c)
            if g == 1:
                return self.num, self.den
        if g in (0, 1):
            return self.num, self.den
        return tuple(c // g for c in self.num), self.den // g

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise DomainError("element is not rational")
        return Fraction(self.num[0], self.den)

    def conjugate(self) -> "CycloElement":
        ctx = self.ctx
        out = [0] * ctx.degree
        for k, c in enumerate(self.num):
            if c:
                row = ctx.power_table[(-k) % ctx.conductor]
                for j in range(ctx.degree):
                    if row[j]:
                        out[j] += c * row[j]
        return CycloElement(ctx, tuple(out), self.den)

    def is_real(self) -> bool:
        return (self - self.conjugate()).is_zero()

    # -- ring operations --------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycloElement):
            if other.ctx is not self.ctx and other.ctx.conductor != self.ctx.conductor:
                raise ConductorError("mixed cyclotomic conductors")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        g = math.gcd(self.den, other.den)
        la, lb = other.den // g, self.den // g
        num = tuple(a * la + b * lb for a, b in zip(self.num, other.num))
        return CycloElement(self.ctx, num, self.den * la)

    __radd__ = __add__

    def __neg__(self):
        return CycloElement(self.ctx, tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return CycloElement(
                self.ctx, tuple(c * q.numerator for c in self.num), self.den * q.denominator
            )
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloElement(
            self.ctx, _mul_vectors(self.ctx, self.num, other.num), self.den * other.den
        )

    __rmul__ = __mul__

    def inverse(self) -> "CycloElement":
        """Field inverse via the extended Euclidean algorithm in Q[x]."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        r0 = [Fraction(c) for c in self.ctx.poly]
        r1 = [Fraction(c, self.den) for c in self.num]
        t0, t1 = [Fraction(0)], [Fraction(1)]
        while _pdeg(r1) >= 0:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            t0, t1 = t1, _psub(t0, _pmul(q, t1))
        # r0 is now a nonzero constant (the modulus is irreducible)
        if _pdeg(r0) != 0:
            raise ZeroDivisionError("element and modulus share a factor")
        coeffs = [c / r0[0] for c in t0[: self.ctx.degree]]
        return self.ctx.element(coeffs)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError
            return self * Fraction(q.denominator, q.numerator)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_rational():
            return self / other.as_rational()
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.from_rational(other)
        if not isinstance(other, CycloElement):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        num, den = self._normalized()
        return hash((self.ctx.conductor, num, den))

    def __repr__(self):
        num, den = self._normalized()
        return f"CycloElement(N={self.ctx.conductor}, coeffs={num}, den={den})"

    # -- certified evaluation ---------------------------------------------

    def embed(self, bits: int):
        """Complex interval enclosure (Re, Im) at the context's embedding."""
        roots = self.ctx._roots(bits)
        old = iv.prec
        iv.prec = bits + 16
        try:
            re = iv.mpf(0)
            im = iv.mpf(0)
            for c, (cr, ci) in zip(self.num, roots):
                if c:
                    re += cr * c
                    im += ci * c
            den = iv.mpf(self.den)
            return re / den, im / den
        finally:
            iv.prec = old

    def real_enclosure(self, bits: int):
        if not self.is_real():
            raise DomainError("element is not fixed by complex conjugation")
        re, _ = self.embed(bits)
        return re


# ---------------------------------------------------------------------------
# certified interval scalars
# ---------------------------------------------------------------------------


def _raw_to_fraction(raw) -> Fraction:
    """Exact value of a raw mpf tuple (sign, mantissa, exponent, bitcount)."""
    sign, man, exp, _ = raw
    if man == 0:
        return Fraction(0)
    return Fraction(-man if sign else man) * Fraction(2) ** exp


def _fraction_to_decimal_string(value: Fraction) -> str:
    """Exact decimal rendering of a dyadic rational."""
    if value == 0:
        return "0"
    num, den = value.numerator, value.denominator
    # den is a power of two; scale to a power of ten
    k = den.bit_length() - 1
    scaled = num * 5**k
    text = str(abs(scaled)).rjust(k + 1, "0")
    if k:
        text = text[:-k].rjust(1, "0") + "." + text[-k:]
    return ("-" if scaled < 0 else "") + text


class IntervalScalar:
    """Closed interval [lo, hi] with outward-rounded arithmetic at a fixed
    working precision."""

    __slots__ = ("val", "bits")

    def __init__(self, val, bits: int):
        self.val = val
        self.bits = bits

    @classmethod
    def from_fraction(cls, value, bits: int) -> "IntervalScalar":
        q = Fraction(value)
        old = iv.prec
        iv.prec = bits
        try:
            v = iv.mpf(q.numerator) / iv.mpf(q.denominator)
        finally:
            iv.prec = old
        return cls(v, bits)

    @classmethod
    def from_endpoints(cls, lo, hi, bits: int) -> "IntervalScalar":
        old = iv.prec
        # extra headroom so exact decimal endpoints round-trip unchanged
        iv.prec = bits + 32
        try:
            v = iv.mpf([lo, hi])
        finally:
            iv.prec = old
        if v.a > v.b:
            raise ValueError("interval lower bound exceeds upper bound")
        return cls(v, bits)

    @property
    def lo(self) -> Fraction:
        return _raw_to_fraction(self.val._mpi_[0])

    @property
    def hi(self) -> Fraction:
        return _raw_to_fraction(self.val._mpi_[1])

    def _binary(self, other, op):
        if isinstance(other, IntervalScalar):
            bits = min(self.bits, other.bits)
            rhs = other.val
        elif isinstance(other, (int, Fraction)):
            bits = self.bits
            rhs = IntervalScalar.from_fraction(other, bits).val
        else:
            return NotImplemented
        old = iv.prec
        iv.prec = bits
        try:
            return IntervalScalar(op(rhs), bits)
        finally:
            iv.prec = old

    def __add__(self, other):
        return self._binary(other, lambda rhs: self.val + rhs)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda rhs: self.val - rhs)

    def __rsub__(self, other):
        return self._binary(other, lambda rhs: rhs - self.val)

    def __mul__(self, other):
        return self._binary(other, lambda rhs: self.val * rhs)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda rhs: self.val / rhs)

    def __neg__(self):
        old = iv.prec
        iv.prec = self.bits + 32  # negation is exact given mantissa headroom
        try:
            return IntervalScalar(-self.val, self.bits)
        finally:
            iv.prec = old

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def __repr__(self):
        return f"IntervalScalar([{self.val.a}, {self.val.b}], bits={self.bits})"

    def __reduce__(self):
        return (
            IntervalScalar.from_endpoints,
            (
                _fraction_to_decimal_string(self.lo),
                _fraction_to_decimal_string(self.hi),
                self.bits,
            ),
        )


# ---------------------------------------------------------------------------
# sign decisions
# ---------------------------------------------------------------------------


def sign_of(value, start_bits: int = DEFAULT_START_BITS, cap: int | None = None):
    """Sign in {-1, 0, +1}, or INDETERMINATE for straddling intervals.

    Rational and cyclotomic inputs always decide: cyclotomic signs use the
    exact zero test first, then interval evaluation with doubling precision
    (termination is guaranteed for nonzero algebraic numbers; the cap is a
    resource guard, not a correctness device).
    """
    if isinstance(value, (int, Fraction)):
        return (value > 0) - (value < 0)
    if isinstance(value, CycloElement):
        if not value.is_real():
            raise DomainError("sign of a non-real cyclotomic element")
        if value.is_zero():
            return 0
        limit = cap if cap is not None else bits_cap()
        bits = start_bits
        while True:
            enc = value.real_enclosure(bits)
            lo = _raw_to_fraction(enc._mpi_[0])
            hi = _raw_to_fraction(enc._mpi_[1])
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if bits >= limit:
                raise ResourceError(
                    f"sign undecided for nonzero element at precision cap {limit} bits"
                )
            bits = min(2 * bits, limit)
    if isinstance(value, IntervalScalar):
        if value.lo > 0:
            return 1
        if value.hi < 0:
            return -1
        return INDETERMINATE
    raise TypeError(f"unsupported scalar type {type(value)!r}")


def is_zero(value):
    """Tri-state zero test: True/False for exact backends, False or
    INDETERMINATE for intervals (an interval never certifies equality)."""
    if isinstance(value, (int, Fraction)):
        return value == 0
    if isinstance(value, CycloElement):
        return value.is_zero()
    if isinstance(value, IntervalScalar):
        if value.contains_zero():
            return INDETERMINATE
        return False
    raise TypeError(f"unsupported scalar type {type(value)!r}")


def backend_of(value) -> str:
    if isinstance(value, (int, Fraction)):
        return "rational"
    if isinstance(value, CycloElement):
        return "cyclotomic"
    if isinstance(value, IntervalScalar):
        return "interval"
    raise TypeError(f"unsupported scalar type {type(value)!r}")


def one_like(value):
    if isinstance(value, (int, Fraction)):
        return Fraction(1)
    if isinstance(value, CycloElement):
        return value.ctx.one()
    if isinstance(value, IntervalScalar):
        return IntervalScalar.from_fraction(1, value.bits)
    raise TypeError(f"unsupported scalar type {type(value)!r}")


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def scalar_to_json(value):
    if isinstance(value, (int, Fraction)):
        return str(Fraction(value))
    if isinstance(value, CycloElement):
        num, den = value._normalized()
        return {
            "conductor": value.ctx.conductor,
            "coeffs": [str(Fraction(c, den)) for c in num],
        }
    if isinstance(value, IntervalScalar):
        return {
            "lo": _fraction_to_decimal_string(value.lo),
            "hi": _fraction_to_decimal_string(value.hi),
            "bits": value.bits,
        }
    raise TypeError(f"unsupported scalar type {type(value)!r}")


def scalar_from_json(data):
    if isinstance(data, str):
        return Fraction(data)
    if isinstance(data, dict) and "conductor" in data:
        ctx = get_context(int(data["conductor"]))
        return ctx.element([Fraction(c) for c in data["coeffs"]])
    if isinstance(data, dict) and "lo" in data:
        return IntervalScalar.from_endpoints(data["lo"], data["hi"], int(data["bits"]))
    raise ValueError(f"unrecognized scalar encoding: {data!r}")
