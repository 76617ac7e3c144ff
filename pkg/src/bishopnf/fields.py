"""Coefficient fields: exact subfields of C closed under complex conjugation.

Every series in the package carries a ``Field`` object.  Elements are plain
Python objects supporting ``+ - * /``, unary minus, ``conjugate()`` and
mixed arithmetic with ``int`` and ``mpq``.  Decisions about zero-ness always
go through :meth:`Field.is_zero`, so the numeric field can apply a tolerance
while the exact fields compare exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath
from gmpy2 import mpq

RationalType = type(mpq(0))


class FieldError(ValueError):
    """Raised when a value cannot be represented in the requested field."""


def rational(x) -> mpq:
    """Coerce ``int``, ``Fraction``, ``mpq`` or a ``"p/q"`` string to ``mpq``."""
    if isinstance(x, RationalType):
        return x
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if isinstance(x, str):
        text = x.strip()
        try:
            return mpq(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"not an exact rational: {x!r}") from exc
    raise FieldError(f"cannot coerce {type(x).__name__} to a rational")


def rational_str(q) -> str:
    q = rational(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fmt(x) -> str:
    """Readable form of a field element (plain ``p/q`` for rationals)."""
    if isinstance(x, RationalType):
        return rational_str(x)
    if isinstance(x, mpmath.mpc):
        with mpmath.workdps(30):
            re_s, im_s = mpmath.nstr(x.real, 20), mpmath.nstr(abs(x.imag), 20)
        return f"{re_s} {'-' if x.imag < 0 else '+'} {im_s}*I"
    return repr(x)


class Field:
    name = "field"
    exact = True

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def is_zero(self, x) -> bool:
        return not x

    def eq(self, x, y) -> bool:
        return self.is_zero(x - y)

    def conj(self, x):
        return x.conjugate()

    def is_real(self, x) -> bool:
        return self.eq(x, x.conjugate())

    def root_of_unity(self, k: int, n: int):
        raise FieldError(f"{self.name} does not contain the {n}-th roots of unity")

    def is_root_of_unity(self, x) -> bool:
        raise NotImplementedError

    def to_mpc(self, x) -> mpmath.mpc:
        raise NotImplementedError

    def to_complex(self, x) -> complex:
        return complex(self.to_mpc(x))

    def from_parts(self, re, im):
        """Element ``re + i*im`` for rationals ``re``, ``im``."""
        if rational(im) == 0:
            return self(rational(re))
        return self(rational(re)) + self(rational(im)) * self.root_of_unity(1, 4)

    def __repr__(self) -> str:
        return self.name


# ---------------------------------------------------------------- rationals


class RationalField(Field):
    name = "QQ"

    def __call__(self, x):
        if isinstance(x, RationalType):
            return x
        if isinstance(x, (int, Fraction, str)):
            return rational(x)
        raise FieldError(f"{x!r} is not rational")

    def root_of_unity(self, k: int, n: int):
        if (2 * k) % n == 0:
            return mpq(1) if k % n == 0 else mpq(-1)
        return super().root_of_unity(k, n)

    def is_root_of_unity(self, x) -> bool:
        return x in (1, -1)

    def to_mpc(self, x) -> mpmath.mpc:
        return mpmath.mpc(mpmath.mpf(int(x.numerator)) / int(x.denominator))

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


# ---------------------------------------------------------- Gaussian rationals


class Gaussian:
    """``re + i*im`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = re if isinstance(re, RationalType) else mpq(re)
        self.im = im if isinstance(im, RationalType) else mpq(im)

    def __add__(self, o):
        if isinstance(o, Gaussian):
            return Gaussian(self.re + o.re, self.im + o.im)
        if isinstance(o, (int, RationalType)):
            return Gaussian(self.re + o, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, Gaussian):
            return Gaussian(self.re - o.re, self.im - o.im)
        if isinstance(o, (int, RationalType)):
            return Gaussian(self.re - o, self.im)
        return NotImplemented

    def __rsub__(self, o):
        if isinstance(o, (int, RationalType)):
            return Gaussian(o - self.re, -self.im)
        return NotImplemented

    def __mul__(self, o):
        if isinstance(o, Gaussian):
            a, b, c, d = self.re, self.im, o.re, o.im
            if not b:
                return Gaussian(a * c, a * d)
            if not d:
                return Gaussian(a * c, b * c)
            return Gaussian(a * c - b * d, a * d + b * c)
        if isinstance(o, (int, RationalType)):
            return Gaussian(self.re * o, self.im * o)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Gaussian):
            n = o.re * o.re + o.im * o.im
            if not n:
                raise ZeroDivisionError("division by zero in QQ(i)")
            return Gaussian((self.re * o.re + self.im * o.im) / n,
                            (self.im * o.re - self.re * o.im) / n)
        if isinstance(o, (int, RationalType)):
            if not o:
                raise ZeroDivisionError("division by zero in QQ(i)")
            return Gaussian(self.re / o, self.im / o)
        return NotImplemented

    def __rtruediv__(self, o):
        if isinstance(o, (int, RationalType)):
            return Gaussian(o) / self
        return NotImplemented

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __pow__(self, k: int):
        if k < 0:
            return Gaussian(1) / (self ** (-k))
        result, base = Gaussian(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self):
        return Gaussian(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        if isinstance(o, Gaussian):
            return self.re == o.re and self.im == o.im
        if isinstance(o, (int, RationalType, Fraction)):
            return not self.im and self.re == o
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        if not self.im:
            return rational_str(self.re)
        if not self.re:
            return f"{rational_str(self.im)}*I"
        return f"({rational_str(self.re)} + {rational_str(self.im)}*I)"


class GaussianField(Field):
    name = "QQ(i)"

    def __call__(self, x):
        if isinstance(x, Gaussian):
            return x
        if isinstance(x, (int, RationalType, Fraction, str)):
            return Gaussian(rational(x))
        if isinstance(x, CyclotomicNumber):
            raise FieldError("cyclotomic value does not coerce down to QQ(i)")
        raise FieldError(f"cannot coerce {x!r} to QQ(i)")

    def from_parts(self, re, im):
        return Gaussian(rational(re), rational(im))

    def root_of_unity(self, k: int, n: int):
        if (4 * k) % n:
            return super().root_of_unity(k, n)
        return [Gaussian(1), Gaussian(0, 1), Gaussian(-1), Gaussian(0, -1)][(4 * k // n) % 4]

    def is_root_of_unity(self, x) -> bool:
        return (x ** 4) == 1

    def to_mpc(self, x) -> mpmath.mpc:
        return mpmath.mpc(mpmath.mpf(int(x.re.numerator)) / int(x.re.denominator),
                          mpmath.mpf(int(x.im.numerator)) / int(x.im.denominator))

    def __eq__(self, other):
        return isinstance(other, GaussianField)

    def __hash__(self):
        return hash("QQ(i)")


# ---------------------------------------------------------- cyclotomic fields


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    # x^n - 1 = prod_{d | n} Phi_d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_exact_div(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // lead
        out[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    assert not any(num), "inexact polynomial division"
    return out


class CyclotomicField(Field):
    """``QQ(zeta_n)`` with elements stored in the power basis of ``zeta_n``."""

    def __init__(self, n: int):
        if n < 1:
            raise FieldError("cyclotomic order must be positive")
        self.n = n
        self.name = f"QQ(zeta_{n})"
        phi = cyclotomic_polynomial(n)
        self.degree = d = len(phi) - 1
        # reduce[k] = coefficients of x^k mod Phi_n, for 0 <= k < max(n, 2d-1)
        red = []
        cur = [0] * d
        cur[0] = 1
        for _ in range(max(n, 2 * d - 1)):
            red.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(d):
                    cur[j] -= top * phi[j]
        self._reduce = red
        self._high = [[(j, c) for j, c in enumerate(red[k]) if c] for k in range(2 * d - 1)]
        self._conj = [[(j, c) for j, c in enumerate(red[(n - k) % n]) if c] for k in range(d)]

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.n == self.n

    def __hash__(self):
        return hash(("cyclotomic", self.n))

    def element(self, coeffs) -> "CyclotomicNumber":
        return CyclotomicNumber(self, tuple(mpq(c) for c in coeffs))

    def __call__(self, x):
        if isinstance(x, CyclotomicNumber):
            if x.field == self:
                return x
            return self.lift(x)
        if isinstance(x, Gaussian):
            return self.lift(x)
        if isinstance(x, (int, RationalType, Fraction, str)):
            return CyclotomicNumber(self, (rational(x),) + (mpq(0),) * (self.degree - 1))
        raise FieldError(f"cannot coerce {x!r} to {self.name}")

    def zeta_power(self, j: int) -> "CyclotomicNumber":
        return CyclotomicNumber(self, tuple(mpq(c) for c in self._reduce[j % self.n]))

    def root_of_unity(self, k: int, n: int):
        if self.n % n == 0:
            return self.zeta_power(k * (self.n // n))
        if n % 2 == 0 and self.n % (n // 2) == 0 and self.n % 2:
            # odd order field: zeta_{2m} = -zeta_m^{(m+1)/2}
            if k % 2 == 0:
                return self.zeta_power(k // 2 * (self.n // (n // 2)))
            return -self.zeta_power((k * (self.n + 1) // 2) * (self.n // (n // 2)) % self.n)
        return super().root_of_unity(k, n)

    def is_root_of_unity(self, x) -> bool:
        return (x ** (2 * self.n)) == 1

    def lift(self, x):
        """Embed an element of a subfield (QQ, QQ(i), QQ(zeta_m) with m | n)."""
        if isinstance(x, CyclotomicNumber):
            m = x.field.n
            if self.n % m:
                raise FieldError(f"{x.field.name} is not a subfield of {self.name}")
            step = self.n // m
            out = self(0)
            for k, c in enumerate(x.coeffs):
                if c:
                    out = out + self.zeta_power(k * step) * c
            return out
        if isinstance(x, Gaussian):
            if not x.im:
                return self(x.re)
            if self.n % 4:
                raise FieldError(f"i is not in {self.name}")
            return self(x.re) + self.zeta_power(self.n // 4) * x.im
        return self(x)

    def to_mpc(self, x) -> mpmath.mpc:
        total = mpmath.mpc(0)
        for k, c in enumerate(x.coeffs):
            if c:
                total += (mpmath.mpf(int(c.numerator)) / int(c.denominator)) * mpmath.expjpi(
                    mpmath.mpf(2 * k) / self.n)
        return total


class CyclotomicNumber:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: CyclotomicField, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs

    def _wrap(self, o):
        if isinstance(o, CyclotomicNumber):
            if o.field is self.field or o.field == self.field:
                return o
            raise FieldError(f"mixing {self.field.name} and {o.field.name}")
        if isinstance(o, (int, RationalType)):
            return None
        if isinstance(o, Gaussian):
            return self.field.lift(o)
        raise TypeError

    def __add__(self, o):
        try:
            w = self._wrap(o)
        except TypeError:
            return NotImplemented
        if w is None:
            c = list(self.coeffs)
            c[0] = c[0] + o
            return CyclotomicNumber(self.field, tuple(c))
        return CyclotomicNumber(self.field, tuple(a + b for a, b in zip(self.coeffs, w.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        try:
            w = self._wrap(o)
        except TypeError:
            return NotImplemented
        if w is None:
            return CyclotomicNumber(self.field, tuple(a * o for a in self.coeffs))
        F = self.field
        d = F.degree
        prod = [mpq(0)] * (2 * d - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(w.coeffs):
                    if b:
                        prod[i + j] += a * b
        out = prod[:d]
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                for j, r in F._high[k]:
                    out[j] += c * r
        return CyclotomicNumber(F, tuple(out))

    __rmul__ = __mul__

    def conjugate(self):
        F = self.field
        out = [mpq(0)] * F.degree
        for k, c in enumerate(self.coeffs):
            if c:
                for j, r in F._conj[k]:
                    out[j] += c * r
        return CyclotomicNumber(F, tuple(out))

    def inverse(self):
        if not self:
            raise ZeroDivisionError(f"division by zero in {self.field.name}")
        # product of all nontrivial Galois conjugates lands in QQ after multiplying by self
        F = self.field
        others = [k for k in range(2, F.n) if math.gcd(k, F.n) == 1]
        if F.n > 2:
            conj_product = F(1)
            for k in others:
                conj_product = conj_product * self.galois(k)
            norm = self * conj_product
            assert not any(norm.coeffs[1:]), "norm must be rational"
            return conj_product * (1 / norm.coeffs[0])
        return CyclotomicNumber(F, (1 / self.coeffs[0],))

    def galois(self, k: int):
        """Image under zeta -> zeta^k."""
        F = self.field
        out = F(0)
        for j, c in enumerate(self.coeffs):
            if c:
                out = out + F.zeta_power(j * k) * c
        return out

    def __truediv__(self, o):
        if isinstance(o, (int, RationalType)):
            if not o:
                raise ZeroDivisionError(f"division by zero in {self.field.name}")
            return CyclotomicNumber(self.field, tuple(a / o for a in self.coeffs))
        w = self._wrap(o)
        return self * w.inverse()

    def __rtruediv__(self, o):
        return self.inverse() * o

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, o):
        if isinstance(o, CyclotomicNumber):
            return self.field == o.field and self.coeffs == o.coeffs
        if isinstance(o, (int, RationalType, Fraction)):
            return self.coeffs[0] == o and not any(self.coeffs[1:])
        if isinstance(o, Gaussian):
            return self == self.field.lift(o)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                base = rational_str(c)
                terms.append(base if k == 0 else f"{base}*z{self.field.n}^{k}")
        return "(" + " + ".join(terms) + ")" if terms else "0"


# ------------------------------------------------------------- numeric field


class NumericField(Field):
    """Arbitrary-precision complex floats with a zero tolerance.

    Only used by the explicit numeric scaling mode; never by default.
    """

    exact = False

    def __init__(self, dps: int = 60, tol: float = 1e-30):
        self.dps = dps
        self.tol = mpmath.mpf(tol)
        self.name = f"CC[{dps} digits]"

    def __eq__(self, other):
        return isinstance(other, NumericField) and other.dps == self.dps

    def __hash__(self):
        return hash(("numeric", self.dps))

    def __call__(self, x):
        with mpmath.workdps(self.dps):
            if isinstance(x, mpmath.mpc):
                return x
            if isinstance(x, (int, mpmath.mpf, float, complex)):
                return mpmath.mpc(x)
            if isinstance(x, (RationalType, Fraction, str)):
                q = rational(x)
                return mpmath.mpc(mpmath.mpf(int(q.numerator)) / int(q.denominator))
            if isinstance(x, Gaussian):
                return mpmath.mpc(self(x.re).real, self(x.im).real)
        raise FieldError(f"cannot coerce {x!r} to {self.name}")

    def is_zero(self, x) -> bool:
        return abs(x) < self.tol

    def root_of_unity(self, k: int, n: int):
        with mpmath.workdps(self.dps):
            return mpmath.expjpi(mpmath.mpf(2 * k) / n)

    def is_root_of_unity(self, x) -> bool:
        return self.is_zero(abs(x) - 1)

    def to_mpc(self, x) -> mpmath.mpc:
        return mpmath.mpc(x)

    def from_parts(self, re, im):
        return mpmath.mpc(self(re).real, self(im).real)


QQ = RationalField()
QQi = GaussianField()


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> CyclotomicField:
    return CyclotomicField(n)


def field_order(F: Field) -> int:
    """Cyclotomic order of an exact field (1 for QQ, 4 for QQ(i))."""
    if isinstance(F, RationalField):
        return 1
    if isinstance(F, GaussianField):
        return 4
    if isinstance(F, CyclotomicField):
        return F.n
    raise FieldError(f"{F.name} is not an exact cyclotomic field")


def common_cyclotomic(*fields: Field, extra: int = 1) -> CyclotomicField:
    """Smallest QQ(zeta_n) containing every field and the ``extra``-th roots of unity."""
    n = extra
    for F in fields:
        n = math.lcm(n, field_order(F))
    return cyclotomic(n)


def lift(x, source: Field, target: Field):
    if source == target:
        return x
    if isinstance(target, CyclotomicField):
        return target.lift(x)
    if isinstance(target, GaussianField) and isinstance(source, RationalField):
        return Gaussian(x)
    if isinstance(target, NumericField):
        if isinstance(x, CyclotomicNumber):
            with mpmath.workdps(target.dps):
                return x.field.to_mpc(x)
        return target(x)
    raise FieldError(f"cannot lift from {source.name} to {target.name}")
