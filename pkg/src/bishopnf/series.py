"""Truncated formal power series in one and two variables.

Three containers share the same conventions:

* :class:`SurfaceSeries` -- a graph function ``H(z, zbar)`` known up to total
  degree ``degree`` (``alpha + beta <= degree``).
* :class:`HoloSeries2` -- a holomorphic series ``h(z, w)`` known up to normal
  weight ``weight`` (``a + 2b <= weight``).
* :class:`OneVarSeries` -- ``sum c_k t^k`` known for ``k < order``.

Coefficients live in sparse dictionaries holding only nonzero entries.  Every
binary operation keeps the smaller of the two truncations, so a result never
claims more precision than its inputs carry.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Mapping

from gmpy2 import mpq

from ._kernels import truncated_product
from .fields import Field, FieldError, QQi, fmt, lift

INFINITE = math.inf


def _clean(field: Field, items: Iterable, keep: Callable[[tuple], bool]) -> dict:
    out = {}
    is_zero = field.is_zero
    for key, value in items:
        if keep(key) and not is_zero(value):
            out[key] = value
    return out


# ------------------------------------------------------------- SurfaceSeries


class SurfaceSeries:
    """``sum a[alpha, beta] z^alpha zbar^beta`` truncated at total degree ``degree``."""

    __slots__ = ("field", "degree", "coeffs")

    def __init__(self, field: Field, degree: int, coeffs: Mapping | None = None, *, _trusted=False):
        self.field = field
        self.degree = degree
        if _trusted:
            self.coeffs = coeffs
        else:
            coeffs = coeffs or {}
            self.coeffs = _clean(field, ((k, field(v)) for k, v in coeffs.items()),
                                 lambda k: k[0] >= 0 and k[1] >= 0 and k[0] + k[1] <= degree)

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, field: Field, degree: int) -> "SurfaceSeries":
        return cls(field, degree, {}, _trusted=True)

    @classmethod
    def monomial(cls, field: Field, degree: int, alpha: int, beta: int, c=1) -> "SurfaceSeries":
        return cls(field, degree, {(alpha, beta): c})

    @classmethod
    def model(cls, field: Field, degree: int, s: int) -> "SurfaceSeries":
        """The model surface ``w = z zbar + z^s + zbar^s``."""
        return cls(field, degree, {(1, 1): 1, (s, 0): 1, (0, s): 1})

    # access ---------------------------------------------------------------
    def __getitem__(self, key: tuple[int, int]):
        if key[0] + key[1] > self.degree:
            raise KeyError(f"coefficient {key} lies beyond truncation degree {self.degree}")
        return self.coeffs.get(key, self.field.zero)

    def items(self):
        return self.coeffs.items()

    def __len__(self):
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def homogeneous_part(self, d: int) -> "SurfaceSeries":
        return SurfaceSeries(self.field, self.degree,
                             {k: v for k, v in self.coeffs.items() if k[0] + k[1] == d}, _trusted=True)

    def truncate(self, degree: int) -> "SurfaceSeries":
        degree = min(degree, self.degree)
        return SurfaceSeries(self.field, degree,
                             {k: v for k, v in self.coeffs.items() if k[0] + k[1] <= degree}, _trusted=True)

    def with_degree(self, degree: int) -> "SurfaceSeries":
        """Same coefficients, reinterpreted at ``degree`` (may raise the declared truncation)."""
        return SurfaceSeries(self.field, degree,
                             {k: v for k, v in self.coeffs.items() if k[0] + k[1] <= degree}, _trusted=True)

    def harmonic(self, m: int) -> tuple:
        """Coefficients of ``z^m`` and ``zbar^m``."""
        return self.coeffs.get((m, 0), self.field.zero), self.coeffs.get((0, m), self.field.zero)

    # algebra --------------------------------------------------------------
    def _check(self, other: "SurfaceSeries"):
        if other.field != self.field:
            raise FieldError(f"field mismatch: {self.field.name} vs {other.field.name}")

    def __add__(self, other):
        if not isinstance(other, SurfaceSeries):
            return NotImplemented
        self._check(other)
        D = min(self.degree, other.degree)
        out = {k: v for k, v in self.coeffs.items() if k[0] + k[1] <= D}
        is_zero = self.field.is_zero
        for k, v in other.coeffs.items():
            if k[0] + k[1] <= D:
                t = out.get(k)
                if t is None:
                    out[k] = v
                else:
                    t = t + v
                    if is_zero(t):
                        del out[k]
                    else:
                        out[k] = t
        return SurfaceSeries(self.field, D, out, _trusted=True)

    def __neg__(self):
        return SurfaceSeries(self.field, self.degree, {k: -v for k, v in self.coeffs.items()}, _trusted=True)

    def __sub__(self, other):
        if not isinstance(other, SurfaceSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "SurfaceSeries":
        c = self.field(c) if not isinstance(c, int) else c
        if self.field.is_zero(c):
            return SurfaceSeries.zero(self.field, self.degree)
        return SurfaceSeries(self.field, self.degree,
                             _clean(self.field, ((k, v * c) for k, v in self.coeffs.items()), lambda k: True),
                             _trusted=True)

    def __mul__(self, other):
        if isinstance(other, SurfaceSeries):
            self._check(other)
            D = min(self.degree, other.degree)
            return SurfaceSeries(self.field, D, _mul2(self.coeffs, other.coeffs, D, self.field),
                                 _trusted=True)
        try:
            return self.scale(other)
        except FieldError:
            return NotImplemented

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int) -> "SurfaceSeries":
        if k < 0:
            raise ValueError("negative powers of surface series are not supported")
        result = SurfaceSeries(self.field, self.degree, {(0, 0): self.field.one}, _trusted=True)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conj(self) -> "SurfaceSeries":
        return conj_series(self)

    def is_hermitian(self) -> bool:
        eq = self.field.eq
        for (a, b), v in self.coeffs.items():
            other = self.coeffs.get((b, a))
            if other is None or not eq(v, other.conjugate()):
                return False
        return True

    def lift(self, field: Field) -> "SurfaceSeries":
        return SurfaceSeries(field, self.degree,
                             {k: lift(v, self.field, field) for k, v in self.coeffs.items()}, _trusted=True)

    def map_coeffs(self, fn) -> "SurfaceSeries":
        return SurfaceSeries(self.field, self.degree, {k: fn(k, v) for k, v in self.coeffs.items()})

    def d_zbar(self) -> "SurfaceSeries":
        """Partial derivative in the second variable."""
        return SurfaceSeries(self.field, self.degree - 1,
                             {(a, b - 1): v * b for (a, b), v in self.coeffs.items() if b}, _trusted=True)

    def d_z(self) -> "SurfaceSeries":
        return SurfaceSeries(self.field, self.degree - 1,
                             {(a - 1, b): v * a for (a, b), v in self.coeffs.items() if a}, _trusted=True)

    def __eq__(self, other):
        if not isinstance(other, SurfaceSeries):
            return NotImplemented
        if self.field != other.field or self.degree != other.degree:
            return False
        return self.agrees_with(other)

    def agrees_with(self, other: "SurfaceSeries", degree: int | None = None) -> bool:
        """Coefficientwise equality up to ``degree`` (default: common truncation)."""
        D = min(self.degree, other.degree) if degree is None else degree
        eq = self.field.eq
        zero = self.field.zero
        keys = {k for k in self.coeffs if k[0] + k[1] <= D} | {k for k in other.coeffs if k[0] + k[1] <= D}
        return all(eq(self.coeffs.get(k, zero), other.coeffs.get(k, zero)) for k in keys)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        if not self.coeffs:
            return f"O(|z|^{self.degree + 1})"
        terms = [f"{fmt(v)}*z^{a}*zb^{b}" for (a, b), v in sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), -kv[0][0]))]
        return " + ".join(terms) + f" + O(|z|^{self.degree + 1})"


def _mul2(A: Mapping, B: Mapping, D: int, field: Field) -> dict:
    """Truncated product of two bivariate coefficient maps under total degree."""
    return truncated_product(field, A, B, D, 1)


# ------------------------------------------------------------- HoloSeries2


class HoloSeries2:
    """``sum c[a, b] z^a w^b`` truncated at normal weight ``a + 2b <= weight``."""

    __slots__ = ("field", "weight", "coeffs")

    def __init__(self, field: Field, weight: int, coeffs: Mapping | None = None, *, _trusted=False):
        self.field = field
        self.weight = weight
        if _trusted:
            self.coeffs = coeffs
        else:
            coeffs = coeffs or {}
            self.coeffs = _clean(field, ((k, field(v)) for k, v in coeffs.items()),
                                 lambda k: k[0] >= 0 and k[1] >= 0 and k[0] + 2 * k[1] <= weight)

    @classmethod
    def zero(cls, field: Field, weight: int) -> "HoloSeries2":
        return cls(field, weight, {}, _trusted=True)

    @classmethod
    def variable_z(cls, field: Field, weight: int) -> "HoloSeries2":
        return cls(field, weight, {(1, 0): 1})

    @classmethod
    def variable_w(cls, field: Field, weight: int) -> "HoloSeries2":
        return cls(field, weight, {(0, 1): 1})

    def __getitem__(self, key):
        return self.coeffs.get(key, self.field.zero)

    def items(self):
        return self.coeffs.items()

    def __len__(self):
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def min_weight(self) -> float:
        """Smallest normal weight carrying a nonzero coefficient (inf for zero)."""
        return min((a + 2 * b for a, b in self.coeffs), default=INFINITE)

    def truncate(self, weight: int) -> "HoloSeries2":
        weight = min(weight, self.weight)
        return HoloSeries2(self.field, weight,
                           {k: v for k, v in self.coeffs.items() if k[0] + 2 * k[1] <= weight}, _trusted=True)

    def with_weight(self, weight: int) -> "HoloSeries2":
        return HoloSeries2(self.field, weight,
                           {k: v for k, v in self.coeffs.items() if k[0] + 2 * k[1] <= weight}, _trusted=True)

    def _check(self, other):
        if other.field != self.field:
            raise FieldError(f"field mismatch: {self.field.name} vs {other.field.name}")

    def __add__(self, other):
        if not isinstance(other, HoloSeries2):
            return NotImplemented
        self._check(other)
        W = min(self.weight, other.weight)
        out = {k: v for k, v in self.coeffs.items() if k[0] + 2 * k[1] <= W}
        is_zero = self.field.is_zero
        for k, v in other.coeffs.items():
            if k[0] + 2 * k[1] <= W:
                t = out.get(k)
                if t is None:
                    out[k] = v
                else:
                    t = t + v
                    if is_zero(t):
                        del out[k]
                    else:
                        out[k] = t
        return HoloSeries2(self.field, W, out, _trusted=True)

    def __neg__(self):
        return HoloSeries2(self.field, self.weight, {k: -v for k, v in self.coeffs.items()}, _trusted=True)

    def __sub__(self, other):
        if not isinstance(other, HoloSeries2):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "HoloSeries2":
        if self.field.is_zero(c):
            return HoloSeries2.zero(self.field, self.weight)
        return HoloSeries2(self.field, self.weight,
                           _clean(self.field, ((k, v * c) for k, v in self.coeffs.items()), lambda k: True),
                           _trusted=True)

    def __mul__(self, other):
        if isinstance(other, HoloSeries2):
            self._check(other)
            W = min(self.weight, other.weight)
            return HoloSeries2(self.field, W, truncated_product(self.field, self.coeffs, other.coeffs, W, 2),
                               _trusted=True)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "HoloSeries2":
        result = HoloSeries2(self.field, self.weight, {(0, 0): self.field.one}, _trusted=True)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conj_coeffs(self) -> "HoloSeries2":
        """The series with conjugated coefficients (``h-bar``)."""
        return HoloSeries2(self.field, self.weight, {k: v.conjugate() for k, v in self.coeffs.items()},
                           _trusted=True)

    def lift(self, field: Field) -> "HoloSeries2":
        return HoloSeries2(field, self.weight,
                           {k: lift(v, self.field, field) for k, v in self.coeffs.items()}, _trusted=True)

    def depends_only_on_w(self) -> bool:
        return all(a == 0 for a, _ in self.coeffs)

    def has_real_coefficients(self) -> bool:
        return all(self.field.is_real(v) for v in self.coeffs.values())

    def compose(self, X: "HoloSeries2", Y: "HoloSeries2") -> "HoloSeries2":
        """``h(X(z, w), Y(z, w))`` truncated at the common normal weight.

        ``X`` must have normal weight >= 1 and ``Y`` normal weight >= 2 so the
        truncation is honest.
        """
        if X.min_weight() < 1 or Y.min_weight() < 2:
            raise ValueError("substituted series must have normal weight at least (1, 2)")
        W = min(self.weight, X.weight, Y.weight)
        Xp = _power_table(X.truncate(W), max((a for a, _ in self.coeffs), default=0))
        Yp = _power_table(Y.truncate(W), max((b for _, b in self.coeffs), default=0))
        out = HoloSeries2.zero(self.field, W)
        for (a, b), c in self.coeffs.items():
            if a + 2 * b <= W:
                out = out + (Xp[a] * Yp[b]).scale(c)
        return out

    def __eq__(self, other):
        if not isinstance(other, HoloSeries2):
            return NotImplemented
        return self.field == other.field and self.weight == other.weight and self.agrees_with(other)

    def agrees_with(self, other: "HoloSeries2", weight: int | None = None) -> bool:
        W = min(self.weight, other.weight) if weight is None else weight
        zero = self.field.zero
        keys = {k for k in self.coeffs if k[0] + 2 * k[1] <= W} | {k for k in other.coeffs if k[0] + 2 * k[1] <= W}
        return all(self.field.eq(self.coeffs.get(k, zero), other.coeffs.get(k, zero)) for k in keys)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        if not self.coeffs:
            return f"O(wt {self.weight + 1})"
        terms = [f"{fmt(v)}*z^{a}*w^{b}" for (a, b), v in sorted(self.coeffs.items(), key=lambda kv: (kv[0][0] + 2 * kv[0][1], kv[0]))]
        return " + ".join(terms) + f" + O(wt {self.weight + 1})"


def _power_table(X, top: int) -> list:
    one_coeffs = {(0, 0): X.field.one}
    powers = [type(X)(X.field, X.weight if isinstance(X, HoloSeries2) else X.degree, one_coeffs, _trusted=True)]
    for _ in range(top):
        powers.append(powers[-1] * X)
    return powers


# ------------------------------------------------------------- OneVarSeries


class OneVarSeries:
    """``sum c_k t^k`` known for ``0 <= k < order``."""

    __slots__ = ("field", "order", "coeffs", "var")

    def __init__(self, field: Field, order: int, coeffs: Iterable = (), var: str = "t"):
        self.field = field
        self.order = order
        c = [field(x) for x in list(coeffs)[:order]]
        c += [field.zero] * (order - len(c))
        self.coeffs = c
        self.var = var

    @classmethod
    def from_dict(cls, field: Field, order: int, terms: Mapping[int, object], var: str = "t") -> "OneVarSeries":
        c = [field.zero] * order
        for k, v in terms.items():
            if k < order:
                c[k] = field(v)
        return cls(field, order, c, var)

    @classmethod
    def variable(cls, field: Field, order: int, var: str = "t") -> "OneVarSeries":
        return cls.from_dict(field, order, {1: 1}, var)

    def __getitem__(self, k: int):
        if k >= self.order:
            raise KeyError(f"t^{k} lies beyond truncation order {self.order}")
        return self.coeffs[k]

    def valuation(self) -> float:
        for k, c in enumerate(self.coeffs):
            if not self.field.is_zero(c):
                return k
        return INFINITE

    def truncate(self, order: int) -> "OneVarSeries":
        order = min(order, self.order)
        return OneVarSeries(self.field, order, self.coeffs[:order], self.var)

    def __add__(self, other):
        if isinstance(other, OneVarSeries):
            n = min(self.order, other.order)
            return OneVarSeries(self.field, n, [a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])], self.var)
        c = list(self.coeffs)
        if self.order:
            c[0] = c[0] + other
        return OneVarSeries(self.field, self.order, c, self.var)

    __radd__ = __add__

    def __neg__(self):
        return OneVarSeries(self.field, self.order, [-a for a in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, OneVarSeries):
            n = min(self.order, other.order)
            out = [self.field.zero] * n
            is_zero = self.field.is_zero
            B = [(j, b) for j, b in enumerate(other.coeffs[:n]) if not is_zero(b)]
            for i, a in enumerate(self.coeffs[:n]):
                if is_zero(a):
                    continue
                for j, b in B:
                    if i + j >= n:
                        break
                    out[i + j] = out[i + j] + a * b
            return OneVarSeries(self.field, n, out, self.var)
        return OneVarSeries(self.field, self.order, [a * other for a in self.coeffs], self.var)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, OneVarSeries):
            return self * c.inverse()
        return OneVarSeries(self.field, self.order, [a / c for a in self.coeffs], self.var)

    def __pow__(self, k: int) -> "OneVarSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result = OneVarSeries.from_dict(self.field, self.order, {0: 1}, self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self) -> "OneVarSeries":
        a0 = self.coeffs[0] if self.order else self.field.zero
        if self.field.is_zero(a0):
            raise ZeroDivisionError("series with zero constant term is not invertible")
        n = self.order
        inv0 = 1 / a0
        out = [inv0] + [self.field.zero] * (n - 1)
        for k in range(1, n):
            acc = self.field.zero
            for j in range(1, k + 1):
                acc = acc + self.coeffs[j] * out[k - j]
            out[k] = -acc * inv0
        return OneVarSeries(self.field, n, out, self.var)

    def derivative(self) -> "OneVarSeries":
        return OneVarSeries(self.field, max(self.order - 1, 0),
                            [self.coeffs[k] * k for k in range(1, self.order)], self.var)

    def compose(self, inner: "OneVarSeries") -> "OneVarSeries":
        """``self(inner(t))``; ``inner`` must have zero constant term."""
        if inner.order and not self.field.is_zero(inner.coeffs[0]):
            raise ValueError("inner series must vanish at 0")
        v = inner.valuation()
        # a term c_k inner^k is O(t^{k v}); the result is reliable below
        # min(inner.order + v - 1, self.order * v)
        if v == INFINITE:
            return OneVarSeries(self.field, inner.order, [self.coeffs[0]] if self.order else [], inner.var)
        n = min(inner.order, self.order * v)
        inner = inner.truncate(n)
        acc = OneVarSeries(self.field, n, [], inner.var)
        for c in reversed(self.coeffs):       # Horner
            acc = acc * inner + c
        return acc

    def is_zero(self) -> bool:
        return all(self.field.is_zero(c) for c in self.coeffs)

    def lift(self, field: Field) -> "OneVarSeries":
        return OneVarSeries(field, self.order, [lift(c, self.field, field) for c in self.coeffs], self.var)

    def __eq__(self, other):
        if not isinstance(other, OneVarSeries):
            return NotImplemented
        return (self.field == other.field and self.order == other.order
                and all(self.field.eq(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        terms = [f"{fmt(c)}*{self.var}^{k}" for k, c in enumerate(self.coeffs) if not self.field.is_zero(c)]
        return (" + ".join(terms) or "0") + f" + O({self.var}^{self.order})"


# ---------------------------------------------------------------- gradings


def ord(series: SurfaceSeries) -> float:
    """Lowest total degree carrying a nonzero coefficient; ``inf`` if none to truncation."""
    return min((a + b for a, b in series.coeffs), default=INFINITE)


def hy_weight(series: SurfaceSeries, s: int) -> float:
    """Weighted order with ``z`` of weight 1 and ``zbar`` of weight ``s - 1``."""
    if s < 3:
        raise ValueError("weight parameter s must be at least 3")
    return min((a + (s - 1) * b for a, b in series.coeffs), default=INFINITE)


def normal_weight_part(h: HoloSeries2, l: int) -> HoloSeries2:
    """Monomials ``z^a w^b`` of ``h`` with ``a + 2b = l``."""
    return HoloSeries2(h.field, h.weight, {k: v for k, v in h.coeffs.items() if k[0] + 2 * k[1] == l},
                       _trusted=True)


def conj_series(H: SurfaceSeries) -> SurfaceSeries:
    """``b[a, b] = conj(a[b, a])``: the series of ``conj(H(z, zbar))``."""
    return SurfaceSeries(H.field, H.degree, {(b, a): v.conjugate() for (a, b), v in H.coeffs.items()},
                         _trusted=True)


class PowerCache:
    """Lazily built powers ``X^0, X^1, ...`` of a fixed surface series."""

    def __init__(self, X: SurfaceSeries):
        self.X = X
        self.powers = [SurfaceSeries(X.field, X.degree, {(0, 0): X.field.one}, _trusted=True)]

    def __getitem__(self, k: int) -> SurfaceSeries:
        while len(self.powers) <= k:
            self.powers.append(self.powers[-1] * self.X)
        return self.powers[k]


def substitute_graph(h: HoloSeries2, H: SurfaceSeries, degree: int | None = None,
                     w_powers: PowerCache | None = None) -> SurfaceSeries:
    """``h(z, H(z, zbar))`` truncated at total degree.

    ``H`` must have order at least 2 (true for every admissible graph), so a
    monomial of normal weight ``l`` contributes only in total degree ``>= l``
    and the result is reliable up to ``min(H.degree, h.weight)``.
    """
    if ord(H) < 2:
        raise ValueError("graph function must vanish to second order")
    D = min(H.degree, h.weight)
    if degree is not None:
        D = min(D, degree)
    if w_powers is None or w_powers.X.degree < D:
        w_powers = PowerCache(H.truncate(D))
    out: dict = {}
    is_zero = H.field.is_zero
    for (a, b), c in h.coeffs.items():
        if a + 2 * b > D:
            continue
        for (p, q), v in w_powers[b].coeffs.items():
            if p + q + a <= D:
                key = (p + a, q)
                t = out.get(key)
                out[key] = v * c if t is None else t + v * c
    return SurfaceSeries(H.field, D, {k: v for k, v in out.items() if not is_zero(v)}, _trusted=True)


def evaluate_surface(H: SurfaceSeries, X: OneVarSeries, Y: OneVarSeries) -> OneVarSeries:
    """``H(X(t), Y(t))`` for one-variable series without constant terms."""
    vx, vy = X.valuation(), Y.valuation()
    if vx < 1 or vy < 1:
        raise ValueError("substituted series must vanish at 0")
    v = min(vx, vy)
    n = min(X.order, Y.order, (H.degree + 1) * v if v != INFINITE else X.order)
    X, Y = X.truncate(n), Y.truncate(n)
    top_a = max((a for a, _ in H.coeffs), default=0)
    top_b = max((b for _, b in H.coeffs), default=0)
    Xp = [OneVarSeries.from_dict(H.field, n, {0: 1}, X.var)]
    for _ in range(top_a):
        Xp.append(Xp[-1] * X)
    Yp = [OneVarSeries.from_dict(H.field, n, {0: 1}, X.var)]
    for _ in range(top_b):
        Yp.append(Yp[-1] * Y)
    out = OneVarSeries(H.field, n, [], X.var)
    for (a, b), c in H.coeffs.items():
        out = out + (Xp[a] * Yp[b]) * c
    return out


# ------------------------------------------------------- reversion and roots


def revert(a: OneVarSeries) -> OneVarSeries:
    """Compositional inverse of ``a = t + O(t^2)``.

    Newton-free Lagrange-style iteration: ``b`` is built one coefficient at a
    time from the requirement ``a(b(t)) = t``.
    """
    F = a.field
    n = a.order
    if n < 2 or not F.is_zero(a.coeffs[0]) or F.is_zero(a.coeffs[1]):
        raise ValueError("reversion needs a series t*(unit)")
    c1 = a.coeffs[1]
    inv1 = 1 / c1
    b = OneVarSeries.from_dict(F, n, {1: inv1}, a.var)
    for k in range(2, n):
        # coefficient k of a(b) with b known through degree k-1; b_k enters linearly as c1*b_k
        err = a.compose(b)[k]
        bk = list(b.coeffs)
        bk[k] = -err * inv1
        b = OneVarSeries(F, n, bk, a.var)
    return b


def nth_root_unit(a: OneVarSeries, s: int) -> OneVarSeries:
    """``r = t * u(t)^(1/s)`` for ``a = t^s * u(t)`` with ``u(0) = 1``.

    The binomial coefficients of ``(1 + x)^(1/s)`` are built incrementally
    from ``C(p, k) = C(p, k-1) * (p - k + 1) / k``.
    """
    F = a.field
    v = a.valuation()
    if v == INFINITE or v != s:
        raise ValueError(f"expected leading exponent {s}, found {v}")
    if not F.eq(a.coeffs[s], F.one):
        raise ValueError("leading coefficient must be exactly 1")
    n = a.order - s                       # u known for t^0 .. t^{n-1}
    u_minus_1 = OneVarSeries(F, n, [F.zero] + a.coeffs[s + 1:s + n], a.var)
    p = mpq(1, s)
    binom = mpq(1)
    root = OneVarSeries.from_dict(F, n, {0: 1}, a.var)
    x_pow = OneVarSeries.from_dict(F, n, {0: 1}, a.var)
    for k in range(1, n):
        binom = binom * (p - k + 1) / k
        x_pow = x_pow * u_minus_1
        if x_pow.is_zero():
            break
        root = root + x_pow * binom
    # multiply by t: shift up one order
    return OneVarSeries(F, n + 1, [F.zero] + root.coeffs, a.var)


def default_field() -> Field:
    return QQi
