"""Complexification, branching curve and Puiseux branch points.

The complexification of ``w = z zbar + z^s + zbar^s + E(z, zbar)`` replaces
``zbar`` by an independent variable ``zeta``.  The projection to ``(z, w)``
branches where ``z + s zeta^(s-1) + E_zeta(z, zeta) = 0``; over ``w = u > 0``
the branch points are

    A_j(u) = P(omega_j x),   x = (u / (s - 1))^(1/s),   omega_j = zeta_{2s}^{-(2j+1)},

with ``P = h1 o h3^{-1}`` a series over the base field.  The radical and the
root of unity never enter the coefficients of ``P``; they are carried by the
substitution descriptor of :class:`PuiseuxBranch`.  ``u`` (hence ``x``) is a
formal positive real, so conjugation acts on coefficients and ``omega_j`` only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from gmpy2 import mpq

from .fields import Field, common_cyclotomic, lift
from .series import INFINITE, OneVarSeries, SurfaceSeries, nth_root_unit, revert
from .transform import TruncationError


class BranchError(ValueError):
    """The surface is not of the form ``z zbar + z^s + zbar^s + o(|z|^s)``."""


@dataclass(frozen=True)
class ComplexifiedSurface:
    """``E(z, zeta)`` with ``e_ab`` the coefficient of ``z^a zeta^b``.

    When ``polynomial`` is set the coefficients above ``degree`` are known to
    vanish, so every expansion may be carried to any order.
    """

    field: Field
    s: int
    degree: int
    E: dict
    polynomial: bool = False

    @property
    def max_order(self) -> float:
        """Largest truncation order of ``h1`` determined by the known part of ``E``."""
        return INFINITE if self.polynomial else self.degree

    def graph(self) -> dict:
        """Coefficients of the full defining function ``z zeta + z^s + zeta^s + E``."""
        F = self.field
        out = dict(self.E)
        for key in ((1, 1), (self.s, 0), (0, self.s)):
            out[key] = out.get(key, F.zero) + F.one
        return {k: v for k, v in out.items() if not F.is_zero(v)}

    def restrict(self) -> SurfaceSeries:
        """Set ``zeta = zbar``: recovers the Hermitian graph."""
        return SurfaceSeries(self.field, self.degree, self.graph())


def complexify(H: SurfaceSeries, s: int | None = None, *, polynomial: bool = False) -> ComplexifiedSurface:
    F = H.field
    if not H.is_hermitian():
        raise BranchError("complexification needs a Hermitian (real-valued) graph")
    if s is None:
        harmonic = [a for (a, b) in H.coeffs if b == 0 and a >= 3]
        if not harmonic:
            raise BranchError("no harmonic term z^s present")
        s = min(harmonic)
    if s < 3 or s > H.degree:
        raise BranchError(f"s={s} outside 3..{H.degree}")
    E = dict(H.coeffs)
    for key in ((1, 1), (s, 0), (0, s)):
        if not F.eq(E.pop(key, F.zero), F.one):
            raise BranchError(f"coefficient of {key} must be exactly 1")
    low = sorted(k for k in E if k[0] + k[1] <= s)
    if low:
        raise BranchError(f"E must be o(|z|^{s}); found terms {low}")
    return ComplexifiedSurface(F, s, H.degree, E, polynomial)


def _powers(X: OneVarSeries, top: int) -> list[OneVarSeries]:
    out = [OneVarSeries.from_dict(X.field, X.order, {0: 1}, X.var)]
    for _ in range(top):
        out.append(out[-1] * X)
    return out


def evaluate(coeffs: dict, field: Field, X: OneVarSeries, Y: OneVarSeries) -> OneVarSeries:
    """``sum c_ab X^a Y^b`` for a polynomial coefficient map, exact to ``min`` order."""
    n = min(X.order, Y.order)
    X, Y = X.truncate(n), Y.truncate(n)
    Xp = _powers(X, max((a for a, _ in coeffs), default=0))
    Yp = _powers(Y, max((b for _, b in coeffs), default=0))
    acc = [field.zero] * n
    for (a, b), c in coeffs.items():
        for k, v in enumerate((Xp[a] * Yp[b]).coeffs):
            if not field.is_zero(v):
                acc[k] = acc[k] + v * c
    return OneVarSeries(field, n, acc, X.var)


def _d_zeta(E: dict) -> dict:
    return {(a, b - 1): c * b for (a, b), c in E.items() if b > 0}


def _check_order(C: ComplexifiedSurface, order: int) -> None:
    if order > C.max_order:
        raise TruncationError(f"E is known to degree {C.degree}; order {order} needs more")


def branch_curve(C: ComplexifiedSurface, order: int) -> tuple[OneVarSeries, OneVarSeries]:
    """``h1`` with ``h1 + s zeta^(s-1) + E_zeta(h1, zeta) = 0`` and ``h2`` the value of ``w`` on it.

    ``h1`` is found by the fixed-point iteration ``h1 <- -s zeta^(s-1) - E_zeta(h1, zeta)``;
    each pass fixes at least one more coefficient because ``E_zeta(h1, zeta) = O(zeta^s)``.
    Both series are exact below ``order``.
    """
    _check_order(C, order)
    F, s = C.field, C.s
    zeta = OneVarSeries.variable(F, order, "zeta")
    lead = OneVarSeries.from_dict(F, order, {s - 1: -s}, "zeta")
    Ez = _d_zeta(C.E)
    h1 = lead
    for _ in range(order):
        nxt = lead - evaluate(Ez, F, h1, zeta)
        if nxt == h1:
            break
        h1 = nxt
    h2 = evaluate(C.graph(), F, h1, zeta)
    return h1, h2


def z_equation_residual(C: ComplexifiedSurface, h1: OneVarSeries) -> OneVarSeries:
    """``d/dzeta`` of the defining function at ``(h1(zeta), zeta)``; zero on the branch curve."""
    zeta = OneVarSeries.variable(C.field, h1.order, h1.var)
    return evaluate(_d_zeta(C.graph()), C.field, h1, zeta)


def w_equation_residual(C: ComplexifiedSurface, h1: OneVarSeries, h2: OneVarSeries) -> OneVarSeries:
    zeta = OneVarSeries.variable(C.field, h1.order, h1.var)
    return h2 - evaluate(C.graph(), C.field, h1, zeta)


@dataclass(frozen=True)
class PuiseuxBranch:
    """``A_j(u) = P(omega_j (u/(s-1))^(1/s))`` with ``omega_j = zeta_{2s}^{-(2j+1)}``."""

    P: OneVarSeries
    s: int
    j: int

    @property
    def order(self) -> int:
        return self.P.order

    @property
    def omega_index(self) -> int:
        """``k`` with ``omega_j = zeta_{2s}^k``, ``0 <= k < 2s``."""
        return -(2 * self.j + 1) % (2 * self.s)

    @property
    def leading_root_index(self) -> int:
        """``k`` with ``-omega_j^(s-1) = zeta_{2s}^k``: the phase of the leading term of ``A_j``."""
        return (self.s + self.omega_index * (self.s - 1)) % (2 * self.s)

    def omega(self, field: Field):
        return field.root_of_unity(self.omega_index, 2 * self.s)

    def in_x(self, field: Field) -> OneVarSeries:
        """``P(omega_j x)`` as a series in ``x`` over a field containing ``zeta_{2s}``."""
        w = self.omega(field)
        coeffs, wk = [], field.one
        for c in self.P.coeffs:
            coeffs.append(lift(c, self.P.field, field) * wk)
            wk = wk * w
        return OneVarSeries(field, self.order, coeffs, "x")

    def evaluate(self, u, dps: int = 30) -> mpmath.mpc:
        """Numeric value of the truncated ``A_j(u)`` for ``u > 0``."""
        with mpmath.workdps(dps):
            x = (mpmath.mpf(u) / (self.s - 1)) ** (mpmath.mpf(1) / self.s)
            w = mpmath.expj(-mpmath.pi * (2 * self.j + 1) / self.s)
            t = w * x
            return sum((self.P.field.to_mpc(c) * t ** k for k, c in enumerate(self.P.coeffs)), mpmath.mpc(0))


@dataclass(frozen=True)
class BranchData:
    h1: OneVarSeries
    h2: OneVarSeries
    h3: OneVarSeries
    h3_inverse: OneVarSeries
    branches: tuple


def branch_points(C: ComplexifiedSurface, order: int) -> BranchData:
    """The ``s`` branches, with ``P`` exact below ``order``.

    ``h3 = (-h2/(s-1))^(1/s)`` loses ``s - 1`` orders against ``h2``, so the
    branch curve is expanded ``s - 1`` orders further than requested.
    """
    s = C.s
    h1, h2 = branch_curve(C, order + s - 1)
    F = C.field
    h3 = nth_root_unit(h2 * F(mpq(-1, s - 1)), s)
    h3 = h3.truncate(order)
    h3_inv = revert(h3)
    h3_inv = OneVarSeries(F, h3_inv.order, h3_inv.coeffs, "tau")
    P = h1.truncate(order).compose(h3_inv)
    if not F.eq(P[s - 1], F(-s)):
        raise AssertionError(f"leading coefficient of P is {P[s - 1]!r}, expected {-s}")
    branches = tuple(PuiseuxBranch(P, s, j) for j in range(s))
    return BranchData(h1.truncate(order), h2.truncate(order), h3, h3_inv, branches)


def membership_order(C: ComplexifiedSurface, branch: PuiseuxBranch) -> Fraction:
    """Leading exponent in ``u`` of ``H(A_j(u), conj A_j(u))``.

    Computed over ``Q(zeta_{2s})`` joined with the base field; ``conj A_j``
    is ``conj(P)(conj(omega_j) x)`` because ``x`` is real.
    """
    s = C.s
    L = common_cyclotomic(C.field, extra=2 * s)
    a = branch.in_x(L)
    abar = OneVarSeries(L, a.order, [c.conjugate() for c in a.coeffs], "x")
    graph = {k: lift(v, C.field, L) for k, v in C.graph().items()}
    if not C.polynomial:
        # terms beyond the truncation are O(x^((degree+1)(s-1)))
        n = min(a.order, (C.degree + 1) * (s - 1))
        a, abar = a.truncate(n), abar.truncate(n)
    Q = evaluate(graph, L, a, abar)
    v = Q.valuation()
    if v == INFINITE:
        raise TruncationError("branch series too short to see the leading term")
    return Fraction(int(v), s)


@dataclass(frozen=True)
class LeadingConstant:
    """``rational * base^exponent * |zeta_{2s}^a - zeta_{2s}^b|`` times ``u^u_exponent``.

    With ``chord = None`` the factor is ``zeta_{2s}^root_index`` instead of a modulus.
    """

    rational: Fraction
    base: int
    exponent: Fraction
    s: int
    chord: tuple[int, int] | None = None
    root_index: int | None = None
    u_exponent: Fraction = Fraction(0)

    def value(self, dps: int = 40):
        with mpmath.workdps(dps):
            r = mpmath.mpf(self.rational.numerator) / self.rational.denominator
            x = r * mpmath.mpf(self.base) ** (mpmath.mpf(self.exponent.numerator) / self.exponent.denominator)
            n = 2 * self.s
            if self.chord is not None:
                a, b = self.chord
                return x * abs(mpmath.expj(2 * mpmath.pi * a / n) - mpmath.expj(2 * mpmath.pi * b / n))
            if self.root_index is not None:
                return x * mpmath.expj(2 * mpmath.pi * self.root_index / n)
            return x

    def __float__(self) -> float:
        return float(self.value())

    def describe(self) -> str:
        text = f"{self.rational}*{self.base}^({self.exponent})"
        if self.chord is not None:
            text += f"*|z{2 * self.s}^{self.chord[0]} - z{2 * self.s}^{self.chord[1]}|"
        elif self.root_index is not None:
            text += f"*z{2 * self.s}^{self.root_index}"
        return text


def branch_constant(s: int, j: int) -> LeadingConstant:
    """``C_{s-2,j} = s (s-1)^((1-s)/s) zeta_{2s}^(1+2j)``: leading coefficient of ``A_j(u)/u^(1/2)``."""
    if s < 3:
        raise ValueError("s must be at least 3")
    return LeadingConstant(Fraction(s), s - 1, Fraction(1 - s, s), s,
                           root_index=(1 + 2 * j) % (2 * s), u_exponent=Fraction(s - 2, 2 * s))


def leading_hyperbolic_constant(s: int, j: int) -> LeadingConstant:
    """Leading coefficient of ``L_{1(j+1)}(u)``: ``|C_{s-2,0} - C_{s-2,j}|``."""
    if s < 3:
        raise ValueError("s must be at least 3")
    if not 1 <= j <= s - 1:
        raise ValueError("j must lie in 1..s-1")
    return LeadingConstant(Fraction(s), s - 1, Fraction(1 - s, s), s,
                           chord=(1, 1 + 2 * j), u_exponent=Fraction(s - 2, 2 * s))


__all__ = [
    "BranchData", "BranchError", "ComplexifiedSurface", "LeadingConstant", "PuiseuxBranch",
    "branch_constant", "branch_curve", "branch_points", "complexify", "evaluate",
    "leading_hyperbolic_constant", "membership_order", "w_equation_residual", "z_equation_residual",
]
