"""The graded linear operator ``L(f, g, phi) = g(z, z zbar) - 2 Re{zbar f(z, z zbar) + phi(z)}``.

At level ``m`` the unknowns are

* ``f``: monomials ``z^a w^b`` with ``a + 2b = m - 1`` and ``a >= 2``,
* ``g``: monomials ``z^a w^b`` with ``a + 2b = m``,
* ``phi = c z^m``,

and the equations are the ``m + 1`` coefficients of ``z^p zbar^q`` with
``p + q = m``.  The map is only R-linear because of the conjugate in
``2 Re``, so it is solved as a K-linear system in the unknowns and their
conjugates.  That doubled matrix has integer entries, is square and
invertible; its rational inverse is computed once per level and cached.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from .fields import Field
from .series import HoloSeries2, OneVarSeries, SurfaceSeries


class MoserError(ValueError):
    """Base class for rejected operator equations."""


class NotHermitianError(MoserError):
    pass


class HarmonicTermsError(MoserError):
    pass


class GradingError(MoserError):
    pass


@dataclass(frozen=True)
class MoserSolution:
    m: int
    f_part: HoloSeries2
    g_part: HoloSeries2
    phi_coeff: object

    @property
    def field(self) -> Field:
        return self.f_part.field

    @property
    def phi_part(self) -> OneVarSeries:
        return OneVarSeries.from_dict(self.field, self.m + 1, {self.m: self.phi_coeff}, "z")

    def __add__(self, other: "MoserSolution") -> "MoserSolution":
        if other.m != self.m:
            raise GradingError("cannot add solutions of different levels")
        return MoserSolution(self.m, self.f_part + other.f_part, self.g_part + other.g_part,
                             self.phi_coeff + other.phi_coeff)


def f_monomials(m: int) -> list[tuple[int, int]]:
    return [(m - 1 - 2 * b, b) for b in range((m - 1) // 2 + 1) if m - 1 - 2 * b >= 2]


def g_monomials(m: int) -> list[tuple[int, int]]:
    return [(m - 2 * b, b) for b in range(m // 2 + 1)]


def moser_apply(sol: MoserSolution) -> SurfaceSeries:
    """Evaluate the operator on a graded triple; the result is homogeneous of degree ``m``."""
    m, F = sol.m, sol.field
    out: dict = {}

    def add(key, v):
        t = out.get(key)
        out[key] = v if t is None else t + v

    for (a, b), c in sol.g_part.items():
        if a + 2 * b != m:
            raise GradingError(f"g monomial z^{a} w^{b} is not of normal weight {m}")
        add((a + b, b), c)
    for (a, b), c in sol.f_part.items():
        if a + 2 * b != m - 1:
            raise GradingError(f"f monomial z^{a} w^{b} is not of normal weight {m - 1}")
        add((a + b, b + 1), -c)
        add((b + 1, a + b), -c.conjugate())
    c = sol.phi_coeff
    if not F.is_zero(c):
        add((m, 0), -c)
        add((0, m), -c.conjugate())
    return SurfaceSeries(F, m, out)


@lru_cache(maxsize=None)
def _solver_table(m: int):
    """Rows of the inverse doubled matrix restricted to the unknowns themselves.

    Returns ``(unknowns, rows)`` where ``rows[k]`` is a list of
    ``(equation_index, coefficient, conjugate_flag)`` so that
    ``u_k = sum coefficient * (G[eq] or conj(G[eq]))``.
    """
    eqs = [(p, m - p) for p in range(m + 1)]
    eq_index = {e: i for i, e in enumerate(eqs)}
    unknowns = [("f",) + k for k in f_monomials(m)] + [("g",) + k for k in g_monomials(m)] + [("c", m, 0)]
    n, neq = len(unknowns), len(eqs)
    if n != neq:
        raise AssertionError(f"operator at level {m} is not square ({n} unknowns, {neq} equations)")
    A = [[0] * n for _ in range(neq)]
    B = [[0] * n for _ in range(neq)]
    for k, (kind, a, b) in enumerate(unknowns):
        if kind == "g":
            A[eq_index[(a + b, b)]][k] += 1
        elif kind == "f":
            A[eq_index[(a + b, b + 1)]][k] -= 1
            B[eq_index[(b + 1, a + b)]][k] -= 1
        else:
            A[eq_index[(m, 0)]][k] -= 1
            B[eq_index[(0, m)]][k] -= 1
    M = [A[i] + B[i] for i in range(neq)] + [B[i] + A[i] for i in range(neq)]
    inv = _rational_inverse(M)
    rows = []
    for k in range(n):
        row = []
        for e in range(2 * neq):
            v = inv[k][e]
            if v:
                row.append((e % neq, v, e >= neq))
        rows.append(row)
    return unknowns, eqs, rows


def _rational_inverse(M: list[list[int]]) -> list[list]:
    size = len(M)
    aug = [[mpq(x) for x in row] + [mpq(int(i == j)) for j in range(size)] for i, row in enumerate(M)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col]), None)
        if pivot is None:
            raise AssertionError("operator matrix is singular; the kernel is nontrivial")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


def moser_solve(G: SurfaceSeries, allow_harmonic: bool, *, m: int | None = None,
                require_hermitian: bool = True) -> MoserSolution:
    """Unique normalized solution of ``L(f, g, phi) = G`` at level ``m``.

    ``f`` is normalized to be divisible by ``z^2``.  With
    ``require_hermitian=False`` a complex-valued ``G`` is accepted; its
    solution may then carry a ``z``-dependent, complex ``g``.
    """
    F = G.field
    degrees = {a + b for a, b in G.coeffs}
    if m is None:
        if len(degrees) > 1:
            raise GradingError(f"G is not homogeneous (degrees {sorted(degrees)})")
        if not degrees:
            raise GradingError("level must be given for G = 0")
        m = degrees.pop()
    elif degrees and degrees != {m}:
        raise GradingError(f"G is not homogeneous of degree {m}")
    if m < 3:
        raise GradingError("the operator is only considered at levels m >= 3")
    if require_hermitian and not G.is_hermitian():
        raise NotHermitianError("G must be real-valued (Hermitian)")
    hz, hzb = G.harmonic(m)
    if not allow_harmonic and require_hermitian and not (F.is_zero(hz) and F.is_zero(hzb)):
        raise HarmonicTermsError(f"G carries harmonic terms at degree {m}")

    unknowns, eqs, rows = _solver_table(m)
    rhs = [G.coeffs.get(e, F.zero) for e in eqs]
    rhs_conj = [v.conjugate() for v in rhs]
    values = []
    for row in rows:
        acc = F.zero
        for e, coeff, is_conj in row:
            v = rhs_conj[e] if is_conj else rhs[e]
            if not F.is_zero(v):
                acc = acc + v * coeff
        values.append(acc)
    f_coeffs, g_coeffs, c = {}, {}, F.zero
    for (kind, a, b), v in zip(unknowns, values):
        if kind == "f":
            f_coeffs[(a, b)] = v
        elif kind == "g":
            g_coeffs[(a, b)] = v
        else:
            c = v
    if not allow_harmonic and not F.is_zero(c):
        raise HarmonicTermsError(f"G carries harmonic terms at degree {m}")
    sol = MoserSolution(m, HoloSeries2(F, m - 1, f_coeffs), HoloSeries2(F, m, g_coeffs), c)
    if not moser_apply(sol).agrees_with(G.with_degree(m)):
        raise AssertionError(f"operator solution at level {m} does not reproduce G")
    if require_hermitian and not F.is_zero(sol.g_part[(m, 0)]):
        raise AssertionError("reality should force the z^m coefficient of g to vanish")
    return sol
