"""Degree-by-degree reduction to ``w = z zbar + 2 Re{z^s + sum lambda_n z^n}``.

At every degree ``m = N + 1`` the pipeline

1. reads the degree-``m`` block ``B`` of the surface obtained so far (as the
   graph residual of the accumulated map against the normalized polynomial
   ``P_N``),
2. removes every non-harmonic term of ``B`` with one operator solve
   (the harmonic coefficient ``b_m`` survives),
3. when ``m = 1 (mod s)`` or ``m = 0 (mod s)``, removes ``b_m`` too with a
   chain of operator solves started from a kernel element whose free
   parameter is fixed so that the final harmonic residual vanishes.

Every step is certified: lower-degree residual blocks are asserted to vanish
and the finished transform is checked against the normal form with the
independent residual oracle.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field as dc_field

import mpmath

from .fields import Field, NumericField, field_order
from .forms import NormalForm, invariant_indices
from .moser import moser_solve
from .series import HoloSeries2, PowerCache, SurfaceSeries
from .transform import HoloTransform, TruncationError, compose, evaluate_on, graph_residual

log = logging.getLogger(__name__)


class NormalizationError(ValueError):
    pass


class AdmissibilityError(NormalizationError):
    """Input is not an admissible graph with vanishing Bishop invariant."""

    def __init__(self, message: str, kind: str):
        super().__init__(message)
        self.kind = kind          # "bishop-invariant" or "not-complex-tangent"


class QuadricError(NormalizationError):
    """No harmonic term survives up to the truncation degree."""

    def __init__(self, degree: int):
        super().__init__(f"quadric-to-degree-{degree}")
        self.degree = degree


class ScalingError(NormalizationError):
    """The leading harmonic coefficient is not 1 and exact scaling is impossible."""


@dataclass
class NormalizationReport:
    transform: HoloTransform
    surface_out: SurfaceSeries
    residual_checked: bool
    degrees_normalized: int
    b: object = None


@dataclass
class NormalFormResult:
    transform: HoloTransform
    normal_form: NormalForm
    residual_checked: bool
    s: int
    degree: int
    harmonic: dict = dc_field(default_factory=dict)
    elapsed: float = 0.0


def check_admissible(H: SurfaceSeries) -> None:
    F = H.field
    for key in ((0, 0), (1, 0), (0, 1)):
        if not F.is_zero(H.coeffs.get(key, F.zero)):
            raise AdmissibilityError(f"coefficient {key} must vanish: not a complex-tangent graph",
                                     "not-complex-tangent")
    if H.degree < 2:
        raise AdmissibilityError("truncation degree must be at least 2", "not-complex-tangent")
    if not F.eq(H.coeffs.get((1, 1), F.zero), F.one):
        raise AdmissibilityError("z zbar coefficient must be 1: not a complex-tangent graph",
                                 "not-complex-tangent")
    for key in ((2, 0), (0, 2)):
        if not F.is_zero(H.coeffs.get(key, F.zero)):
            raise AdmissibilityError("nonzero Bishop invariant (z^2 or zbar^2 term present)",
                                     "bishop-invariant")


def target_polynomial(F: Field, degree: int, harmonic: dict) -> SurfaceSeries:
    coeffs = {(1, 1): F.one}
    for j, b in harmonic.items():
        if j <= degree and not F.is_zero(b):
            coeffs[(j, 0)] = b
            coeffs[(0, j)] = b.conjugate()
    return SurfaceSeries(F, degree, coeffs)


def _poly_transform(F: Field, D: int, f: dict | HoloSeries2, g: dict | HoloSeries2, c=None) -> HoloTransform:
    """An exact polynomial map, declared reliable to weight ``D``."""
    fc = f.coeffs if isinstance(f, HoloSeries2) else f
    gc = g.coeffs if isinstance(g, HoloSeries2) else g
    return HoloTransform(F, F.one if c is None else c, HoloSeries2(F, D - 1, fc), HoloSeries2(F, D, gc))


def _residual(H: SurfaceSeries, T: HoloTransform, P: SurfaceSeries, m: int,
              w_powers: PowerCache | None = None) -> SurfaceSeries:
    """``W - P(Z, conj Z)`` to degree ``m`` on the graph of ``H``."""
    Z, W = T.on_graph(H, m, w_powers)
    return W - evaluate_on(P.truncate(m), Z)


def _expect_vanishing_below(R: SurfaceSeries, m: int, what: str) -> None:
    low = [k for k in R.coeffs if k[0] + k[1] < m]
    if low:
        raise AssertionError(f"{what}: residual terms {sorted(low)} below degree {m}")


class _Chain:
    """Operator solves started from a kernel seed, run up to degree ``m``.

    Used when ``m = 0, 1 (mod s)``: the seed's free parameter is chosen so
    that the harmonic residual left at degree ``m`` is exactly zero.
    """

    def __init__(self, F: Field, s: int, harmonic: dict, b_m, m: int):
        self.F, self.s, self.m = F, s, m
        self.P = target_polynomial(F, m, {j: v for j, v in harmonic.items() if j < m})
        self.H1 = target_polynomial(F, m, {**harmonic, m: b_m})
        self.powers = PowerCache(self.H1)

    def run(self, seed_f: dict, seed_g: dict, first_level: int):
        F, m = self.F, self.m
        f = HoloSeries2(F, m - 1, seed_f)
        g = HoloSeries2(F, m, seed_g)
        T = _poly_transform(F, m, f, g)
        for level in range(first_level, m + 1):
            R = _residual(self.H1, T, self.P, level, self.powers)
            _expect_vanishing_below(R, level, "kernel chain")
            block = R.homogeneous_part(level)
            if level == m:
                hz, hzb = block.harmonic(m)
                if not (F.is_zero(hz) and F.is_zero(hzb)):
                    return None, hz
            if block.coeffs:
                sol = moser_solve(-block, allow_harmonic=False, m=level, require_hermitian=True)
                f = f + sol.f_part.with_weight(m - 1)
                g = g + sol.g_part.with_weight(m)
                T = _poly_transform(F, m, f, g)
        return (f, g), F.zero

    def solve(self, seed):
        result, h = self.run(*seed)
        if result is None:
            raise AssertionError(f"harmonic residual {h!r} survives at degree {self.m}")
        return result


class _Engine:
    def __init__(self, H: SurfaceSeries, D: int, numeric_scale: bool = False):
        check_admissible(H)
        self.F = H.field
        self.D = D
        self.H = H.truncate(D)
        self.numeric_scale = numeric_scale
        self.powers = PowerCache(self.H)
        self.T = HoloTransform.identity(self.F, D)
        self.harmonic: dict = {}
        self.s: int | None = None

    def block(self, m: int) -> SurfaceSeries:
        P = target_polynomial(self.F, m, self.harmonic)
        R = _residual(self.H, self.T, P, m, self.powers)
        _expect_vanishing_below(R, m, f"degree {m}")
        B = R.homogeneous_part(m)
        c = self.T.c
        if self.F.eq(c, self.F.one):
            return B
        # the block lives in the current coordinates Z = c z + ...
        ic, icb = 1 / c, 1 / c.conjugate()
        return SurfaceSeries(self.F, m, {(p, q): v * ic ** p * icb ** q for (p, q), v in B.coeffs.items()})

    def advance(self, m: int) -> None:
        """Normalize the degree-``m`` block (``m = N + 1``)."""
        F, D = self.F, self.D
        B = self.block(m)
        T_step, b = step_transform(F, D, B, m, self.s, self.harmonic)
        if self.s is None and not F.is_zero(b):
            self.s = m
            if not F.eq(b, F.one):
                kappa = _exact_rotation(F, b, m) if F.exact else None
                if kappa is not None:
                    T_step = compose(T_step, HoloTransform.rotation(kappa, F, D))
                    b = F.one
                elif not self.numeric_scale or F.exact:
                    raise ScalingError(
                        f"z^{m} coefficient after pseudo-normalization is {b!r}, not 1; "
                        "exact mode cannot rescale (use numeric scaling)")
                else:
                    T_step = compose(T_step, _scaling(F, D, b, m))
                    b = F.one
        if not F.is_zero(b):
            self.harmonic[m] = b
        self.T = compose(self.T, T_step, D)

    def verify(self, target: SurfaceSeries) -> bool:
        R = graph_residual(self.H, self.T, target, self.D)
        return R.is_zero()


def _exact_rotation(F: Field, b, s: int):
    """A root of unity ``kappa`` in ``F`` with ``kappa^s = b``, or ``None``."""
    if not F.is_root_of_unity(b):
        return None
    n = math.lcm(2, field_order(F))
    for k in range(n):
        kappa = F.root_of_unity(k, n)
        if F.eq(kappa ** s, b):
            return kappa
    return None


def _scaling(F: Field, D: int, b_s, s: int) -> HoloTransform:
    """``z -> kappa z`` with ``kappa = rho e^{i theta}`` turning ``b_s z^s`` into ``z^s``."""
    with mpmath.workdps(F.dps):
        rho = abs(b_s) ** (mpmath.mpf(1) / (s - 2))
        theta = mpmath.arg(b_s) / s
        kappa = rho * mpmath.expj(theta)
    return HoloTransform(F, F(kappa), HoloSeries2.zero(F, D - 1), HoloSeries2.zero(F, D))


def step_transform(F: Field, D: int, B: SurfaceSeries, m: int, s: int | None, harmonic: dict) -> tuple[HoloTransform, object]:
    """The map normalizing the degree-``m`` block ``B`` and the surviving coefficient ``b_m``."""
    sol = moser_solve(-B.with_degree(m), allow_harmonic=True, m=m, require_hermitian=False)
    T1 = _poly_transform(F, D, sol.f_part, sol.g_part)
    b = sol.phi_coeff
    if s is None or m <= s or m % s not in (0, 1) or F.is_zero(b):
        return T1, b
    chain = _Chain(F, s, harmonic, b, m)
    if m % s == 1:
        t = (m - 1) // s
        # f = a w^t - conj(a) z^2 w^(t-1) is in the kernel at weight 2t

        a = b.conjugate() / F((1 - s) ** t)
        seed = {(0, t): a, (2, t - 1): -a.conjugate()}, {}, 2 * t + 2
    else:
        t = m // s - 1
        # f = beta z w^t, g = (beta + conj beta) w^(t+1) is in the kernel at weight 2t+1
        # ((s-1) beta - conj(beta)) (1-s)^t = b_m
        beta = (b * (s - 1) + b.conjugate()) / F(s * (s - 2) * (1 - s) ** t)
        seed = {(1, t): beta}, {(0, t + 1): beta + beta.conjugate()}, 2 * t + 3
    f, g = chain.solve(seed)
    T23 = _poly_transform(F, D, f, g)
    return compose(T1, T23, D), F.zero


def normalize_surface(H: SurfaceSeries, D: int | None = None, *, numeric_scale: bool = False,
                      dps: int = 60) -> NormalFormResult:
    """Full pipeline: detect ``s``, normalize through degree ``D`` and certify."""
    start = time.perf_counter()
    D = H.degree if D is None else D
    if D > H.degree:
        raise TruncationError(f"surface is known only to degree {H.degree}, asked for {D}")
    if H.field.exact and not numeric_scale:
        return _run(H, D, False, start)
    F = H.field if not H.field.exact else NumericField(dps)
    with mpmath.workdps(F.dps):
        return _run(H.lift(F) if H.field.exact else H, D, True, start)


def _run(H: SurfaceSeries, D: int, numeric_scale: bool, start: float) -> NormalFormResult:
    eng = _Engine(H, D, numeric_scale)
    for m in range(3, D + 1):
        eng.advance(m)
    if eng.s is None:
        raise QuadricError(D)
    s = eng.s
    F = eng.F
    nf = NormalForm(F, s, D, {n: eng.harmonic.get(n, F.zero) for n in invariant_indices(s, D)})
    stray = [j for j in eng.harmonic if j != s and j not in nf.lambdas]
    if stray:
        raise AssertionError(f"harmonic terms survived at resonant degrees {stray}")
    checked = eng.verify(nf.surface())
    if not checked:
        raise AssertionError("normal form fails the residual oracle")
    elapsed = time.perf_counter() - start
    log.debug("normalized to degree %d (s=%d) in %.3fs", D, s, elapsed)
    return NormalFormResult(eng.T, nf, checked, s, D, dict(eng.harmonic), elapsed)


def normal_form(H: SurfaceSeries, D: int | None = None, *, numeric_scale: bool = False
                ) -> tuple[HoloTransform, NormalForm]:
    res = normalize_surface(H, D, numeric_scale=numeric_scale)
    return res.transform, res.normal_form


def detect_s(H: SurfaceSeries, D: int | None = None) -> int | None:
    """First degree with a surviving harmonic term, or ``None`` (quadric to degree ``D``)."""
    D = H.degree if D is None else D
    eng = _Engine(H, D)
    for m in range(3, D + 1):
        B = eng.block(m)
        T_step, b = step_transform(eng.F, D, B, m, None, {})
        if not eng.F.is_zero(b):
            return m
        eng.T = compose(eng.T, T_step, D)
    return None


def normalize_degree(H: SurfaceSeries, s: int, N: int) -> NormalizationReport:
    """One normalization step: normalize the degree ``N + 1`` part of ``H``.

    ``H`` must already equal ``z zbar + 2 Re{z^s + sum_{j<=N} a_j z^j}`` below
    degree ``N + 1``, with ``a_j = 0`` for ``j = 0, 1 (mod s)``.
    """
    check_admissible(H)
    F = H.field
    D = H.degree
    m = N + 1
    if s < 3:
        raise ValueError("s must be at least 3")
    if m > D:
        raise TruncationError(f"degree {m} exceeds the truncation {D}")
    harmonic = {}
    for j in range(3, m):
        a, ab = H.harmonic(j)
        if not F.eq(a, ab.conjugate()):
            raise NormalizationError(f"harmonic pair at degree {j} is not conjugate-symmetric")
        if not F.is_zero(a):
            harmonic[j] = a
    if not F.eq(harmonic.get(s, F.zero), F.one) and s < m:
        raise NormalizationError("the z^s coefficient must be exactly 1")
    if any(j < s or (j > s and j % s in (0, 1)) for j in harmonic):
        raise NormalizationError("harmonic terms present at resonant degrees below N+1")
    P = target_polynomial(F, N, harmonic)
    low = (H.truncate(N) - P)
    if not low.is_zero():
        raise NormalizationError(f"surface is not normalized below degree {m}")
    B = H.homogeneous_part(m).with_degree(m)
    T, b = step_transform(F, D, B, m, s if s < m else None, harmonic)
    out = pushforward_checked(H, T)
    expected = target_polynomial(F, m, {**harmonic, m: b})
    if not out.truncate(m).agrees_with(expected):
        raise AssertionError("normalized block does not have the expected shape")
    return NormalizationReport(T, out, True, m, b)


def pushforward_checked(H: SurfaceSeries, T: HoloTransform) -> SurfaceSeries:
    from .transform import pushforward
    out = pushforward(H, T)
    if not graph_residual(H, T, out).is_zero():
        raise AssertionError("pushforward fails the residual oracle")
    return out


__all__ = [
    "AdmissibilityError", "NormalFormResult", "NormalizationError", "NormalizationReport",
    "QuadricError", "ScalingError", "check_admissible", "detect_s", "normal_form",
    "normalize_degree", "normalize_surface", "step_transform", "target_polynomial",
]
