"""Origin-preserving holomorphic maps and their action on graphs.

A :class:`HoloTransform` is ``(z, w) -> (c z + f(z, w), |c|^2 w + g(z, w))``.
For the rotations used by the normal form ``|c| = 1``; a non-unit ``c`` only
appears in the numeric scaling mode, where the ``|c|^2`` factor keeps the
``z zbar`` coefficient equal to one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import Field, FieldError
from .series import HoloSeries2, PowerCache, SurfaceSeries, conj_series, ord, substitute_graph


class ShapeError(ValueError):
    """A map violates the admissible shape ``f = O(|w| + |z|^2)``, ``g = O(|w|^2 + |z|^3 + |zw|)``."""


class TruncationError(ValueError):
    """A truncated object was asked for more precision than it carries."""


F_FORBIDDEN = {(0, 0), (1, 0)}
G_FORBIDDEN = {(0, 0), (1, 0), (0, 1), (2, 0)}


@dataclass(frozen=True)
class HoloTransform:
    field: Field
    c: object
    f: HoloSeries2
    g: HoloSeries2

    @classmethod
    def identity(cls, field: Field, weight: int) -> "HoloTransform":
        return cls(field, field.one, HoloSeries2.zero(field, weight - 1), HoloSeries2.zero(field, weight))

    @classmethod
    def rotation(cls, c, field: Field, weight: int) -> "HoloTransform":
        return cls(field, field(c), HoloSeries2.zero(field, weight - 1), HoloSeries2.zero(field, weight))

    @property
    def mu(self):
        return self.c * self.c.conjugate()

    @property
    def weight(self) -> int:
        """Normal weight to which the map as a whole is reliable."""
        return min(self.f.weight + 1, self.g.weight)

    def validate(self, require_root_of_unity: bool = True) -> "HoloTransform":
        bad_f = F_FORBIDDEN & set(self.f.coeffs)
        bad_g = G_FORBIDDEN & set(self.g.coeffs)
        if bad_f or bad_g:
            raise ShapeError(f"forbidden low-order terms: f {sorted(bad_f)}, g {sorted(bad_g)}")
        if self.field.is_zero(self.c):
            raise ShapeError("linear coefficient of z must be nonzero")
        if require_root_of_unity and self.field.exact and not self.field.is_root_of_unity(self.c):
            raise ShapeError("linear part must be a rotation by a root of unity")
        return self

    def is_identity(self, weight: int | None = None) -> bool:
        F = self.field
        if not F.eq(self.c, F.one):
            return False
        fw = self.f.weight if weight is None else weight - 1
        gw = self.g.weight if weight is None else weight
        return (all(a + 2 * b > fw for a, b in self.f.coeffs)
                and all(a + 2 * b > gw for a, b in self.g.coeffs))

    def truncate(self, weight: int) -> "HoloTransform":
        return HoloTransform(self.field, self.c, self.f.truncate(weight - 1), self.g.truncate(weight))

    def lift(self, field: Field) -> "HoloTransform":
        from .fields import lift as lift_value
        return HoloTransform(field, lift_value(self.c, self.field, field), self.f.lift(field), self.g.lift(field))

    def on_graph(self, H: SurfaceSeries, degree: int | None = None,
                 w_powers: PowerCache | None = None) -> tuple[SurfaceSeries, SurfaceSeries]:
        """``(Z, W) = (c z + f(z, H), |c|^2 H + g(z, H))`` as series in ``(z, zbar)``."""
        D = H.degree if degree is None else min(degree, H.degree)
        if w_powers is None:
            w_powers = PowerCache(H.truncate(D))
        F = self.field
        Zf = substitute_graph(self.f.with_weight(max(self.f.weight, D)), H, D, w_powers)
        Wg = substitute_graph(self.g.with_weight(max(self.g.weight, D)), H, D, w_powers)
        Z = SurfaceSeries(F, D, {(1, 0): self.c}) + Zf
        W = H.truncate(D).scale(self.mu) + Wg
        return Z, W


def _check_field(*objs):
    fields = {o.field for o in objs}
    if len(fields) > 1:
        raise FieldError("all operands must share one coefficient field")


def compose(T1: HoloTransform, T2: HoloTransform, W: int | None = None) -> HoloTransform:
    """The map ``T2 o T1`` (apply ``T1`` first), truncated at normal weight ``W``."""
    _check_field(T1, T2)
    F = T1.field
    wf = min(T1.f.weight, T2.f.weight, T1.g.weight + 1)
    wg = min(T1.g.weight, T2.g.weight, T1.f.weight + 3)
    if W is not None:
        if W - 1 > wf or W > wg:
            raise TruncationError(f"inputs do not determine the composition to weight {W}")
        wf, wg = W - 1, W
    top = max(wf, wg)
    X = (HoloSeries2(F, top, {(1, 0): T1.c}) + T1.f.with_weight(top)).with_weight(top)
    Y = (HoloSeries2(F, top, {(0, 1): T1.mu}) + T1.g.with_weight(top)).with_weight(top)
    need_a = max((a for a, _ in list(T2.f.coeffs) + list(T2.g.coeffs)), default=0)
    need_b = max((b for _, b in list(T2.f.coeffs) + list(T2.g.coeffs)), default=0)
    Xp = [HoloSeries2(F, top, {(0, 0): F.one})]
    for _ in range(need_a):
        Xp.append(Xp[-1] * X)
    Yp = [HoloSeries2(F, top, {(0, 0): F.one})]
    for _ in range(need_b):
        Yp.append(Yp[-1] * Y)

    def substitute(h: HoloSeries2, weight: int) -> HoloSeries2:
        out: dict = {}
        for (a, b), c in h.coeffs.items():
            if a + 2 * b > weight:
                continue
            prod = Xp[a] if b == 0 else (Yp[b] if a == 0 else Xp[a] * Yp[b])
            for key, v in prod.coeffs.items():
                if key[0] + 2 * key[1] <= weight:
                    t = out.get(key)
                    out[key] = v * c if t is None else t + v * c
        return HoloSeries2(F, weight, out)

    f = (T1.f.with_weight(wf).scale(T2.c) + substitute(T2.f, wf)).with_weight(wf)
    g = (T1.g.with_weight(wg).scale(T2.mu) + substitute(T2.g, wg)).with_weight(wg)
    return HoloTransform(F, T1.c * T2.c, f, g)


def pushforward(H: SurfaceSeries, T: HoloTransform, D: int | None = None) -> SurfaceSeries:
    """The graph ``H*`` of the image surface: ``W = H*(Z, conj Z)`` on the graph of ``H``.

    Solved degree by degree: since ``Z = c z + O(|z|^2)``, the degree ``d`` part
    of ``H*`` is read off from ``[W - sum_{e<d} H*_e(Z, conj Z)]_d`` after undoing
    the rotation.
    """
    _check_field(H, T)
    F = H.field
    D = H.degree if D is None else D
    if D > H.degree:
        raise TruncationError(f"surface known only to degree {H.degree}, asked for {D}")
    if T.f.weight < D - 1 or T.g.weight < D:
        raise TruncationError(f"transform known to weight {T.weight}, need {D}")
    if ord(H) < 2:
        raise ValueError("graph must vanish to second order")
    T.validate(require_root_of_unity=False)
    H = H.truncate(D)
    Z, W = T.on_graph(H, D)
    Zb = conj_series(Z)
    Zp, Zbp = PowerCache(Z), PowerCache(Zb)
    c, cb = T.c, T.c.conjugate()
    inv_c, inv_cb = 1 / c, 1 / cb
    acc = SurfaceSeries.zero(F, D)
    out: dict = {}
    for d in range(D + 1):
        R = (W - acc).homogeneous_part(d)
        if not R.coeffs:
            continue
        block = {}
        for (p, q), v in R.coeffs.items():
            block[(p, q)] = v * (inv_c ** p) * (inv_cb ** q)
        out.update(block)
        if d == D:
            break
        for (p, q), v in block.items():
            acc = acc + (Zp[p] * Zbp[q]).scale(v)
    return SurfaceSeries(F, D, out)


def evaluate_on(target: SurfaceSeries, Z: SurfaceSeries, Zp: PowerCache | None = None) -> SurfaceSeries:
    """``target(Z, conj Z)`` truncated at the degree of ``Z``."""
    F = Z.field
    Zp = Zp or PowerCache(Z)
    D = Z.degree
    conj_cache: dict = {}

    def zbar_power(q):
        if q not in conj_cache:
            conj_cache[q] = conj_series(Zp[q])
        return conj_cache[q]

    out: dict = {}
    for (p, q), v in target.coeffs.items():
        if p + q > D:
            continue
        if q == 0:
            term = Zp[p]
        elif p == 0:
            term = zbar_power(q)
        else:
            term = Zp[p] * zbar_power(q)
        for key, x in term.coeffs.items():
            t = out.get(key)
            out[key] = x * v if t is None else t + x * v
    return SurfaceSeries(F, D, {k: x for k, x in out.items() if not F.is_zero(x)}, _trusted=True)


def graph_residual(H: SurfaceSeries, T: HoloTransform, target: SurfaceSeries,
                   D: int | None = None) -> SurfaceSeries:
    """``W - target(Z, conj Z)`` on the graph of ``H``; zero exactly when ``T`` maps ``H`` onto ``target``."""
    _check_field(H, T, target)
    D = min(H.degree, target.degree) if D is None else D
    if D > H.degree or D > target.degree:
        raise TruncationError("residual requested beyond the available truncation")
    if T.f.weight < D - 1 or T.g.weight < D:
        raise TruncationError(f"transform known to weight {T.weight}, need {D}")
    Z, W = T.on_graph(H.truncate(D), D)
    return W - evaluate_on(target.truncate(D), Z)
