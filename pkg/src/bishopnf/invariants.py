"""Moser invariant, rotation action, equivalence and automorphism groups.

All verdicts are relative to a truncation degree: two normal forms that
agree up to degree ``D`` are reported as equivalent *to degree D* and
nothing is claimed beyond it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .fields import CyclotomicField, Field, common_cyclotomic
from .forms import NormalForm
from .normalizer import detect_s
from .series import SurfaceSeries


class QuadricToDegree(NamedTuple):
    degree: int

    def __str__(self) -> str:
        return f"quadric-to-degree-{self.degree}"


def detect_moser_s(H: SurfaceSeries, D: int | None = None) -> int | QuadricToDegree:
    """Lowest degree at which a harmonic term survives pseudo-normalization."""
    D = H.degree if D is None else D
    s = detect_s(H, D)
    return QuadricToDegree(D) if s is None else s


@dataclass(frozen=True)
class RotationSubgroup:
    """Rotations ``z -> zeta_s^l z`` with ``l`` a multiple of ``d``."""

    s: int
    d: int
    degree: int | None = None

    def __post_init__(self):
        if self.s % self.d:
            raise ValueError("generator index must divide s")

    @property
    def order(self) -> int:
        return self.s // self.d

    @property
    def is_full(self) -> bool:
        return self.d == 1

    def members(self) -> list[int]:
        return list(range(0, self.s, self.d))

    def describe(self) -> str:
        if self.is_full:
            text = f"order {self.s}, full Z_{self.s}"
        elif self.order == 1:
            text = "order 1, trivial"
        else:
            text = f"order {self.order}, generated by l={self.d} in Z_{self.s}"
        return text if self.degree is None else f"{text} (to degree {self.degree})"


def rotation_field(s: int, *fields: Field) -> CyclotomicField:
    return common_cyclotomic(*fields, extra=math.lcm(4, s))


def rotate_normal_form(nf: NormalForm, l: int, field: Field | None = None) -> NormalForm:
    """``lambda'_{ks+j} = zeta_s^{j l} lambda_{ks+j}``, computed in a field containing ``zeta_s``."""
    K = field or rotation_field(nf.s, nf.field)
    lifted = nf.lift(K)
    return NormalForm(K, nf.s, nf.degree,
                      {n: v * K.root_of_unity((n % nf.s) * l, nf.s) for n, v in lifted.lambdas.items()})


def rotate_surface(H: SurfaceSeries, l: int, s: int, field: Field | None = None) -> SurfaceSeries:
    """Image of ``H`` under ``z -> zeta_s^{-l} z``: ``a'_{ab} = zeta_s^{l(a-b)} a_{ab}``."""
    K = field or rotation_field(s, H.field)
    Hk = H.lift(K)
    return SurfaceSeries(K, H.degree, {(a, b): v * K.root_of_unity(l * (a - b), s)
                                       for (a, b), v in Hk.coeffs.items()})


def equivalent(nf1: NormalForm, nf2: NormalForm) -> int | None:
    """Smallest ``l`` with ``nf2 = rotate(nf1, l)`` on the common degree, or ``None``."""
    if nf1.s != nf2.s:
        return None
    s = nf1.s
    D = min(nf1.degree, nf2.degree)
    K = rotation_field(s, nf1.field, nf2.field)
    a = nf1.truncate(D).lift(K)
    b = nf2.truncate(D).lift(K)
    for l in range(s):
        if all(K.eq(b.lambdas[n], a.lambdas[n] * K.root_of_unity((n % s) * l, s)) for n in a.lambdas):
            return l
    return None


@dataclass(frozen=True)
class EquivalenceVerdict:
    equivalent: bool
    rotation: int | None
    degree: int
    reason: str = ""

    def describe(self) -> str:
        if self.equivalent:
            return f"equivalent, l={self.rotation} (to degree {self.degree})"
        return f"inequivalent ({self.reason})" if self.reason else f"inequivalent (to degree {self.degree})"


def compare(nf1: NormalForm, nf2: NormalForm) -> EquivalenceVerdict:
    D = min(nf1.degree, nf2.degree)
    if nf1.s != nf2.s:
        return EquivalenceVerdict(False, None, D, f"Moser invariants differ: {nf1.s} vs {nf2.s}")
    l = equivalent(nf1, nf2)
    return EquivalenceVerdict(l is not None, l, D)


def automorphism_group(nf: NormalForm) -> RotationSubgroup:
    """Rotations preserving the normal form to its truncation degree."""
    s = nf.s
    d = 1
    for n in nf.nonzero():
        j = n % s
        d = math.lcm(d, s // math.gcd(s, j))
    return RotationSubgroup(s, d, nf.degree)


def rotation_fixes(nf: NormalForm, l: int) -> bool:
    """Brute-force test: does ``z -> zeta_s^l z`` fix every invariant?"""
    return all((n % nf.s) * l % nf.s == 0 for n in nf.nonzero())


__all__ = [
    "EquivalenceVerdict", "QuadricToDegree", "RotationSubgroup", "automorphism_group", "compare",
    "detect_moser_s", "equivalent", "rotate_normal_form", "rotate_surface",
    "rotation_field", "rotation_fixes",
]
