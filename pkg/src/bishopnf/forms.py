"""Normal-form data: the Moser invariant and the invariant table."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .fields import Field, lift
from .series import SurfaceSeries


def invariant_indices(s: int, D: int) -> list[int]:
    """Indices ``n = k s + j`` with ``k >= 1``, ``2 <= j <= s - 1`` and ``n <= D``."""
    return [n for n in range(s + 2, D + 1) if n % s not in (0, 1)]


@dataclass(frozen=True)
class NormalForm:
    """``w = z zbar + 2 Re{z^s + sum lambda_n z^n}`` known to degree ``degree``."""

    field: Field
    s: int
    degree: int
    lambdas: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.s < 3:
            raise ValueError("Moser invariant must be at least 3")
        allowed = set(invariant_indices(self.s, self.degree))
        bad = [n for n in self.lambdas if n not in allowed]
        if bad:
            raise ValueError(f"indices {bad} are not invariant slots for s={self.s}, D={self.degree}")
        full = {n: self.field(self.lambdas.get(n, 0)) for n in sorted(allowed)}
        object.__setattr__(self, "lambdas", full)

    def __getitem__(self, n: int):
        return self.lambdas[n]

    def nonzero(self) -> dict:
        return {n: v for n, v in self.lambdas.items() if not self.field.is_zero(v)}

    def all_zero(self) -> bool:
        return not self.nonzero()

    def residue(self, n: int) -> int:
        return n % self.s

    def truncate(self, degree: int) -> "NormalForm":
        degree = min(degree, self.degree)
        return NormalForm(self.field, self.s, degree, {n: v for n, v in self.lambdas.items() if n <= degree})

    def lift(self, field: Field) -> "NormalForm":
        return NormalForm(field, self.s, self.degree,
                          {n: lift(v, self.field, field) for n, v in self.lambdas.items()})

    def surface(self, degree: int | None = None) -> SurfaceSeries:
        D = self.degree if degree is None else degree
        F = self.field
        coeffs = {(1, 1): F.one}
        if self.s <= D:
            coeffs[(self.s, 0)] = F.one
            coeffs[(0, self.s)] = F.one
        for n, v in self.lambdas.items():
            if n <= D:
                coeffs[(n, 0)] = v
                coeffs[(0, n)] = v.conjugate()
        return SurfaceSeries(F, D, coeffs)

    def __eq__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return (self.s == other.s and self.degree == other.degree and self.field == other.field
                and all(self.field.eq(self.lambdas[n], other.lambdas[n]) for n in self.lambdas))

    __hash__ = None  # type: ignore[assignment]
