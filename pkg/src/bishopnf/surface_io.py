"""Surface files and seeded random surfaces.

Format (line oriented, ``#`` starts a comment)::

    version 1
    degree 8
    s 3                      # optional declared Moser invariant
    field QQ(zeta_12)        # optional; default QQ(i)
    1 1 1 0
    3 0 1 0
    4 1 1/2 -3               # z^4 zbar with coefficient 1/2 - 3i

A term line is ``alpha beta`` followed by the coefficient: ``re im`` over
QQ(i), or the ``phi(n)`` power-basis coordinates over QQ(zeta_n).  Only
``alpha >= beta`` may be listed; the conjugate term is implied, and diagonal
coefficients must be real.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from pathlib import Path

from gmpy2 import mpq

from .fields import (CyclotomicField, Field, FieldError, Gaussian, GaussianField, RationalField, QQi,
                     cyclotomic, rational_str)
from .normalizer import check_admissible
from .series import SurfaceSeries

FORMAT_VERSION = 1
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_FIELD = re.compile(r"^QQ\(zeta_(\d+)\)$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class SurfaceFile:
    surface: SurfaceSeries
    declared_s: int | None = None
    version: int = FORMAT_VERSION

    @property
    def degree(self) -> int:
        return self.surface.degree

    @property
    def field(self) -> Field:
        return self.surface.field


def _tokens(line: str) -> list[tuple[str, int]]:
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _int(tok: str, line: int, col: int, what: str, minimum: int = 0) -> int:
    if not re.fullmatch(r"[+-]?\d+", tok):
        raise ParseError(f"{what} must be an integer, got {tok!r}", line, col)
    v = int(tok)
    if v < minimum:
        raise ParseError(f"{what} must be at least {minimum}", line, col)
    return v


def _rat(tok: str, line: int, col: int) -> mpq:
    if not _RATIONAL.match(tok):
        raise ParseError(f"expected an exact rational p/q, got {tok!r}", line, col)
    try:
        return mpq(tok)
    except ZeroDivisionError:
        raise ParseError("zero denominator", line, col) from None


def field_name(F: Field) -> str:
    if isinstance(F, (GaussianField, RationalField)):
        return "QQ(i)"
    if isinstance(F, CyclotomicField):
        return f"QQ(zeta_{F.n})"
    raise FieldError(f"{F.name} has no exact file representation")


def _coords(F: Field, x) -> list:
    if isinstance(F, GaussianField):
        return [x.re, x.im]
    if isinstance(F, RationalField):
        return [x, mpq(0)]
    if isinstance(F, CyclotomicField):
        return list(x.coeffs)
    raise FieldError(f"{F.name} has no exact file representation")


def _from_coords(F: Field, parts: list):
    if isinstance(F, GaussianField):
        return Gaussian(parts[0], parts[1])
    return F.element(parts)


def _width(F: Field) -> int:
    return 2 if isinstance(F, GaussianField) else F.degree


def parse_text(text: str, *, check: bool = True) -> SurfaceFile:
    version = degree = declared_s = None
    F: Field = QQi
    terms: dict = {}
    seen_terms = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw.split("#", 1)[0])
        if not toks:
            continue
        head, col = toks[0]
        if head in ("version", "degree", "s", "field"):
            if seen_terms:
                raise ParseError(f"header '{head}' after term lines", lineno, col)
            if len(toks) != 2:
                raise ParseError(f"header '{head}' takes exactly one value", lineno, col)
            val, vcol = toks[1]
            if head == "version":
                version = _int(val, lineno, vcol, "version", 1)
                if version != FORMAT_VERSION:
                    raise ParseError(f"unsupported format version {version}", lineno, vcol)
            elif head == "degree":
                if degree is not None:
                    raise ParseError("duplicate degree header", lineno, col)
                degree = _int(val, lineno, vcol, "degree", 2)
            elif head == "s":
                declared_s = _int(val, lineno, vcol, "s", 3)
            else:
                if val == "QQ(i)":
                    F = QQi
                else:
                    m = _FIELD.match(val)
                    if not m or int(m.group(1)) < 1:
                        raise ParseError(f"unknown field {val!r}", lineno, vcol)
                    F = cyclotomic(int(m.group(1)))
            continue
        seen_terms = True
        if degree is None:
            raise ParseError("term line before the 'degree' header", lineno, col)
        width = _width(F)
        if len(toks) != 2 + width:
            raise ParseError(f"term line needs alpha beta and {width} coefficient entries over {field_name(F)}",
                             lineno, col)
        a = _int(toks[0][0], lineno, toks[0][1], "alpha")
        b = _int(toks[1][0], lineno, toks[1][1], "beta")
        if a < b:
            raise ParseError("only terms with alpha >= beta may be listed (conjugates are implied)",
                             lineno, toks[1][1])
        if a + b > degree:
            raise ParseError(f"term of degree {a + b} exceeds declared degree {degree}", lineno, col)
        if (a, b) in terms:
            raise ParseError(f"duplicate term ({a}, {b})", lineno, col)
        parts = [_rat(t, lineno, c) for t, c in toks[2:]]
        value = _from_coords(F, parts)
        if a == b and not F.is_real(value):
            raise ParseError("diagonal coefficient must be real (Hermitian convention)", lineno, toks[3][1])
        terms[(a, b)] = value
    if degree is None:
        raise ParseError("missing 'degree' header", max(1, len(text.splitlines())))
    coeffs = {}
    for (a, b), v in terms.items():
        coeffs[(a, b)] = v
        if a != b:
            coeffs[(b, a)] = v.conjugate()
    H = SurfaceSeries(F, degree, coeffs)
    if check:
        check_admissible(H)
    return SurfaceFile(H, declared_s, version or FORMAT_VERSION)


def parse_surface(path: str | Path, *, check: bool = True) -> SurfaceSeries:
    return read_surface_file(path, check=check).surface


def read_surface_file(path: str | Path, *, check: bool = True) -> SurfaceFile:
    return parse_text(Path(path).read_text(), check=check)


def serialize(H: SurfaceSeries, s: int | None = None) -> str:
    """Canonical text: headers, then terms ordered by degree and descending ``alpha``."""
    if not H.is_hermitian():
        raise ValueError("only Hermitian surfaces have a file representation")
    F = H.field
    lines = [f"version {FORMAT_VERSION}", f"degree {H.degree}"]
    if s is not None:
        lines.append(f"s {s}")
    name = field_name(F)
    if name != "QQ(i)":
        lines.append(f"field {name}")
    keys = sorted((k for k in H.coeffs if k[0] >= k[1]), key=lambda k: (k[0] + k[1], -k[0]))
    for a, b in keys:
        lines.append(" ".join([str(a), str(b)] + [rational_str(c) for c in _coords(F, H.coeffs[(a, b)])]))
    return "\n".join(lines) + "\n"


def serialize_file(sf: SurfaceFile) -> str:
    return serialize(sf.surface, sf.declared_s)


def _random_rational(rng: random.Random, bound: int) -> mpq:
    return mpq(rng.randint(-bound, bound), rng.randint(1, bound))


def generate_random(seed: int, s: int, D: int, coefficient_bound: int = 9, density: float = 0.5) -> SurfaceFile:
    """Seeded Hermitian admissible surface with ``z^s`` coefficient 1.

    Besides ``z zbar`` and ``z^s + zbar^s`` only monomials of degree at least
    ``s`` occur, with the harmonic pair at degree ``s`` fixed, so the Moser
    invariant is ``s`` by construction.
    """
    if s < 3 or D < s:
        raise ValueError("need s >= 3 and D >= s")
    if coefficient_bound < 1:
        raise ValueError("coefficient bound must be positive")
    rng = random.Random(seed)
    coeffs = {(1, 1): QQi.one, (s, 0): QQi.one, (0, s): QQi.one}
    for d in range(s, D + 1):
        for a in range(d, (d - 1) // 2, -1):
            b = d - a
            if (a, b) == (s, 0) or rng.random() >= density:
                continue
            re_part = _random_rational(rng, coefficient_bound)
            im_part = mpq(0) if a == b else _random_rational(rng, coefficient_bound)
            v = Gaussian(re_part, im_part)
            if v == 0:
                continue
            coeffs[(a, b)] = v
            coeffs[(b, a)] = v.conjugate()
    return SurfaceFile(SurfaceSeries(QQi, D, coeffs), s)


__all__ = [
    "FORMAT_VERSION", "ParseError", "SurfaceFile", "field_name", "generate_random", "parse_surface",
    "parse_text", "read_surface_file", "serialize", "serialize_file",
]
