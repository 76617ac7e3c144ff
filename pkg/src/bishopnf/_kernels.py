"""Truncated bivariate products, the hot loop of the whole package.

Coefficients of QQ and QQ(i) series are converted to integer numerators over
one common denominator per operand, multiplied with plain integer
arithmetic, and normalized back to rationals once per output coefficient.
Other fields use the generic element arithmetic.
"""

from __future__ import annotations

from gmpy2 import lcm, mpq, mpz

from .fields import Gaussian, GaussianField, RationalField

_new = object.__new__


def _gauss(re, im) -> Gaussian:
    g = _new(Gaussian)
    g.re = re
    g.im = im
    return g


def _sorted_items(B: dict, wb: int) -> list:
    return sorted(B.items(), key=lambda kv: kv[0][0] + wb * kv[0][1])


def _generic(A: dict, B: dict, limit: int, wb: int, is_zero) -> dict:
    Bs = _sorted_items(B, wb)
    out: dict = {}
    get = out.get
    for (a1, b1), c1 in A.items():
        room = limit - a1 - wb * b1
        for (a2, b2), c2 in Bs:
            if a2 + wb * b2 > room:
                break
            key = (a1 + a2, b1 + b2)
            t = get(key)
            out[key] = c1 * c2 if t is None else t + c1 * c2
    return {k: v for k, v in out.items() if not is_zero(v)}


def _rational(A: dict, B: dict, limit: int, wb: int) -> dict:
    LA = lcm(*[v.denominator for v in A.values()]) if len(A) > 1 else next(iter(A.values())).denominator
    LB = lcm(*[v.denominator for v in B.values()]) if len(B) > 1 else next(iter(B.values())).denominator
    An = [(a, b, v.numerator * (LA // v.denominator)) for (a, b), v in A.items()]
    Bn = [(a, b, v.numerator * (LB // v.denominator)) for (a, b), v in B.items()]
    Bn.sort(key=lambda t: t[0] + wb * t[1])
    out: dict = {}
    get = out.get
    for a1, b1, r1 in An:
        room = limit - a1 - wb * b1
        for a2, b2, r2 in Bn:
            if a2 + wb * b2 > room:
                break
            key = (a1 + a2, b1 + b2)
            out[key] = get(key, 0) + r1 * r2
    den = LA * LB
    return {k: mpq(v, den) for k, v in out.items() if v}


def _gauss_numerators(A: dict):
    L = mpz(1)
    for v in A.values():
        L = lcm(L, v.re.denominator)
        L = lcm(L, v.im.denominator)
    rows = []
    for (a, b), v in A.items():
        re, im = v.re, v.im
        rows.append((a, b, re.numerator * (L // re.denominator), im.numerator * (L // im.denominator)))
    return L, rows


def _gaussian(A: dict, B: dict, limit: int, wb: int) -> dict:
    LA, An = _gauss_numerators(A)
    LB, Bn = _gauss_numerators(B)
    Bn.sort(key=lambda t: t[0] + wb * t[1])
    re_out: dict = {}
    im_out: dict = {}
    rget, iget = re_out.get, im_out.get
    for a1, b1, r1, i1 in An:
        room = limit - a1 - wb * b1
        if i1:
            if r1:
                for a2, b2, r2, i2 in Bn:
                    if a2 + wb * b2 > room:
                        break
                    key = (a1 + a2, b1 + b2)
                    re_out[key] = rget(key, 0) + r1 * r2 - i1 * i2
                    im_out[key] = iget(key, 0) + r1 * i2 + i1 * r2
            else:
                for a2, b2, r2, i2 in Bn:
                    if a2 + wb * b2 > room:
                        break
                    key = (a1 + a2, b1 + b2)
                    re_out[key] = rget(key, 0) - i1 * i2
                    im_out[key] = iget(key, 0) + i1 * r2
        else:
            for a2, b2, r2, i2 in Bn:
                if a2 + wb * b2 > room:
                    break
                key = (a1 + a2, b1 + b2)
                re_out[key] = rget(key, 0) + r1 * r2
                im_out[key] = iget(key, 0) + r1 * i2
    den = LA * LB
    out = {}
    for key, r in re_out.items():
        i = im_out[key]
        if r or i:
            out[key] = _gauss(mpq(r, den), mpq(i, den))
    return out


def truncated_product(field, A: dict, B: dict, limit: int, wb: int) -> dict:
    """Product of coefficient maps keeping monomials with ``a + wb*b <= limit``."""
    if not A or not B:
        return {}
    if len(A) > len(B):
        A, B = B, A
    if isinstance(field, GaussianField):
        return _gaussian(A, B, limit, wb)
    if isinstance(field, RationalField):
        return _rational(A, B, limit, wb)
    return _generic(A, B, limit, wb, field.is_zero)
