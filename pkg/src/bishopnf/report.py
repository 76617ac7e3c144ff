"""JSON reports.

Exact values are written as strings so that a consumer can re-verify them
without any floating-point loss.  A field element is an object:

* ``{"re": "p/q", "im": "p/q"}`` over QQ or QQ(i);
* ``{"zeta_order": n, "basis": ["p/q", ...]}`` over QQ(zeta_n), power basis;
* ``{"numeric": true, "re": "...", "im": "..."}`` in the floating scaling mode.

Timings and other floats appear only under keys labelled ``numeric``.
"""

from __future__ import annotations

from typing import Any

import mpmath
from gmpy2 import mpq

from .fields import (CyclotomicField, Field, FieldError, Gaussian, GaussianField, NumericField,
                     RationalField, QQi, cyclotomic, rational_str)
from .forms import NormalForm
from .series import HoloSeries2
from .transform import HoloTransform

SCHEMA = "bishopnf-report/1"


def encode_field(F: Field) -> dict:
    if isinstance(F, RationalField):
        return {"kind": "rational", "name": "QQ"}
    if isinstance(F, GaussianField):
        return {"kind": "gaussian", "name": "QQ(i)"}
    if isinstance(F, CyclotomicField):
        return {"kind": "cyclotomic", "name": F.name, "n": F.n}
    if isinstance(F, NumericField):
        return {"kind": "numeric", "name": F.name, "dps": F.dps}
    raise FieldError(f"cannot encode field {F!r}")


def decode_field(obj: dict) -> Field:
    kind = obj.get("kind")
    if kind in ("rational", "gaussian"):
        return QQi
    if kind == "cyclotomic":
        return cyclotomic(int(obj["n"]))
    if kind == "numeric":
        return NumericField(int(obj["dps"]))
    raise FieldError(f"unknown field kind {kind!r}")


def encode_value(F: Field, x) -> dict:
    if isinstance(F, RationalField):
        return {"re": rational_str(x), "im": "0"}
    if isinstance(F, GaussianField):
        return {"re": rational_str(x.re), "im": rational_str(x.im)}
    if isinstance(F, CyclotomicField):
        return {"zeta_order": F.n, "basis": [rational_str(c) for c in x.coeffs]}
    if isinstance(F, NumericField):
        with mpmath.workdps(F.dps):
            z = mpmath.mpc(x)
            return {"numeric": True, "re": mpmath.nstr(z.real, F.dps), "im": mpmath.nstr(z.imag, F.dps)}
    raise FieldError(f"cannot encode values of {F!r}")


def decode_value(F: Field, obj: dict):
    if isinstance(F, CyclotomicField):
        if int(obj.get("zeta_order", F.n)) != F.n:
            raise FieldError("value belongs to a different cyclotomic field")
        return F.element([mpq(c) for c in obj["basis"]])
    if isinstance(F, NumericField):
        with mpmath.workdps(F.dps):
            return F(mpmath.mpc(mpmath.mpf(obj["re"]), mpmath.mpf(obj["im"])))
    if isinstance(F, (GaussianField, RationalField)):
        return Gaussian(mpq(obj["re"]), mpq(obj["im"]))
    raise FieldError(f"cannot decode values of {F!r}")


def _encode_holo(F: Field, h: HoloSeries2) -> dict:
    terms = [{"z": a, "w": b, "value": encode_value(F, v)} for (a, b), v in sorted(h.coeffs.items())]
    return {"weight": h.weight, "terms": terms}


def _decode_holo(F: Field, obj: dict) -> HoloSeries2:
    return HoloSeries2(F, int(obj["weight"]),
                       {(int(t["z"]), int(t["w"])): decode_value(F, t["value"]) for t in obj["terms"]})


def encode_transform(T: HoloTransform) -> dict:
    F = T.field
    return {"c": encode_value(F, T.c), "f": _encode_holo(F, T.f), "g": _encode_holo(F, T.g)}


def decode_transform(F: Field, obj: dict) -> HoloTransform:
    return HoloTransform(F, decode_value(F, obj["c"]), _decode_holo(F, obj["f"]), _decode_holo(F, obj["g"]))


def encode_normal_form(nf: NormalForm) -> dict:
    return {"s": nf.s, "degree": nf.degree,
            "lambdas": {str(n): encode_value(nf.field, v) for n, v in nf.lambdas.items()}}


def decode_normal_form(F: Field, obj: dict) -> NormalForm:
    return NormalForm(F, int(obj["s"]), int(obj["degree"]),
                      {int(n): decode_value(F, v) for n, v in obj["lambdas"].items()})


def new_report(command: str, **fields: Any) -> dict:
    out: dict = {"schema": SCHEMA, "command": command}
    out.update(fields)
    return out


__all__ = [
    "SCHEMA", "decode_field", "decode_normal_form", "decode_transform", "decode_value", "encode_field",
    "encode_normal_form", "encode_transform", "encode_value", "new_report",
]
