"""Command-line interface: ``bishopnf <command> ...``.

Exit codes: 0 success, 2 parse error, 3 inadmissible input,
4 truncation insufficient, 5 verification failure.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import math
import sys
import time
from pathlib import Path

import mpmath

from .branch import (BranchError, branch_constant, branch_points, complexify, leading_hyperbolic_constant,
                     membership_order, w_equation_residual, z_equation_residual)
from .fields import Field, FieldError, common_cyclotomic, fmt
from .forms import NormalForm
from .invariants import automorphism_group, compare
from .normalizer import (AdmissibilityError, NormalFormResult, QuadricError, ScalingError, detect_s,
                         normalize_surface)
from .report import (decode_field, decode_normal_form, decode_transform, encode_field, encode_normal_form,
                     encode_transform, encode_value, new_report)
from .series import SurfaceSeries
from .surface_io import ParseError, SurfaceFile, generate_random, read_surface_file, serialize_file
from .transform import ShapeError, TruncationError, graph_residual

log = logging.getLogger("bishopnf")

EXIT_OK, EXIT_PARSE, EXIT_ADMISSIBILITY, EXIT_TRUNCATION, EXIT_VERIFICATION = 0, 2, 3, 4, 5


class VerificationError(RuntimeError):
    pass


# ------------------------------------------------------------------ helpers


def _load(path: str, degree: int | None, field_kind: str) -> tuple[SurfaceFile, SurfaceSeries]:
    sf = read_surface_file(path)
    H = sf.surface
    if degree is not None:
        if degree > H.degree:
            raise TruncationError(f"{path} is known only to degree {H.degree}; --degree {degree} requested")
        H = H.truncate(degree)
    if field_kind == "cyclotomic":
        s = sf.declared_s or detect_s(H) or 1
        H = H.lift(common_cyclotomic(H.field, extra=math.lcm(4, s)))
    return sf, H


def _normalize(H: SurfaceSeries, numeric: bool) -> NormalFormResult | QuadricError:
    try:
        return normalize_surface(H, numeric_scale=numeric)
    except QuadricError as exc:
        return exc


def _lambda_lines(nf: NormalForm) -> list[str]:
    if not nf.lambdas:
        return ["lambda table empty (2s > D)"]
    return [f"lambda_{n} = {fmt(v)}" for n, v in nf.lambdas.items()]


def _group_dict(nf: NormalForm) -> dict:
    G = automorphism_group(nf)
    return {"order": G.order, "generator": G.d, "members": G.members(),
            "description": G.describe(), "degree": nf.degree}


def _emit(args, report: dict, lines: list[str]) -> None:
    if args.json:
        json.dump(report, sys.stdout, indent=2, sort_keys=False)
        sys.stdout.write("\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")


# ----------------------------------------------------------------- commands


def cmd_normalize(args, *, with_transform: bool = True) -> int:
    _, H = _load(args.file, args.degree, args.field)
    res = _normalize(H, args.numeric_scale)
    command = "normalize" if with_transform else "invariants"
    if isinstance(res, QuadricError):
        report = new_report(command, input=args.file, field=encode_field(H.field), degree=H.degree,
                            s=str(res), lambdas={}, residual_checked=False)
        _emit(args, report, [f"s = {res}"])
        return EXIT_OK
    nf = res.normal_form
    report = new_report(command, input=args.file, field=encode_field(nf.field), degree=res.degree, s=res.s,
                        lambdas=encode_normal_form(nf)["lambdas"],
                        nonzero=[n for n in nf.nonzero()])
    lines = [f"s = {res.s}", f"degree = {res.degree}"] + _lambda_lines(nf)
    if with_transform:
        report["transform"] = encode_transform(res.transform)
        report["normal_form"] = encode_normal_form(nf)
        report["automorphism_group"] = _group_dict(nf)
        T = res.transform
        lines.append(f"transform: c = {fmt(T.c)}, {len(T.f.coeffs)} f-terms, {len(T.g.coeffs)} g-terms, "
                     f"identity = {str(T.is_identity()).lower()}")
    report["residual_checked"] = res.residual_checked
    report["numeric"] = {"elapsed_seconds": round(res.elapsed, 6)}
    lines.append(f"residual_checked = {str(res.residual_checked).lower()}")
    _emit(args, report, lines)
    return EXIT_OK


def cmd_invariants(args) -> int:
    return cmd_normalize(args, with_transform=False)


def cmd_equiv(args) -> int:
    results = []
    for path in (args.file_a, args.file_b):
        _, H = _load(path, args.degree, args.field)
        results.append((H, _normalize(H, args.numeric_scale)))
    (Ha, ra), (Hb, rb) = results
    D = min(Ha.degree, Hb.degree)
    if isinstance(ra, QuadricError) or isinstance(rb, QuadricError):
        same = isinstance(ra, QuadricError) and isinstance(rb, QuadricError)
        text = (f"equivalent, l=0 (both quadric to degree {D})" if same
                else "inequivalent (only one surface is quadric to its truncation)")
        report = new_report("equiv", inputs=[args.file_a, args.file_b], equivalent=same,
                            rotation=0 if same else None, degree=D, description=text)
        _emit(args, report, [text])
        return EXIT_OK
    verdict = compare(ra.normal_form, rb.normal_form)
    text = verdict.describe()
    report = new_report("equiv", inputs=[args.file_a, args.file_b], s=[ra.s, rb.s],
                        equivalent=verdict.equivalent, rotation=verdict.rotation, degree=verdict.degree,
                        description=text, residual_checked=ra.residual_checked and rb.residual_checked)
    _emit(args, report, [text])
    return EXIT_OK


def cmd_aut(args) -> int:
    _, H = _load(args.file, args.degree, args.field)
    res = _normalize(H, args.numeric_scale)
    if isinstance(res, QuadricError):
        text = f"infinite rotation group (quadric to degree {res.degree})"
        _emit(args, new_report("aut", input=args.file, s=str(res), description=text), [text])
        return EXIT_OK
    group = _group_dict(res.normal_form)
    report = new_report("aut", input=args.file, s=res.s, automorphism_group=group,
                        residual_checked=res.residual_checked)
    _emit(args, report, [group["description"]])
    return EXIT_OK


def _series_dict(field: Field, series) -> dict:
    return {"variable": series.var, "order": series.order,
            "terms": {str(k): encode_value(field, c) for k, c in enumerate(series.coeffs)
                      if not field.is_zero(c)}}


def cmd_branch(args) -> int:
    sf, H = _load(args.file, args.degree, "gaussian")
    note = "input surface"
    try:
        C = complexify(H, sf.declared_s, polynomial=args.polynomial)
    except BranchError:
        res = normalize_surface(H)
        C = complexify(res.normal_form.surface(), res.s, polynomial=False)
        note = "normal form of the input"
    s = C.s
    order = args.order
    if order is None:
        order = 20 if C.polynomial else max(s, int(C.max_order) - s + 1)
    bd = branch_points(C, order)
    F = C.field
    zres = z_equation_residual(C, bd.h1).is_zero()
    wres = w_equation_residual(C, bd.h1, bd.h2).is_zero()
    exponent = membership_order(C, bd.branches[0])
    consts = []
    for j in range(s):
        c = branch_constant(s, j)
        v = c.value(30)
        consts.append({"j": j, "structured": c.describe(), "numeric": {"re": mpmath.nstr(v.real, 25), "im": mpmath.nstr(v.imag, 25)}})
    hyper = []
    for j in range(1, s):
        c = leading_hyperbolic_constant(s, j)
        hyper.append({"j": j, "structured": c.describe(), "u_exponent": str(c.u_exponent),
                      "numeric": mpmath.nstr(c.value(30), 25)})
    report = new_report(
        "branch", input=args.file, computed_on=note, s=s, order=order,
        h1=_series_dict(F, bd.h1), h2=_series_dict(F, bd.h2), P=_series_dict(F, bd.branches[0].P),
        branches=[{"j": b.j, "omega_index": b.omega_index, "leading_root_index": b.leading_root_index,
                   "root_order": 2 * s} for b in bd.branches],
        residuals_zero={"z_equation": zres, "w_equation": wres},
        membership_order=str(exponent), branch_constants=consts, hyperbolic_constants=hyper)
    lines = [f"s = {s} ({note}, order {order})", f"h1 = {bd.h1}", f"h2 = {bd.h2}", f"P = {bd.branches[0].P}",
             f"branches: A_j(u) = P(zeta_{2 * s}^(-(2j+1)) (u/{s - 1})^(1/{s})), j = 0..{s - 1}",
             f"membership order = {exponent}",
             f"residuals zero: z-equation {str(zres).lower()}, w-equation {str(wres).lower()}"]
    lines += [f"L_1{h['j'] + 1} leading constant = {h['numeric']} * u^({h['u_exponent']})" for h in hyper]
    _emit(args, report, lines)
    return EXIT_OK if zres and wres else EXIT_VERIFICATION


def cmd_verify(args) -> int:
    _, H = _load(args.file, None, "gaussian")
    data = json.loads(Path(args.report).read_text())
    if "transform" not in data or "normal_form" not in data:
        raise VerificationError("report lacks a transform and normal form (use 'normalize --json')")
    F = decode_field(data["field"])
    T = decode_transform(F, data["transform"])
    nf = decode_normal_form(F, data["normal_form"])
    D = nf.degree
    if D > H.degree:
        raise TruncationError(f"normal form claims degree {D}, surface known to {H.degree}")
    precision = contextlib.nullcontext() if F.exact else mpmath.workdps(F.dps)
    with precision:
        Hk = H if H.field == F else H.lift(F)
        try:
            T.validate(require_root_of_unity=F.exact)
            shape_ok = True
        except ShapeError:
            shape_ok = False
        R = graph_residual(Hk.truncate(D), T, nf.surface(), D)
    ok = R.is_zero() and shape_ok
    report = new_report("verify", input=args.file, report=args.report, degree=D, residual_zero=R.is_zero(),
                        shape_ok=shape_ok, nonzero_residual_terms=len(R.coeffs))
    text = (f"verified: residual zero to degree {D}" if ok
            else f"verification FAILED: {len(R.coeffs)} residual terms, shape_ok={str(shape_ok).lower()}")
    _emit(args, report, [text])
    return EXIT_OK if ok else EXIT_VERIFICATION


def cmd_generate(args) -> int:
    sf = generate_random(args.seed, args.s, args.degree, args.bound)
    text = serialize_file(sf)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bishopnf", description="Normal forms of Bishop surfaces with vanishing "
                                "Bishop invariant: invariants, equivalence, automorphisms, branch locus.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, degree=True):
        if degree:
            sp.add_argument("--degree", type=int, default=None, help="working truncation (default: file's D)")
        sp.add_argument("--json", action="store_true", help="write a JSON report to stdout")
        sp.add_argument("--field", choices=("gaussian", "cyclotomic"), default="gaussian",
                        help="coefficient field (cyclotomic: QQ(zeta_lcm(4,s)))")
        sp.add_argument("--numeric-scale", action="store_true",
                        help="rescale a_s to 1 in arbitrary-precision floating point")

    for name, fn, help_text in (("normalize", cmd_normalize, "normal form, transform and oracle check"),
                                ("invariants", cmd_invariants, "Moser invariant and lambda table"),
                                ("aut", cmd_aut, "rotation automorphism group")):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("file")
        common(sp)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("equiv", help="decide formal equivalence to the common degree")
    sp.add_argument("file_a")
    sp.add_argument("file_b")
    common(sp)
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("branch", help="branch locus of the complexification")
    sp.add_argument("file")
    sp.add_argument("--degree", type=int, default=None)
    sp.add_argument("--order", type=int, default=None, help="truncation order of the Puiseux series")
    sp.add_argument("--polynomial", action="store_true", help="treat the surface as an exact polynomial")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_branch)

    sp = sub.add_parser("verify", help="re-run the pushforward oracle on a 'normalize --json' report")
    sp.add_argument("file")
    sp.add_argument("report")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("generate", help="seeded random admissible surface")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--bound", type=int, default=9, help="coefficient numerator/denominator bound")
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_generate)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    try:
        code = args.func(args)
    except (ParseError, FileNotFoundError, IsADirectoryError, json.JSONDecodeError, KeyError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (AdmissibilityError, ScalingError, BranchError, ShapeError) as exc:
        kind = getattr(exc, "kind", None)
        print(f"inadmissible input{f' ({kind})' if kind else ''}: {exc}", file=sys.stderr)
        return EXIT_ADMISSIBILITY
    except TruncationError as exc:
        print(f"truncation insufficient: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except (VerificationError, FieldError) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    log.debug("%s finished in %.3fs", args.command, time.perf_counter() - start)
    return code


if __name__ == "__main__":
    sys.exit(main())
