"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""

from __future__ import annotations

import random
import time
from fractions import Fraction

import mpmath
import pytest
from gmpy2 import mpq

from bishopnf.branch import branch_points, complexify, leading_hyperbolic_constant, membership_order
from bishopnf.branch import w_equation_residual, z_equation_residual
from bishopnf.fields import Gaussian, QQi
from bishopnf.forms import NormalForm
from bishopnf.invariants import automorphism_group, detect_moser_s, equivalent, rotate_normal_form, rotate_surface
from bishopnf.moser import moser_apply, moser_solve
from bishopnf.normalizer import normal_form, normalize_surface
from bishopnf.series import SurfaceSeries
from bishopnf.surface_io import generate_random
from bishopnf.transform import graph_residual, pushforward

from conftest import random_hermitian_block, random_transform


@pytest.fixture
def verdict(capsys):
    """Run a criterion body and print exactly one PASS or FAIL line for it."""
    def run(number: int, title: str, body):
        start = time.perf_counter()
        try:
            detail = body()
        except BaseException as exc:
            with capsys.disabled():
                print(f"\n[FAIL] criterion {number}: {title}: {type(exc).__name__}: {exc}")
            raise
        with capsys.disabled():
            extra = f", {detail}" if detail else ""
            print(f"\n[PASS] criterion {number}: {title} ({time.perf_counter() - start:.2f}s{extra})")
    return run


def test_criterion_1_model_fixed_points(verdict):
    def body():
        for s in (3, 4, 5):
            start = time.perf_counter()
            res = normalize_surface(SurfaceSeries.model(QQi, 3 * s + 2, s))
            assert res.transform.is_identity()
            assert res.normal_form.all_zero() and res.residual_checked
            assert automorphism_group(res.normal_form).order == s
            assert time.perf_counter() - start < 1.0
    verdict(1, "model surfaces are fixed points with full rotation group", body)


def test_criterion_2_oracle_suite(verdict):
    def body():
        start = time.perf_counter()
        for seed in range(100):
            H = generate_random(seed, 3, 14, 9).surface
            res = normalize_surface(H)
            target = res.normal_form.surface()
            assert res.residual_checked
            assert graph_residual(H, res.transform, target).is_zero()
            assert pushforward(H, res.transform) == target
        elapsed = time.perf_counter() - start
        assert elapsed < 60.0, f"{elapsed:.1f}s"
        return "100 surfaces, s=3, D=14"
    verdict(2, "pushforward oracle on seeded random surfaces", body)


def test_criterion_3_moser_round_trip(verdict):
    def body():
        rng = random.Random(3)
        for i in range(200):
            m = 3 + i % 10
            G = random_hermitian_block(rng, m)
            sol = moser_solve(G, allow_harmonic=True, m=m)
            assert moser_apply(sol) == G
            assert all(a >= 2 for a, _ in sol.f_part.coeffs)
            assert QQi.is_zero(sol.g_part.coeffs.get((m, 0), QQi.zero))
        return "200 blocks, m <= 12"
    verdict(3, "Moser operator round trip", body)


def test_criterion_4_uniqueness_idempotence(verdict):
    def body():
        n = 2
        count = 0
        for s in (3, 4, 5):
            cut = n * s + s - 1
            for seed in range(10):
                nf = normalize_surface(generate_random(seed, s, cut + 2, 9).surface).normal_form.truncate(cut)
                T, again = normal_form(nf.surface())
                assert again == nf
                assert T.c == 1
                assert all(a + 2 * b > 2 * n + 1 for a, b in T.f.coeffs)
                assert all(a + 2 * b > 2 * n + 1 for a, b in T.g.coeffs)
                count += 1
        return f"{count} normal forms"
    verdict(4, "re-normalizing a normal form is the identity", body)


def test_criterion_5_rotation_equivariance(verdict):
    def body():
        rng = random.Random(5)
        for s in (3, 4, 6):
            for _ in range(2):
                H = generate_random(rng.randint(0, 10 ** 6), s, 2 * s + 3, 9).surface
                nf = normalize_surface(H).normal_form
                for l in range(s):
                    nfr = normalize_surface(rotate_surface(H, l, s)).normal_form
                    expected = rotate_normal_form(nf, l, nfr.field)
                    assert nfr == expected
                    if len(nf.nonzero()) == len(nf.lambdas):
                        assert equivalent(nf, nfr) == l
                    else:
                        assert equivalent(nf, nfr) is not None
        for s in (3, 4, 6):
            D = 2 * s + 2
            base = NormalForm(QQi, s, D, {s + 2: 1})
            extended = NormalForm(QQi, s, D, {s + 2: 1, 2 * s + 2: 1})
            assert equivalent(base, extended) is None
            assert equivalent(base, extended.truncate(2 * s + 1)) == 0
    verdict(5, "rotation equivariance and truncation inequivalence", body)


def test_criterion_6_invariance_of_class(verdict):
    def body():
        rng = random.Random(6)
        units = [QQi.one, -QQi.one, Gaussian(0, 1), Gaussian(0, -1)]
        for _ in range(30):
            H = generate_random(rng.randint(0, 10 ** 6), 3, 11, 9).surface
            T = random_transform(rng, 11, max_weight=6, c=rng.choice(units), real_w=True)
            H2 = pushforward(H, T)
            assert detect_moser_s(H2) == detect_moser_s(H) == 3
            assert equivalent(normalize_surface(H).normal_form, normalize_surface(H2).normal_form) is not None
        return "30 surfaces"
    verdict(6, "normal form class is invariant under admissible maps", body)


def _polynomial_surface(rng, s, D=8):
    co = {(1, 1): QQi.one, (s, 0): QQi.one, (0, s): QQi.one}
    for a in range(D + 1):
        for b in range(a + 1):
            if s < a + b <= D and rng.random() < 0.5:
                v = Gaussian(mpq(rng.randint(-9, 9), rng.randint(1, 9)), mpq(rng.randint(-9, 9), rng.randint(1, 9)))
                if a == b:
                    v = Gaussian(v.re)
                co[(a, b)] = co.get((a, b), QQi.zero) + v
                if a != b:
                    co[(b, a)] = co.get((b, a), QQi.zero) + v.conjugate()
    return SurfaceSeries(QQi, D, co)


def test_criterion_7_branch_locus(verdict):
    def body():
        rng = random.Random(7)
        for s in (3, 4):
            for _ in range(3):
                C = complexify(_polynomial_surface(rng, s), polynomial=True)
                bd = branch_points(C, 20)
                assert bd.h1.order >= 20 and bd.h2.order >= 20
                assert z_equation_residual(C, bd.h1).is_zero()
                assert w_equation_residual(C, bd.h1, bd.h2).is_zero()
                for br in bd.branches:
                    assert br.P[s - 1] == -s
                    assert membership_order(C, br) == Fraction(2 * (s - 1), s)
            for j in range(1, s):
                with mpmath.workdps(50):
                    scale = s * mpmath.power(s - 1, mpmath.mpf(1 - s) / s)
                    ref = abs(scale * mpmath.expjpi(mpmath.mpf(1) / s)
                              - scale * mpmath.expjpi(mpmath.mpf(1 + 2 * j) / s))
                assert abs(float(leading_hyperbolic_constant(s, j)) - float(ref)) < 1e-12
    verdict(7, "branch locus expansions, membership order and constants", body)


def test_criterion_8_map_shape(verdict):
    def body():
        count = 0
        for s in (3, 4, 5):
            for seed in range(15):
                T = normalize_surface(generate_random(seed, s, 3 * s + 2, 9).surface).transform
                T.validate()
                assert QQi.eq(T.c ** s, QQi.one)
                assert T.g.depends_only_on_w() and T.g.has_real_coefficients()
                count += 1
        return f"{count} transforms"
    verdict(8, "end-to-end maps have c^s = 1 and real w-only second component", body)
