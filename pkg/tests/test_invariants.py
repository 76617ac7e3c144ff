from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bishopnf.fields import Gaussian, QQi
from bishopnf.forms import NormalForm, invariant_indices
from bishopnf.invariants import (QuadricToDegree, RotationSubgroup, automorphism_group, compare, detect_moser_s,
                                 equivalent, rotate_normal_form, rotate_surface, rotation_fixes)
from bishopnf.normalizer import normalize_surface
from bishopnf.series import SurfaceSeries
from bishopnf.surface_io import generate_random
from bishopnf.transform import pushforward

from conftest import random_gaussian, random_transform


def random_nf(rng, s, D, density=0.7):
    lam = {n: random_gaussian(rng) for n in invariant_indices(s, D) if rng.random() < density}
    return NormalForm(QQi, s, D, lam)


# --------------------------------------------------------------- detection


def test_detect_examples():
    assert detect_moser_s(SurfaceSeries.model(QQi, 10, 4)) == 4
    q = detect_moser_s(SurfaceSeries(QQi, 12, {(1, 1): 1}))
    assert q == QuadricToDegree(12) and str(q) == "quadric-to-degree-12"
    H = SurfaceSeries(QQi, 8, {(1, 1): 1, (2, 2): 1, (3, 0): 1, (0, 3): 1})
    assert detect_moser_s(H) == 3


def test_detect_after_absorbing_lower_terms():
    # z^2 zbar^2 is removed by Step 1, leaving z^5 as the first harmonic term
    H = SurfaceSeries(QQi, 10, {(1, 1): 1, (2, 2): 5, (3, 1): 1, (1, 3): 1, (5, 0): 2, (0, 5): 2})
    assert detect_moser_s(H) == 5


# ----------------------------------------------------------- equivalence


def test_equivalence_examples():
    rng = random.Random(0)
    nf = random_nf(rng, 3, 11, 1.0)
    assert equivalent(nf, nf) == 0
    assert equivalent(nf, rotate_normal_form(nf, 1)) == 1
    a = NormalForm(QQi, 3, 8, {5: 1})
    b = NormalForm(QQi, 3, 8, {5: 1, 8: 1})
    assert equivalent(a, b) is None
    assert compare(a, b).describe() == "inequivalent (to degree 8)"
    assert compare(a, b.truncate(7)).equivalent    # agree below the extra coefficient
    c = NormalForm(QQi, 4, 8, {6: 1})
    assert "Moser invariants differ" in compare(a, c).describe()


@pytest.mark.parametrize("s", [3, 4, 5, 6, 8])
def test_rotation_group_action(s):
    rng = random.Random(s)
    nf = random_nf(rng, s, 3 * s + 3, 1.0)
    for l in range(s):
        assert rotate_normal_form(rotate_normal_form(nf, l), s - l) == nf.lift(rotate_normal_form(nf, 0).field)
        assert equivalent(nf, rotate_normal_form(nf, l)) is not None
    assert rotate_normal_form(nf, 0) == nf.lift(rotate_normal_form(nf, 0).field)


@given(st.sampled_from([3, 4, 6]), st.integers(0, 10 ** 6), st.integers(0, 5), st.integers(0, 5))
def test_equivalence_relation(s, seed, l1, l2):
    rng = random.Random(seed)
    a = random_nf(rng, s, 2 * s + 3, 1.0)
    b = rotate_normal_form(a, l1 % s)
    c = rotate_normal_form(b, l2 % s)
    assert equivalent(a, a) == 0
    lab, lba = equivalent(a, b), equivalent(b, a)
    assert lab == l1 % s and lba == (s - lab) % s          # all slots nonzero, so l is unique
    assert equivalent(a, c) == (lab + equivalent(b, c)) % s


@pytest.mark.parametrize("s", [3, 4, 6])
def test_surface_rotation_commutes_with_normalization(s):
    rng = random.Random(10 + s)
    for _ in range(3):
        H = generate_random(rng.randint(0, 10 ** 6), s, 2 * s + 3, 5).surface
        nf = normalize_surface(H).normal_form
        for l in range(s):
            Hr = rotate_surface(H, l, s)
            nfr = normalize_surface(Hr).normal_form
            assert nfr == rotate_normal_form(nf, l, nfr.field)
            assert equivalent(nf, nfr) is not None


# -------------------------------------------------------------- automorphisms


def test_automorphism_examples():
    for s in (3, 4, 5, 6):
        g = automorphism_group(NormalForm(QQi, s, 3 * s + 2))
        assert g.order == s and g.is_full and g.describe().startswith(f"order {s}, full Z_{s}")
    g = automorphism_group(NormalForm(QQi, 6, 17, {8: 1, 10: 2, 16: 3}))
    assert g.order == 2 and g.members() == [0, 3]
    for s in (3, 5, 7):
        for n in invariant_indices(s, 3 * s):
            assert automorphism_group(NormalForm(QQi, s, 3 * s, {n: 1})).order == 1
    with pytest.raises(ValueError):
        RotationSubgroup(6, 4)


@given(st.integers(3, 12), st.integers(0, 10 ** 6))
def test_automorphism_group_matches_brute_force(s, seed):
    rng = random.Random(seed)
    nf = random_nf(rng, s, 3 * s, rng.choice([0.0, 0.2, 0.5]))
    g = automorphism_group(nf)
    brute = [l for l in range(s) if rotation_fixes(nf, l)]
    assert g.members() == brute
    assert s % g.order == 0
    assert (g.order == s) == nf.all_zero()
    # the rotation fixes the table exactly in the cyclotomic field
    for l in range(s):
        rot = rotate_normal_form(nf, l)
        assert (rot == nf.lift(rot.field)) == (l in brute)


@pytest.mark.parametrize("s", range(3, 13))
def test_divisor_chain_realization(s):
    for k in range(1, s):
        if s % k or k == s:
            continue
        m = s // k
        residues = [i * k for i in range(1, m) if 2 <= i * k <= s - 1]
        lam = {s + j: 1 for j in residues}
        if not lam:
            continue
        g = automorphism_group(NormalForm(QQi, s, 2 * s - 1, lam))
        assert g.order == k
        assert [l for l in range(s) if rotation_fixes(NormalForm(QQi, s, 2 * s - 1, lam), l)] == \
            list(range(0, s, m))


# ------------------------------------------------------------------ invariance


def test_invariance_under_transforms():
    rng = random.Random(2024)
    for _ in range(6):
        H = generate_random(rng.randint(0, 10 ** 6), 3, 11, 5).surface
        c = rng.choice([QQi.one, -QQi.one, Gaussian(0, 1), Gaussian(0, -1)])
        H2 = pushforward(H, random_transform(rng, 11, c=c, real_w=True))
        assert H2.is_hermitian()
        assert detect_moser_s(H2) == detect_moser_s(H) == 3
        assert equivalent(normalize_surface(H).normal_form, normalize_surface(H2).normal_form) is not None
