from __future__ import annotations

import random

from gmpy2 import mpq
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bishopnf.fields import Gaussian, QQi
from bishopnf.series import HoloSeries2, SurfaceSeries
from bishopnf.transform import F_FORBIDDEN, G_FORBIDDEN, HoloTransform

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_rationals = st.builds(lambda p, q: mpq(p, q), st.integers(-9, 9), st.integers(1, 9))
gaussians = st.builds(Gaussian, small_rationals, small_rationals)
nonzero_gaussians = gaussians.filter(lambda g: bool(g))


def random_gaussian(rng: random.Random, bound: int = 9) -> Gaussian:
    return Gaussian(mpq(rng.randint(-bound, bound), rng.randint(1, bound)),
                    mpq(rng.randint(-bound, bound), rng.randint(1, bound)))


def random_surface_series(rng: random.Random, degree: int, density: float = 0.4, low: int = 0) -> SurfaceSeries:
    coeffs = {}
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            if a + b >= low and rng.random() < density:
                coeffs[(a, b)] = random_gaussian(rng)
    return SurfaceSeries(QQi, degree, coeffs)


def random_hermitian_block(rng: random.Random, m: int, density: float = 0.6) -> SurfaceSeries:
    coeffs = {}
    for a in range(m, (m - 1) // 2, -1):
        b = m - a
        if rng.random() < density:
            v = random_gaussian(rng)
            if a == b:
                v = Gaussian(v.re)
            coeffs[(a, b)] = v
            coeffs[(b, a)] = v.conjugate()
    return SurfaceSeries(QQi, m, coeffs)


def random_transform(rng: random.Random, D: int, max_weight: int = 6, bound: int = 3,
                     c=None, real_w: bool = False) -> HoloTransform:
    """Shape-legal map with random small-rational ``f`` and ``g`` of normal weight at most ``max_weight``.

    With ``real_w`` the ``w``-component is a real series in ``w`` alone, which keeps
    real-valued graphs ``w = H`` real-valued.
    """
    f, g = {}, {}
    for a in range(max_weight + 1):
        for b in range((max_weight - a) // 2 + 1):
            if (a, b) not in F_FORBIDDEN and rng.random() < 0.5:
                f[(a, b)] = random_gaussian(rng, bound)
            if (a, b) not in G_FORBIDDEN and rng.random() < 0.5 and (not real_w or a == 0):
                v = random_gaussian(rng, bound)
                g[(a, b)] = Gaussian(v.re) if real_w else v
    return HoloTransform(QQi, QQi.one if c is None else c, HoloSeries2(QQi, D - 1, f), HoloSeries2(QQi, D, g))


@st.composite
def surface_series(draw, degree: int = 6):
    keys = [(a, b) for a in range(degree + 1) for b in range(degree + 1 - a)]
    chosen = draw(st.lists(st.sampled_from(keys), max_size=10, unique=True))
    return SurfaceSeries(QQi, degree, {k: draw(gaussians) for k in chosen})
