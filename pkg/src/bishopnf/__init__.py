"""Exact normal forms of formal Bishop surfaces with vanishing Bishop invariant."""

from __future__ import annotations

from .branch import (ComplexifiedSurface, PuiseuxBranch, branch_curve, branch_points, complexify,
                     leading_hyperbolic_constant, membership_order)
from .fields import QQ, QQi, CyclotomicField, NumericField, cyclotomic
from .forms import NormalForm, invariant_indices
from .invariants import (RotationSubgroup, automorphism_group, compare, detect_moser_s, equivalent,
                         rotate_normal_form, rotate_surface)
from .moser import MoserSolution, moser_apply, moser_solve
from .normalizer import normal_form, normalize_degree, normalize_surface
from .series import (HoloSeries2, OneVarSeries, SurfaceSeries, conj_series, hy_weight, normal_weight_part,
                     nth_root_unit, ord, revert, substitute_graph)
from .surface_io import generate_random, parse_surface, parse_text, serialize
from .transform import HoloTransform, compose, graph_residual, pushforward

__version__ = "1.0.0"
