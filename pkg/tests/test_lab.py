"""Tests for the analytic torus/sphere laboratory and its degenerations."""

import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from tropical_heights import (
    DegenerationFamily,
    MinkowskiSpace,
    MomentumAssignment,
    TorusGreen,
    TorusPoint,
    build_cycle_graph,
    cross_ratio_height,
    dedekind_eta_log_abs,
    degeneration_experiment,
    green_sphere,
    height_pairing_surface,
    log_abs_theta1_frac,
    log_abs_theta1_prime_zero,
    metric_graph_green,
    normalization_by_quadrature,
    regularized_self_height,
    theta1,
    theta1_prime_zero,
)

TAUS = (0.3 + 1.2j, 0.8j, 2.5j, -0.41 + 0.9j)


def test_theta_oddness_and_periodicity():
    rng = random.Random(20)
    for tau in TAUS:
        for _ in range(5):
            z = complex(rng.uniform(-1, 1), rng.uniform(-0.4, 0.4))
            v = theta1(z, tau)
            scale = max(1e-30, abs(v))
            assert abs(theta1(-z, tau) + v) <= 1e-12 * scale
            assert abs(theta1(z + 1, tau) + v) <= 1e-12 * scale
            factor = -cmath.exp(-1j * math.pi * tau - 2j * math.pi * z)
            assert abs(theta1(z + tau, tau) - factor * v) <= 1e-11 * abs(factor * v)


def test_theta_prime_is_eta_cubed():
    for tau in TAUS:
        direct = math.log(abs(theta1_prime_zero(tau)))
        product = log_abs_theta1_prime_zero(tau)
        eta_form = math.log(2 * math.pi) + 3 * dedekind_eta_log_abs(tau)
        assert product == pytest.approx(direct, abs=1e-12)
        assert product == pytest.approx(eta_form, abs=1e-12)


def test_log_abs_theta_fractional_matches_series():
    rng = random.Random(9)
    for tau in TAUS:
        for _ in range(8):
            x = rng.uniform(-0.5, 0.5)
            y = rng.uniform(0.05, 0.95)
            z = x + y * tau
            got = log_abs_theta1_frac(np.array([x]), y, tau)[0]
            want = math.log(abs(theta1(z, tau)))
            assert got == pytest.approx(want, abs=1e-11)


def test_log_abs_theta_fractional_far_in_the_cusp():
    # Direct series values underflow here; the split form must not.
    tau = 400j
    got = log_abs_theta1_frac(np.array([0.3]), 0.5, tau)
    assert np.isfinite(got).all()
    # Deep in the cusp the value is pi Im(tau) (y - 1/4) + O(e^{-2 pi y Im tau}).
    assert got[0] == pytest.approx(math.pi * 400 * 0.25, abs=1e-9)


def test_normalization_matches_eta_expression():
    for tau in TAUS:
        quad = normalization_by_quadrature(tau)
        eta_form = dedekind_eta_log_abs(tau)
        assert quad == pytest.approx(eta_form, abs=5e-13)
        green = TorusGreen(tau)
        assert green.normalization == pytest.approx(eta_form, abs=1e-15)
        assert green.normalization_quadrature == pytest.approx(quad, abs=1e-15)


def test_torus_point_roundtrip():
    tau = 0.3 + 1.2j
    pt = TorusPoint.from_complex(0.7 + 0.4 * tau, tau)
    z = pt.to_complex(tau)
    back = TorusPoint.from_complex(z, tau)
    assert back.x == pytest.approx(pt.x, abs=1e-12)
    assert back.y == pytest.approx(pt.y, abs=1e-12)
    wrapped = TorusPoint.from_complex(z + 3 + 2 * tau, tau)
    assert wrapped.x == pytest.approx(pt.x, abs=1e-12)
    assert wrapped.y == pytest.approx(pt.y, abs=1e-12)


def test_green_symmetry_and_periodicity():
    rng = random.Random(3)
    for tau in (0.3 + 1.2j, 0.8j):
        green = TorusGreen(tau)
        for _ in range(6):
            z = complex(rng.uniform(0, 1), 0) + rng.uniform(0.1, 0.9) * tau
            w = complex(rng.uniform(0, 1), 0) + rng.uniform(0.1, 0.9) * tau
            g = green.value(z, w)
            assert green.value(w, z) == pytest.approx(g, abs=1e-12)
            assert green.value(z + 1, w) == pytest.approx(g, abs=1e-10)
            assert green.value(z + tau, w) == pytest.approx(g, abs=1e-10)
            assert green.value(z - 2 - 3 * tau, w) == pytest.approx(g, abs=1e-10)


def test_green_coincident_points_raise():
    green = TorusGreen(0.8j)
    with pytest.raises(ValueError, match="coincident"):
        green.value(0.25 + 0.25j, 0.25 + 0.25j)


def test_green_mean_zero():
    for tau in (0.3 + 1.2j, 0.8j):
        green = TorusGreen(tau)
        assert abs(green.integral_residual(n=128)) <= 1e-8


def test_green_laplacian_residual():
    green = TorusGreen(0.8j)
    assert green.laplacian_residual(n=64) <= 1e-3


def test_regularized_diagonal_metric_scale():
    green = TorusGreen(1.1j)
    base = green.regularized_diagonal()
    scaled = green.regularized_diagonal(metric_scale=3.0)
    assert scaled - base == pytest.approx(math.log(3.0), abs=1e-12)


def test_cross_ratio_frozen_value():
    assert cross_ratio_height(0.0, 1.0, 2.0, 4.0) == pytest.approx(
        math.log(1.5), abs=1e-15
    )
    # Swapping the second divisor's points flips the sign.
    assert cross_ratio_height(0.0, 1.0, 4.0, 2.0) == pytest.approx(
        -math.log(1.5), abs=1e-15
    )


def test_cross_ratio_moebius_invariance():
    rng = random.Random(41)
    for _ in range(25):
        zs = []
        while len(zs) < 4:
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            if all(abs(z - u) > 1e-3 for u in zs):
                zs.append(z)
        a, b, c, d = (
            complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(4)
        )
        if abs(a * d - b * c) < 1e-3:
            continue
        moved = []
        ok = True
        for z in zs:
            den = c * z + d
            if abs(den) < 1e-6:
                ok = False
                break
            moved.append((a * z + b) / den)
        if not ok:
            continue
        base = cross_ratio_height(*zs)
        assert cross_ratio_height(*moved) == pytest.approx(base, abs=1e-9)


def test_sphere_pairing_conservation_gate():
    with pytest.raises(ValueError, match="conservation law violated"):
        height_pairing_surface([0.0, 1.0], [(1,), (1,)], [2.0, 3.0],
                               [(1,), (-1,)], green_sphere)
    with pytest.raises(ValueError, match="one momentum per point"):
        height_pairing_surface([0.0], [(1,), (-1,)], [2.0, 3.0],
                               [(1,), (-1,)], green_sphere)
    assert green_sphere(0.0, 10.0) == pytest.approx(-math.log(10.0))
    with pytest.raises(ValueError, match="coincident"):
        green_sphere(1.0, 1.0)


def test_build_cycle_graph_subdivision():
    graph, lengths, vertex_of = build_cycle_graph(
        (0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)), 1
    )
    assert len(graph.edges) == 4
    assert sorted(lengths.values()) == [0.25, 0.25, 0.25, 0.25]
    assert vertex_of[Fraction(0)] == "v0"
    # One distinct position (1 == 0 mod 1) gives the single loop.
    loop, loop_lengths, _ = build_cycle_graph((0, 1), Fraction(7, 2))
    assert [tuple(e) for e in loop.edges] == [("e1", "v0", "v0")]
    assert loop_lengths["e1"] == pytest.approx(3.5)
    with pytest.raises(ValueError, match="positive total length"):
        build_cycle_graph((0,), 0)


def test_cycle_resistance_closed_form():
    # Unit charges at arc distance a on a circle of length Y pair to
    # a (Y - a) / Y, the two arcs in parallel.
    for a, y_total in ((Fraction(1, 4), 1), (Fraction(1, 8), 1), (Fraction(1, 3), 5)):
        graph, lengths, vertex_of = build_cycle_graph((0, a), y_total)
        space = MinkowskiSpace.euclidean(1)
        mom = MomentumAssignment(
            space, {vertex_of[Fraction(0)]: (1,), vertex_of[a % 1]: (-1,)}
        )
        got = metric_graph_green(graph, lengths, mom)
        arc = float(a * y_total)
        want = arc * (y_total - arc) / y_total
        assert got == pytest.approx(want, rel=1e-12)


DISJOINT = dict(
    y_total=1.0,
    divisor1=[(Fraction(0), 0.0, (1,)), (Fraction(1, 2), 0.0, (-1,))],
    divisor2=[(Fraction(1, 8), 0.0, (1,)), (Fraction(3, 8), 0.0, (-1,))],
)

NULL_MOMENTA = [
    (Fraction(0), 0.0, (1, 0, 0, 1)),
    (Fraction(1, 4), 0.0, (1, 0, 0, -1)),
    (Fraction(1, 2), 0.0, (-1, Fraction(-4, 5), 0, Fraction(-3, 5))),
    (Fraction(3, 4), 0.0, (-1, Fraction(4, 5), 0, Fraction(3, 5))),
]


def test_degeneration_disjoint_frozen():
    report = degeneration_experiment(DegenerationFamily(**DISJOINT))
    assert report.prediction == pytest.approx(0.125, rel=1e-12)
    assert report.estimate == pytest.approx(0.12503926990816985, rel=1e-9)
    assert report.rel_error == pytest.approx(3.1415926535882654e-4, rel=1e-6)
    assert report.slope == pytest.approx(1.0, abs=1e-3)
    assert len(report.values) == len(report.alphas) == 5


def test_degeneration_self_pairing_frozen():
    family = DegenerationFamily(
        1.0, NULL_MOMENTA, space=MinkowskiSpace.lorentzian(4)
    )
    assert family.mode == "self"
    report = degeneration_experiment(family)
    assert report.prediction == pytest.approx(0.05, rel=1e-10)
    assert report.estimate == pytest.approx(0.050015707963267916, rel=1e-9)
    assert report.slope == pytest.approx(1.0, abs=1e-3)


def test_straight_family_converges_superpolynomially():
    report = degeneration_experiment(
        DegenerationFamily(**DISJOINT, imag_offset=0.0)
    )
    assert report.rel_error <= 1e-12
    assert math.isnan(report.slope)


def test_on_shell_metric_scale_independence():
    space = MinkowskiSpace.lorentzian(4)
    base = degeneration_experiment(
        DegenerationFamily(1.0, NULL_MOMENTA, space=space)
    )
    scaled = degeneration_experiment(
        DegenerationFamily(1.0, NULL_MOMENTA, space=space, metric_scale=7.5)
    )
    # Null momenta never touch the diagonal, so the drift is exactly zero.
    assert scaled.estimate - base.estimate == 0.0


def test_off_shell_metric_scale_control():
    green = TorusGreen(1.3j)
    points = [0.25 + 0.3j, 0.6 + 0.9j]
    momenta = [(1,), (-1,)]
    base = regularized_self_height(points, momenta, green)
    scaled = regularized_self_height(points, momenta, green, metric_scale=7.5)
    # <p, p> = 1 on each point, so the drift is 2 log(scale).
    assert scaled - base == pytest.approx(2 * math.log(7.5), abs=1e-12)


def test_family_validation():
    with pytest.raises(ValueError, match="second divisor"):
        DegenerationFamily(1.0, DISJOINT["divisor1"], mode="disjoint")
    with pytest.raises(ValueError, match="single divisor"):
        DegenerationFamily(
            1.0, DISJOINT["divisor1"], DISJOINT["divisor2"], mode="self"
        )
    with pytest.raises(ValueError, match="conservation law violated"):
        DegenerationFamily(1.0, [(Fraction(0), 0.0, (1,))])
    with pytest.raises(ValueError, match="positive total length"):
        DegenerationFamily(0.0, DISJOINT["divisor1"], DISJOINT["divisor2"])
