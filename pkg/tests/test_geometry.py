import math
import numpy as np
import pytest
from numpy.testing import assert_allclose
from graftlab.exceptions import ChartError, SeamError
from graftlab.geometry import (ConformalFamily, GraftedCollar, conformal_curvature, gudermannian,
 grafted_length, predicted_curvature)
from graftlab.spectral import FourierSolution
from graftlab.variation import QuadDiffModes

ELL = 2 * math.pi

@pytest.fixture
def chart():
    return GraftedCollar(ELL, 2.0, 1.0)


def test_metric_coefficient_on_each_stratum(chart):
    flat = chart.metric_coefficient(0.0)
    assert (flat.G, flat.dG) == (1.0, 0.0)
    hyperbolic = chart.metric_coefficient(2.0)
    assert_allclose(hyperbolic.G, math.cosh(1), rtol=1e-15)
    assert_allclose(chart.metric_coefficient(-2.0).dG, -math.sinh(1), rtol=1e-15)


def test_seam_has_one_sided_second_derivatives(chart):
    seam = chart.metric_coefficient(1.0)
    assert seam.G == 1.0
    assert seam.dG == 0.0
    assert seam.d2G == (0.0, 1.0)
    jumps = chart.seam_jumps()
    assert jumps["G"] == 0 and jumps["dG"] == 0
    assert jumps["d2G"] == 1.0


def test_gauss_curvature(chart):
    assert chart.gauss_curvature(0.0) == 0
    assert_allclose(chart.gauss_curvature(1.5), -1.0)
    with pytest.raises(SeamError, match="seam: curvature discontinuous"):
        chart.gauss_curvature(1.0)


@pytest.mark.parametrize("x", [0.3, 1.7, -1.4])
def test_christoffel_symbols(chart, x):
    symbols = chart.christoffel(x)
    h = 1e-5
    G = lambda u: chart.metric_coefficient(u).G
    assert_allclose(symbols["x_yy"], -(G(x + h) ** 2 - G(x - h) ** 2) / (4 * h), atol=1e-9)
    assert_allclose(symbols["y_xy"], (math.log(G(x + h)) - math.log(G(x - h))) / (2 * h), atol=1e-9)


def test_invalid_charts_are_rejected():
    with pytest.raises(ChartError):
        GraftedCollar(0.0, 1.0, 1.0)
    with pytest.raises(ChartError):
        GraftedCollar(1.0, -1.0, 1.0)
    with pytest.raises(ChartError):
        GraftedCollar(1.0, 1.0, 1.0, "robin")
    with pytest.raises(ChartError):
        GraftedCollar(ELL, 2.0, 1.0).stratum(2.5)


@pytest.mark.parametrize("s, a, expected", [
 (2.0, 1.0, 2 * ELL * math.sinh(1) + 4 * math.pi),
 (2.0, 0.0, ELL * 2.0),
 (0.0, 1.5, 2 * ELL * math.sinh(1.5)),
])
def test_total_area(s, a, expected):
    chart = GraftedCollar(ELL, s, a)
    assert_allclose(chart.total_area(), expected, rtol=1e-14)
    assert_allclose(chart.area_by_quadrature(), expected, rtol=1e-10)


def test_conformal_modulus():
    assert_allclose(GraftedCollar(ELL, 3.0, 0.0).conformal_modulus(), 3.0 / ELL)
    chart = GraftedCollar(ELL, 0.0, 1.0)
    assert_allclose(chart.conformal_modulus(), 2 * gudermannian(1.0) / ELL)
    assert abs(chart.conformal_modulus() - 0.2756) < 1e-4
    assert_allclose(chart.modulus_by_quadrature(), chart.conformal_modulus(), rtol=1e-10)


def test_conformal_modulus_decreases_with_length():
    moduli = [GraftedCollar(ell, 1.0, 0.7).conformal_modulus() for ell in np.linspace(1, 8, 20)]
    assert np.all(np.diff(moduli) < 0)


@pytest.mark.parametrize("ell, s, expected", [(ELL, 2.0, 4 * math.pi), (ELL, 0.0, 0.0), (1.0, 1.0, 1.0)])
def test_grafted_length(ell, s, expected):
    assert_allclose(grafted_length(ell, s), expected)


def test_chart_json_round_trip(chart):
    assert GraftedCollar.from_json(chart.to_json()) == chart
    with pytest.raises(ChartError):
        GraftedCollar.from_json("{\"ell\": 1}")


def test_family_metric_at_zero_is_base_metric(chart):
    sol = FourierSolution.random(ELL, 2.0, np.random.default_rng(1), 4)
    family = ConformalFamily(chart, sol)
    assert_allclose(family.family_metric(0.0, 0.4, 1.1), np.diag([1.0, 1.0]))


def test_constant_conformal_factor_scales_metric(chart):
    family = ConformalFamily(chart, FourierSolution(ELL, 2.0, d0=3.0))
    assert_allclose(family.family_metric(0.1, 0.5, 0.3), np.diag([1.0, 1.0]) / 1.3)


def test_quadratic_differential_off_diagonal(chart):
    quad = QuadDiffModes(ELL, 2.0, u=[1.0])
    family = ConformalFamily(chart, FourierSolution(ELL, 2.0), quad=quad)
    t, y = 1e-3, 0.7
    metric = family.family_metric(t, 1.0, y)
    assert_allclose(metric[0, 1], 2 * t * quad.im_phi(1.0, y), rtol=1e-12)
    assert_allclose(metric[1, 1], 1 + 2 * t * quad.re_phi(1.0, y), rtol=1e-12)
    with pytest.raises(ChartError):
        family.family_metric(t, 1.5, y)


def test_circle_length_derivative(chart):
    family = ConformalFamily(chart, FourierSolution(ELL, 2.0, d0=1.0))
    assert_allclose(family.length_derivative(0.0, 1e-5), -math.pi, rtol=1e-4)
    zero = ConformalFamily(chart, FourierSolution(ELL, 2.0))
    assert abs(zero.length_derivative(0.0, 1e-5)) < 1e-12


@pytest.mark.parametrize("x", [0.3, 1.5, -1.6])
def test_conformal_curvature_matches_prediction(chart, x):
    H = lambda u, v: 1 + 0.1 * math.sin(u) * math.cos(v)
    assert_allclose(conformal_curvature(chart, H, x, 0.7), predicted_curvature(chart, H, x, 0.7), atol=1e-5)


def test_unit_factor_recovers_base_curvature(chart):
    H = lambda u, v: 1.0
    assert_allclose(conformal_curvature(chart, H, 1.5, 0.2), -1.0, atol=1e-5)
    assert abs(conformal_curvature(chart, H, 0.2, 0.2)) < 1e-6
