import math
import numpy as np
import pytest
from numpy.testing import assert_allclose
from graftlab.exceptions import NoPeriodicSolutionError, VariationError
from graftlab.geometry import ConformalFamily, GraftedCollar
from graftlab.spectral import CollarField, FourierSolution, neumann_trace_flat, random_solution
from graftlab.variation import (QuadDiffModes, VariationField, collocation_solve, extended_hyperbolic_neumann,
 geodesic_oracle, hyperbolic_neumann, solve_amended_variation, solve_flat_variation,
  solve_hyperbolic_variation)

ELL = 2 * math.pi

@pytest.fixture
def first_mode():
    return FourierSolution(ELL, 2.0, c=[1.0])


def test_flat_variation_first_mode(first_mode):
    left = solve_flat_variation(neumann_trace_flat(first_mode, "left"), 0.0)
    right = solve_flat_variation(neumann_trace_flat(first_mode, "right"), 0.0)
    assert_allclose(left.modes[0], -math.sinh(1) / 2)
    assert_allclose(right.modes[0], math.sinh(1) / 2)


@pytest.mark.parametrize("c0", [0.1, -2.0, 1e-6])
def test_flat_variation_needs_zero_mean(c0):
    sol = FourierSolution(ELL, 2.0, c0=c0, c=[0.3])
    with pytest.raises(NoPeriodicSolutionError, match="no periodic solution"):
        solve_flat_variation(neumann_trace_flat(sol, "left"), 0.0)


def test_solvability_is_exactly_the_mean_condition():
    rng = np.random.default_rng(8)
    for trial in range(20):
        c0 = 0.0 if trial % 2 else rng.normal()
        sol = FourierSolution.random(3.0, 1.0, rng, 6, c0=c0)
        try:
            solve_flat_variation(neumann_trace_flat(sol, "right"), 0.0)
            assert c0 == 0
        except NoPeriodicSolutionError:
            assert c0 != 0


def test_flat_variation_without_modes_is_its_mean():
    v = solve_flat_variation(neumann_trace_flat(FourierSolution(ELL, 2.0, d0=2.0, c=[0.0]), "left"), 0.7)
    assert_allclose(v.evaluate(np.linspace(0, ELL, 9)), 0.7)


def test_hyperbolic_neumann(first_mode):
    v = solve_flat_variation(neumann_trace_flat(first_mode, "left"), 0.0)
    trace = hyperbolic_neumann(v)
    assert_allclose(trace.modes[0], -2 * math.sinh(1))
    constant = hyperbolic_neumann(VariationField("left", 0.5, [], ELL))
    assert constant.mean == 1.0
    assert hyperbolic_neumann(VariationField("right", 0.0, [0.0], ELL)).modes[0] == 0


def test_hyperbolic_neumann_is_minus_twice_the_operator():
    sol = random_solution(3.5, 1.4, seed=3, modes=6)
    v = solve_flat_variation(neumann_trace_flat(sol, "left"), -0.2)
    y = np.linspace(0, 3.5, 40)
    expected = -2 * (v.evaluate(y, 2) - v.evaluate(y))
    assert_allclose(hyperbolic_neumann(v).evaluate(y), expected, atol=1e-10)
    recovered = solve_hyperbolic_variation(hyperbolic_neumann(v))
    assert_allclose(recovered.modes, v.modes, atol=1e-14)
    assert_allclose(recovered.mean, v.mean)


def test_amended_variation_reduces_at_zero():
    sol = random_solution(ELL, 2.0, seed=1, modes=4)
    flat = neumann_trace_flat(sol, "left")
    amended = solve_amended_variation(flat, QuadDiffModes.zero(ELL, 2.0, 4), 0.1)
    assert_allclose(amended.modes, solve_flat_variation(flat, 0.1).modes, atol=1e-15)
    assert amended.amended


def test_amended_variation_first_modes():
    zero = neumann_trace_flat(FourierSolution(ELL, 2.0, c=[0.0]), "left")
    u_mode = solve_amended_variation(zero, QuadDiffModes(ELL, 2.0, u=[1.0]), 0.0)
    assert_allclose(u_mode.modes[0], -1j * math.cosh(1))
    q = QuadDiffModes(ELL, 2.0, v=[1.0])
    left = solve_amended_variation(zero, q, 0.0)
    right_trace = neumann_trace_flat(FourierSolution(ELL, 2.0, c=[0.0]), "right")
    right = solve_amended_variation(right_trace, q, 0.0)
    assert_allclose(left.modes[0], 1j * math.sinh(1))
    assert_allclose(right.modes[0], -1j * math.sinh(1))


def test_extended_neumann_first_mode():
    zero = neumann_trace_flat(FourierSolution(ELL, 2.0, c=[0.0]), "left")
    q = QuadDiffModes(ELL, 2.0, u=[1.0])
    w = solve_amended_variation(zero, q, 0.0)
    assert_allclose(extended_hyperbolic_neumann(w, q).modes[0], -4j * math.cosh(1))


def test_extended_neumann_is_minus_twice_the_operator():
    rng = np.random.default_rng(12)
    sol = FourierSolution.random(4.0, 1.5, rng, 6)
    q = QuadDiffModes.random(4.0, 1.5, rng, 4)
    for side in ("left", "right"):
        w = solve_amended_variation(neumann_trace_flat(sol, side), q, 0.3)
        y = np.linspace(0, 4.0, 25)
        expected = -2 * (w.evaluate(y, 2) - w.evaluate(y))
        assert_allclose(extended_hyperbolic_neumann(w, q).evaluate(y), expected, atol=1e-10)


def test_extended_neumann_reduces_at_zero():
    sol = random_solution(ELL, 2.0, seed=6, modes=5)
    v = solve_flat_variation(neumann_trace_flat(sol, "right"), 0.4)
    reduced = extended_hyperbolic_neumann(v, QuadDiffModes.zero(ELL, 2.0, 5))
    assert_allclose(reduced.modes, hyperbolic_neumann(v).modes, rtol=1e-13)
    assert_allclose(reduced.mean, hyperbolic_neumann(v).mean)
    with pytest.raises(VariationError):
        hyperbolic_neumann(solve_amended_variation(neumann_trace_flat(sol, "right"), QuadDiffModes.zero(ELL, 2.0), 0.0))


def test_variation_rotates_with_the_field():
    rng = np.random.default_rng(31)
    sol = FourierSolution.random(4.0, 1.5, rng, 6)
    y0 = 0.9
    phase = np.exp(-1j * sol.k * y0)
    rotated = FourierSolution(4.0, 1.5, 0.0, sol.d0, sol.c * phase, sol.d * phase)
    y = np.linspace(0, 4.0, 17)
    for side in ("left", "right"):
        v = solve_flat_variation(neumann_trace_flat(sol, side), 0.2)
        w = solve_flat_variation(neumann_trace_flat(rotated, side), 0.2)
        assert_allclose(w.modes, v.shifted(y0).modes, atol=1e-14)
        assert_allclose(w.evaluate(y), v.evaluate(y - y0), atol=1e-12)


@pytest.mark.parametrize("seed", range(50))
def test_flat_variation_matches_collocation(seed):
    rng = np.random.default_rng(seed)
    ell, s = rng.uniform(1, 8), rng.uniform(0.1, 4)
    sol = FourierSolution.random(ell, s, rng, 16)
    for side in ("left", "right"):
        neumann = neumann_trace_flat(sol, side)
        closed = solve_flat_variation(neumann, 0.2)
        solved = collocation_solve(lambda y: -0.5 * neumann.evaluate(y), 0.0, ell, side, 64, 0.2)
        assert_allclose(solved.modes[:8], closed.modes[:8], atol=1e-8)
        assert_allclose(solved.mean, 0.2, atol=1e-10)


@pytest.mark.parametrize("seed", range(50))
def test_amended_variation_matches_collocation(seed):
    rng = np.random.default_rng(100 + seed)
    ell, s = rng.uniform(1, 8), rng.uniform(0.1, 4)
    sol = FourierSolution.random(ell, s, rng, 16)
    q = QuadDiffModes.random(ell, s, rng, 8)
    for side in ("left", "right"):
        neumann, U = neumann_trace_flat(sol, side), q.seam_trace(side)
        closed = solve_amended_variation(neumann, q, 0.0)
        forcing = lambda y: -0.5 * neumann.evaluate(y) + U.evaluate(y, 1)
        solved = collocation_solve(forcing, 0.0, ell, side, 64, 0.0, amended=True)
        assert_allclose(solved.modes[:8], closed.modes[:8], atol=1e-8)


def test_hyperbolic_variation_matches_collocation():
    sol = random_solution(5.0, 2.5, seed=21, modes=12)
    neumann = hyperbolic_neumann(solve_flat_variation(neumann_trace_flat(sol, "left"), 0.3))
    closed = solve_hyperbolic_variation(neumann)
    solved = collocation_solve(lambda y: -0.5 * neumann.evaluate(y), -1.0, 5.0, "left", 64)
    assert_allclose(solved.modes[:8], closed.modes[:8], atol=1e-10)
    assert_allclose(solved.mean, closed.mean, atol=1e-12)


def test_re_phi_is_harmonic_conjugate():
    q = QuadDiffModes.random(3.0, 1.0, np.random.default_rng(4), 3, u0=0.5)
    x, y, h = 0.2, 1.1, 1e-5
    #Cauchy-Riemann for phi = Re + i Im in z = x + iy
    dre_dx = (q.re_phi(x + h, y) - q.re_phi(x - h, y)) / (2 * h)
    dim_dy = (q.im_phi(x, y + h) - q.im_phi(x, y - h)) / (2 * h)
    assert_allclose(dre_dx, dim_dy, atol=1e-8)


def geodesic_setup(sol, mean=0.0):
    chart = GraftedCollar(sol.ell, sol.s, 1.0)
    variations = {side: solve_flat_variation(neumann_trace_flat(sol, side), mean) for side in ("left", "right")}
    field = CollarField(sol, hyperbolic_neumann(variations["left"]), hyperbolic_neumann(variations["right"]))
    return ConformalFamily(chart, field), variations


def test_geodesic_oracle_at_zero_time(first_mode):
    family, variations = geodesic_setup(first_mode)
    result = geodesic_oracle(family, "left", 0.0, points=32)
    assert result.iterations == 0
    assert np.all(result.raw == 0)


def test_constant_scaling_keeps_the_seam_geodesic():
    family, variations = geodesic_setup(FourierSolution(ELL, 2.0, d0=1.0, c=[0.0]))
    result = geodesic_oracle(family, "right", 1e-3, points=64)
    assert np.max(np.abs(result.raw)) < 1e-12
    assert np.max(np.abs(result.derivative)) < 1e-8


def test_geodesic_oracle_matches_variation(first_mode):
    family, variations = geodesic_setup(first_mode)
    result = geodesic_oracle(family, "left", 1e-3)
    errors = result.compare(variations["left"])
    assert errors["relative"]
    assert errors["max_error"] < 1e-2
    halved = geodesic_oracle(family, "left", 5e-4).compare(variations["left"])
    assert halved["raw_max_error"] < errors["raw_max_error"]


def test_flat_regime_geodesic_matches_variation(first_mode):
    family, variations = geodesic_setup(first_mode, mean=0.3)
    result = geodesic_oracle(family, "left", 1e-3, regime="flat")
    assert_allclose(np.mean(result.raw), 0.3, atol=1e-6)
    assert_allclose(np.mean(result.derivative), 0.3, atol=1e-6)
    errors = result.compare(variations["left"])
    assert errors["max_error"] < 1e-2
    assert errors["raw_max_error"] < 1e-2


def test_unknown_geodesic_regime(first_mode):
    family, variations = geodesic_setup(first_mode)
    with pytest.raises(VariationError):
        geodesic_oracle(family, "left", 1e-3, points=16, regime="spherical")
