"""Mode-by-mode solver for (Laplacian_h - 2) H = 0 on a hyperbolic strip.

In Fermi coordinates (xi, y) with metric d xi^2 + cosh^2(xi) dy^2 and
xi in [0, a] measured from the seam, the mode H = b(xi) e^{iky} satisfies

    b'' + tanh(xi) b' - (k^2 / cosh^2(xi) + 2) b = 0,

i.e. (cosh b')' = (k^2 / cosh + 2 cosh) b. The outer circle xi = a carries
either b = 0 ('dirichlet') or b' = 0 ('neumann')."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
import csv
import logging
import math
import os
import numpy as np
from numpy.polynomial import chebyshev
from scipy.integrate import simpson, solve_ivp
from .exceptions import *
from .spectral import TraceModes, NEUMANN_HYPERBOLIC, side_sign

logger = logging.getLogger(__name__)

OUTER_CONDITIONS = ("dirichlet", "neumann")
DEFAULT_NODES = 512
LAYER_NODES = 300
SHOOTING_TOLERANCE = 1e-12
CROSS_TOLERANCE = 1e-8
COLLOCATION_POINTS = (48, 320)

def thread_count():
    """Parallelism degree from GRAFTLAB_THREADS, defaulting to the core count."""

    value = os.environ.get("GRAFTLAB_THREADS")
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            raise SolverError("GRAFTLAB_THREADS must be an integer, not %s" % value)
    return os.cpu_count() or 1


def _check(n, ell, a, outer_bc):
    if n < 0:
        raise SolverError("Mode index cannot be negative (%s)" % n)
    if ell <= 0:
        raise SolverError("ell must be positive, not %s" % ell)
    if not a > 0:
        raise SolverError("Strip half-width must be positive, not %s" % a)
    if outer_bc not in OUTER_CONDITIONS:
        raise SolverError("%s is not a valid outer boundary condition" % outer_bc)


def mode_potential(xi, k):
    return k * k / np.cosh(xi) ** 2 + 2


def graded_grid(a, nodes=DEFAULT_NODES):
    """xi = a (1 - cos theta) for uniform theta in [0, pi/2], clustered at the seam."""

    theta = np.linspace(0, np.pi / 2, nodes)
    return theta, a * (1 - np.cos(theta))


def resolved_nodes(k, a, nodes=DEFAULT_NODES):
    """At least `nodes`, and enough to resolve the seam boundary layer of a
    mode with wavenumber k. On the graded grid that layer is about
    1/sqrt(k a) wide in theta."""

    return max(nodes, int(math.ceil(LAYER_NODES * math.sqrt(k * a))))


def strip_integral(values, theta, a):
    """Integral over [0, a] of samples on the graded grid, by Simpson's rule in theta."""

    return float(simpson(values * a * np.sin(theta), x=theta))


@lru_cache(maxsize=4096)
def dtn(n, ell, a, outer_bc="dirichlet"):
    """b'(0)/b(0) for the mode-n solution, from backward Riccati shooting.

    Dirichlet outer: p = b/b' with p' = 1 + tanh(xi) p - V p^2, p(a) = 0.
    Neumann outer: q = b'/b with q' = V - tanh(xi) q - q^2, q(a) = 0.
    Both are stable integrated from a down to the seam."""

    _check(n, ell, a, outer_bc)
    k = 2 * math.pi * n / ell
    if outer_bc == "dirichlet":
        rhs = lambda xi, p: 1 + math.tanh(xi) * p - mode_potential(xi, k) * p * p
    else:
        rhs = lambda xi, q: mode_potential(xi, k) - math.tanh(xi) * q - q * q
    result = solve_ivp(rhs, (a, 0.0), [0.0], method="DOP853",
     rtol=SHOOTING_TOLERANCE, atol=1e-14)
    if not result.success:
        raise SolverError("Riccati shooting failed for n = %i: %s" % (n, result.message))
    value = result.y[0, -1]
    if outer_bc == "dirichlet":
        if value == 0:
            raise SolverError("Degenerate mode n = %i: seam value vanishes" % n)
        value = 1 / value
    logger.debug("dtn(n=%i, ell=%g, a=%g, %s) = %.12g", n, ell, a, outer_bc, value)
    return float(value)



@dataclass(frozen=True, eq=False)
class HyperbolicModeSolution:
    """One mode profile b on the graded grid, with b' and the seam DtN value.
    forcing holds (Lb) when the profile is a manufactured one."""

    n: int
    ell: float
    a: float
    outer_bc: str
    theta: np.ndarray
    xi: np.ndarray
    b: np.ndarray
    db: np.ndarray
    dtn: float
    seam_dirichlet: float = 1.0
    discrepancy: float = 0.0
    forcing: np.ndarray = None

    def __repr__(self):
        return "<HyperbolicModeSolution n=%i (%i nodes)>" % (self.n, len(self.xi))


    @property
    def k(self):
        return 2 * math.pi * self.n / self.ell


    @property
    def samples(self):
        return list(zip(self.xi, self.b, self.db))


    def scaled(self, factor):
        forcing = None if self.forcing is None else self.forcing * factor
        return HyperbolicModeSolution(self.n, self.ell, self.a, self.outer_bc, self.theta,
         self.xi, self.b * factor, self.db * factor, self.dtn, self.seam_dirichlet * factor,
          self.discrepancy, forcing)


    def mass(self):
        """Integral of b cosh(xi) over the strip width."""

        return strip_integral(self.b * np.cosh(self.xi), self.theta, self.a)


    def energy(self):
        """Integral of cosh b'^2 + (k^2/cosh + 2 cosh) b^2."""

        ch = np.cosh(self.xi)
        integrand = ch * self.db ** 2 + (self.k ** 2 / ch + 2 * ch) * self.b ** 2
        return strip_integral(integrand, self.theta, self.a)


    def interior(self):
        """Integral of b (Lb) cosh, zero for a solved mode."""

        if self.forcing is None:
            return 0.0
        return strip_integral(self.b * self.forcing * np.cosh(self.xi), self.theta, self.a)


    def boundary_forms(self):
        """b b' cosh at the seam and at the outer circle."""

        return (self.b[0] * self.db[0], self.b[-1] * self.db[-1] * math.cosh(self.a))


    def to_csv(self, path):
        with open(path, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["xi", "b", "db"])
            for row in self.samples:
                writer.writerow(["%.17g" % value for value in row])



def _shoot(k, a, outer_bc, xi):
    """Linear shooting from the outer circle to the seam; returns unnormalised (b, b')."""

    def rhs(x, state):
        b, db = state
        return [db, mode_potential(x, k) * b - math.tanh(x) * db]
    start = [0.0, 1.0] if outer_bc == "dirichlet" else [1.0, 0.0]
    result = solve_ivp(rhs, (a, 0.0), start, method="DOP853", dense_output=True,
     rtol=SHOOTING_TOLERANCE, atol=1e-14)
    if not result.success:
        raise SolverError("Shooting failed: %s" % result.message)
    b, db = result.sol(xi)
    return b, db


def _collocate(k, a, outer_bc, xi):
    """Chebyshev-Gauss-Lobatto collocation with b(0) = 1; returns (b, b') on xi."""

    m = int(min(COLLOCATION_POINTS[1], max(COLLOCATION_POINTS[0], 2 * k * math.atan(math.sinh(a)) + 40)))
    z = chebyshev.chebpts2(m)
    vander = chebyshev.chebvander(z, m - 1)
    inverse = np.linalg.inv(vander)
    first = vander[:, :m - 1] @ chebyshev.chebder(np.eye(m), axis=0) @ inverse
    second = vander[:, :m - 2] @ chebyshev.chebder(np.eye(m), m=2, axis=0) @ inverse
    nodes = a * (z + 1) / 2
    scale = 2 / a
    operator = (scale ** 2 * second + np.diag(np.tanh(nodes)) * scale @ first
     - np.diag(mode_potential(nodes, k)))
    rhs = np.zeros(m)
    operator[0] = 0.0
    operator[0, 0] = 1.0
    rhs[0] = 1.0
    if outer_bc == "dirichlet":
        operator[-1] = 0.0
        operator[-1, -1] = 1.0
    else:
        operator[-1] = scale * first[-1]
    values = np.linalg.solve(operator, rhs)
    coefficients = inverse @ values
    z_out = 2 * xi / a - 1
    return (chebyshev.chebval(z_out, coefficients),
     scale * chebyshev.chebval(z_out, chebyshev.chebder(coefficients)))


def mode_solve(n, ell, a, outer_bc="dirichlet", seam_dirichlet=1.0, nodes=DEFAULT_NODES):
    """Solves the mode-n strip problem with b(0) = seam_dirichlet by backward
    shooting, and cross-checks the profile against Chebyshev collocation.
    The profile is sampled on at least `nodes` points, more for high modes."""

    _check(n, ell, a, outer_bc)
    k = 2 * math.pi * n / ell
    theta, xi = graded_grid(a, resolved_nodes(k, a, nodes))
    b, db = _shoot(k, a, outer_bc, xi)
    b, db = b / b[0], db / b[0]
    b_col, db_col = _collocate(k, a, outer_bc, xi)
    discrepancy = max(np.max(np.abs(b - b_col)) / np.max(np.abs(b)),
     np.max(np.abs(db - db_col)) / max(np.max(np.abs(db)), 1e-300))
    if discrepancy > CROSS_TOLERANCE:
        logger.warning("Shooting and collocation differ by %.2e for n = %i (ell=%g, a=%g)",
         discrepancy, n, ell, a)
    solution = HyperbolicModeSolution(n, ell, a, outer_bc, theta, xi, b, db,
     dtn(n, ell, a, outer_bc), 1.0, float(discrepancy))
    return solution.scaled(seam_dirichlet)


def manufactured_mode(n, ell, a, coefficients, nodes=DEFAULT_NODES, outer_bc="dirichlet"):
    """A polynomial profile b with its exact forcing Lb, for testing the
    Green's identity independently of the solver."""

    _check(n, ell, a, outer_bc)
    k = 2 * math.pi * n / ell
    theta, xi = graded_grid(a, nodes)
    poly = np.polynomial.Polynomial(coefficients)
    b, db, d2b = poly(xi), poly.deriv()(xi), poly.deriv(2)(xi)
    forcing = d2b + np.tanh(xi) * db - mode_potential(xi, k) * b
    return HyperbolicModeSolution(n, ell, a, outer_bc, theta, xi, b, db,
     float(db[0] / b[0]) if b[0] else 0.0, float(b[0]), 0.0, forcing)



class StripModes:
    """H on one strip: the seam Dirichlet trace times the unit-seam mode
    profiles. xi grows away from the seam, so xi = -s/2 - x on the left
    strip and xi = x - s/2 on the right one."""

    def __init__(self, trace, a, outer_bc, solutions):
        self.trace, self.a, self.outer_bc = trace, a, outer_bc
        self.side, self.ell = trace.side, trace.ell
        self.solutions = tuple(solutions)


    def __repr__(self):
        return "<%s StripModes (%i modes)>" % (self.side.capitalize(), len(self.solutions))


    @property
    def amplitudes(self):
        return np.concatenate([[self.trace.mean], self.trace.modes])


    @property
    def weights(self):
        """ell |D_n|^2, doubled for n >= 1 to count the -n mode."""

        amplitudes = self.amplitudes
        weights = self.ell * np.abs(amplitudes) ** 2
        weights[1:] *= 2
        return weights


    @property
    def dtn_values(self):
        return np.array([solution.dtn for solution in self.solutions])


    def evaluate(self, xi, y):
        """H at distance xi from the seam."""

        profiles = np.array([np.interp(xi, sol.xi, sol.b) for sol in self.solutions])
        value = self.amplitudes[0].real * profiles[0]
        k = 2 * np.pi * np.arange(1, len(self.solutions)) / self.ell
        return value + 2 * np.real(np.sum(self.amplitudes[1:] * profiles[1:] * np.exp(1j * k * y)))


    def energy(self):
        """Integral over the strip of |grad H|^2 + 2 H^2."""

        return float(sum(w * sol.energy() for w, sol in zip(self.weights, self.solutions)))


    def integral(self):
        """Integral of H over the strip; only the n = 0 mode survives."""

        return self.ell * self.trace.mean * self.solutions[0].mass()


    def seam_term(self):
        """Seam part of the integral of H dH/dn, the strip's outward normal being -d/dxi."""

        return float(-sum(w * sol.boundary_forms()[0] for w, sol in zip(self.weights, self.solutions)))


    def outer_term(self):
        return float(sum(w * sol.boundary_forms()[1] for w, sol in zip(self.weights, self.solutions)))


    def interior(self):
        return float(sum(w * sol.interior() for w, sol in zip(self.weights, self.solutions)))


    def seam_flux(self):
        """Integral over the seam of dH/dn (outward)."""

        return -self.ell * self.trace.mean * self.solutions[0].db[0]


    def outer_flux(self):
        return self.ell * self.trace.mean * self.solutions[0].db[-1] * math.cosh(self.a)


    def neumann_trace(self):
        """dH/dx at the seam from the DtN map: -dtn D on the left, +dtn D on the right."""

        sign = side_sign(self.side)
        dtn_values = self.dtn_values
        return TraceModes(self.side, NEUMANN_HYPERBOLIC, sign * dtn_values[0] * self.trace.mean,
         sign * dtn_values[1:] * self.trace.modes, self.ell)



def solve_strip(trace, a, outer_bc="dirichlet", nodes=DEFAULT_NODES, workers=None):
    """Solves every mode of a Dirichlet seam trace, in parallel over modes."""

    workers = thread_count() if workers is None else workers
    task = lambda n: mode_solve(n, trace.ell, a, outer_bc, 1.0, nodes)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        solutions = list(executor.map(task, range(trace.N + 1)))
    return StripModes(trace, a, outer_bc, solutions)



@dataclass(frozen=True)
class GreensBalance:
    """Terms of  integral H (L_h - 2) H = -integral (|grad H|^2 + 2 H^2) + boundary integral of H dH/dn."""

    interior: float
    energy: float
    seam: float
    outer: float

    @property
    def residual(self):
        return self.interior + self.energy - self.seam - self.outer



def interior_integral(strips):
    """(integral of H, integral of |grad H|^2 + 2 H^2) over the given strips."""

    strips = list(strips)
    return (float(sum(strip.integral() for strip in strips)),
     float(sum(strip.energy() for strip in strips)))


def greens_residual(solutions, weights=None):
    """Green's identity balance over strips or over bare mode profiles, with
    every boundary circle included."""

    solutions = list(solutions)
    if solutions and isinstance(solutions[0], StripModes):
        return GreensBalance(sum(s.interior() for s in solutions), sum(s.energy() for s in solutions),
         sum(s.seam_term() for s in solutions), sum(s.outer_term() for s in solutions))
    weights = [1.0] * len(solutions) if weights is None else list(weights)
    return GreensBalance(
     sum(w * s.interior() for w, s in zip(weights, solutions)),
     sum(w * s.energy() for w, s in zip(weights, solutions)),
     -sum(w * s.boundary_forms()[0] for w, s in zip(weights, solutions)),
     sum(w * s.boundary_forms()[1] for w, s in zip(weights, solutions)))


def assemble_mode_system(n, ell, s, a, outer_bc="dirichlet", scaled=False):
    """The 2x2 matrix acting on (c_n, d_n) that equates, on each seam, the
    variation-mediated Neumann data with the strip's DtN Neumann data.

    With scaled=True both columns are divided by cosh(pi n s / ell), so the
    matrix acts on cosh(pi n s / ell) (c_n, d_n) and its entries stay bounded
    for every n."""

    if n < 1:
        raise SolverError("The mode system is defined for n >= 1, not %s" % n)
    arg = math.pi * n * s / ell
    if scaled:
        ch, sh = 1.0, math.tanh(arg)
    else:
        ch, sh = math.cosh(arg), math.sinh(arg)
    ratio = (4 * math.pi ** 2 * n ** 2 + ell ** 2) / (2 * math.pi * n * ell)
    delta = dtn(n, ell, a, outer_bc)
    return np.array([
     [-ratio * sh + delta * ch, ratio * ch - delta * sh],
     [ratio * sh - delta * ch, ratio * ch - delta * sh]
    ])


def mode_determinant(n, ell, s, a, outer_bc="dirichlet"):
    """Determinant of the column-scaled mode system, 2 (r - dtn tanh)(dtn - r tanh)
    with r = (4 pi^2 n^2 + ell^2) / (2 pi n ell).
    The unscaled determinant is cosh^2(pi n s / ell) times this, with the
    same sign."""

    return float(np.linalg.det(assemble_mode_system(n, ell, s, a, outer_bc, scaled=True)))


def zero_mode_coefficient(ell, s, a, outer_bc="dirichlet"):
    """s/2 - dtn_0: with c0 = 0 and the slice relation, d0 times this equals -ds/dt."""

    return s / 2 - dtn(0, ell, a, outer_bc)


def solve_mode_system(n, ell, s, a, outer_bc="dirichlet", rhs=(0.0, 0.0)):
    """(c_n, d_n) from the scaled system, undoing the column scaling."""

    scaled = np.linalg.solve(assemble_mode_system(n, ell, s, a, outer_bc, scaled=True).astype(complex),
     np.asarray(rhs, dtype=complex))
    with np.errstate(over="ignore"):
        return scaled / np.cosh(math.pi * n * s / ell)
