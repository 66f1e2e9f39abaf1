"""Evaluation of the boundary-term, area and slice identities on a solved
configuration, each packaged as an IdentityReport."""

from dataclasses import dataclass, field
import datetime
import json
import logging
import numpy as np
from scipy.integrate import trapezoid
from .exceptions import *
from .geometry import ConformalFamily, GraftedCollar, grafted_length
from .hypersolve import (CROSS_TOLERANCE, DEFAULT_NODES, greens_residual, interior_integral,
 mode_determinant, solve_mode_system, solve_strip, zero_mode_coefficient)
from .log import TIMESTAMP_FORMAT
from .spectral import (SIDES, FourierSolution, dirichlet_trace, harmonicity_residual,
 neumann_trace_flat)
from .variation import (QuadDiffModes, collocation_solve, extended_hyperbolic_neumann,
 hyperbolic_neumann, solve_amended_variation, solve_flat_variation, solve_hyperbolic_variation)

logger = logging.getLogger(__name__)

#The closed forms store n >= 1 only; the n and -n terms of the sum over n != 0 are equal
SIGMA_PRIME_PAIRING = 2
ALGEBRAIC_TOLERANCE = 1e-10
SOLVER_TOLERANCE = 1e-7
QUADRATURE_POINTS = 4096
FLUX_S_RATE = 0.1

@dataclass(frozen=True)
class IdentityReport:
    identity: str
    terms: tuple
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    tol: float
    passed: bool
    notes: tuple = ()
    timestamp: str = field(default="", compare=False)

    def __repr__(self):
        return "<IdentityReport %s (%s)>" % (self.identity, "pass" if self.passed else "FAIL")


    def to_dict(self, timestamp=True):
        values = {
         "identity": self.identity,
         "terms": [{"label": label, "value": value} for label, value in self.terms],
         "lhs": self.lhs, "rhs": self.rhs, "abs_err": self.abs_err, "rel_err": self.rel_err,
         "tol": self.tol, "pass": self.passed, "notes": list(self.notes)
        }
        if timestamp:
            values["timestamp"] = self.timestamp
        return values


    def to_json(self, timestamp=True):
        return json.dumps(self.to_dict(timestamp), sort_keys=True)


    def term(self, label):
        for name, value in self.terms:
            if name == label:
                return value
        raise IdentityError("%s has no term labelled %s" % (self.identity, label))



def make_report(identity, lhs, rhs, tol, terms=(), notes=(), abs_err=None):
    """Builds a report, passing when the absolute or relative error is within tol."""

    lhs, rhs = float(lhs), float(rhs)
    abs_err = abs(lhs - rhs) if abs_err is None else float(abs_err)
    scale = max(abs(lhs), abs(rhs))
    rel_err = abs_err / scale if scale > 0 else 0.0
    passed = bool(abs_err <= tol or rel_err <= tol)
    report = IdentityReport(identity, tuple((label, float(value)) for label, value in terms),
     lhs, rhs, abs_err, rel_err, tol, passed, tuple(notes),
      datetime.datetime.now().strftime(TIMESTAMP_FORMAT))
    log = logger.info if passed else logger.warning
    log("%s: lhs=%.6e rhs=%.6e rel_err=%.2e (%s)", identity, lhs, rhs, rel_err,
     "pass" if passed else "FAIL")
    return report



@dataclass(frozen=True, eq=False)
class Configuration:
    """A solved configuration: the flat field, seam variations (amended when
    quad is present), the Hopf data and the strip solutions."""

    chart: GraftedCollar
    sol: FourierSolution
    v_left: object
    v_right: object
    quad: QuadDiffModes = None
    s_rate: float = 0.0
    strips: tuple = None

    @property
    def amended(self):
        return self.quad is not None



def slice_difference(sol, s_rate=0.0, quad=None):
    """lambda_0 - rho_0 = -s d0/2 - ds/dt - (s/ell) integral Re phi."""

    difference = -sol.s * sol.d0 / 2 - s_rate
    if quad is not None:
        difference -= sol.s / sol.ell * re_phi_integral(quad)
    return difference


def _re_phi_closed(q, side, y):
    """Re phi on a seam at the closed grid y, which ends at y = ell."""

    x = -q.s / 2 if side == "left" else q.s / 2
    values = q.re_phi(x, y[:-1])
    #The u0 term jumps at y = ell; take its left limit there
    return np.append(values, values[0] - q.u0 * q.ell)


def re_phi_integral(quad, side="left", points=QUADRATURE_POINTS):
    """Integral of Re phi over a seam circle by the closed trapezoid rule."""

    y = np.linspace(0, quad.ell, points + 1)
    return float(trapezoid(_re_phi_closed(quad, side, y), x=y))


def build_configuration(chart, sol, quad=None, s_rate=0.0, solve_strips=True,
 nodes=DEFAULT_NODES, workers=None):
    """Solves the seam variations, pins lambda_0 and rho_0 by the slice
    relation (split antisymmetrically) and solves both strips."""

    if abs(chart.ell - sol.ell) > 1e-14 * chart.ell or abs(chart.s - sol.s) > 1e-14 * max(1, chart.s):
        raise IdentityError("Chart %r and solution disagree on ell or s" % chart)
    difference = slice_difference(sol, s_rate, quad)
    means = {"left": difference / 2, "right": -difference / 2}
    fields = {}
    for side in SIDES:
        flat = neumann_trace_flat(sol, side)
        if quad is None:
            fields[side] = solve_flat_variation(flat, means[side])
        else:
            fields[side] = solve_amended_variation(flat, quad, means[side])
    strips = None
    if solve_strips:
        strips = tuple(solve_strip(dirichlet_trace(sol, side), chart.a, chart.outer_bc, nodes, workers)
         for side in SIDES)
    return Configuration(chart, sol, fields["left"], fields["right"], quad, s_rate, strips)


def consistent_configuration(chart, modes=8, s_rate=0.0, nodes=DEFAULT_NODES, workers=None):
    """The configuration satisfying every per-mode system together with the
    zero-mode balance. The homogeneous systems are non-singular, so only
    d0 = -ds/dt / (s/2 - dtn_0) survives."""

    coefficients = np.array([solve_mode_system(n, chart.ell, chart.s, chart.a, chart.outer_bc)
     for n in range(1, modes + 1)])
    d0 = -s_rate / zero_mode_coefficient(chart.ell, chart.s, chart.a, chart.outer_bc)
    sol = FourierSolution(chart.ell, chart.s, 0.0, d0, coefficients[:, 0], coefficients[:, 1])
    return build_configuration(chart, sol, s_rate=s_rate, nodes=nodes, workers=workers)


def _coefficient_sum(sol, arg=None):
    """Per-mode terms (1/n)(4 pi^2 n^2 + ell^2)(|c|^2 + |d|^2) sinh cosh, with
    each coefficient multiplied into its hyperbolic factor before squaring."""

    n = np.arange(1, sol.N + 1)
    arg = np.pi * n * sol.s / sol.ell if arg is None else arg
    ch, sh = np.cosh(arg), np.sinh(arg)
    squares = np.abs(sol.c) * ch * np.abs(sol.c) * sh + np.abs(sol.d) * ch * np.abs(sol.d) * sh
    return (4 * np.pi ** 2 * n ** 2 + sol.ell ** 2) / n * squares


def boundary_term_closed(sol, v_left, v_right):
    """2 ell d0 (lambda_0 - rho_0) - (1/pi) sum' (1/n)(4 pi^2 n^2 + ell^2)(|c|^2+|d|^2) sinh cosh."""

    mean_term = 2 * sol.ell * sol.d0 * (v_left.mean - v_right.mean)
    return float(mean_term - SIGMA_PRIME_PAIRING / np.pi * np.sum(_coefficient_sum(sol)))


def boundary_term_quadrature(dirichlet, neumann, points=QUADRATURE_POINTS):
    """Trapezoidal quadrature of the seam integral of H dH/dn with outward
    normal +d/dx on the left seam and -d/dx on the right seam. Both
    arguments are (left, right) pairs of traces."""

    (d_left, d_right), (n_left, n_right) = dirichlet, neumann
    if len({d_left.N, d_right.N, n_left.N, n_right.N}) != 1:
        raise IdentityError("Traces have mismatched truncations (%i, %i, %i, %i)" % (
         d_left.N, d_right.N, n_left.N, n_right.N))
    ell = d_left.ell
    y = np.arange(points) * ell / points
    integrand = d_left.evaluate(y) * n_left.evaluate(y) - d_right.evaluate(y) * n_right.evaluate(y)
    return float(ell * np.mean(integrand))


def _pad(values, count):
    padded = np.zeros(count, dtype=complex)
    padded[:len(values)] = values[:count]
    return padded


def _cross_products(sol, q, arg):
    """Im[v conj(c) + u conj(d)] sinh cosh per mode."""

    u, v = _pad(q.u, sol.N), _pad(q.v, sol.N)
    ch, sh = np.cosh(arg), np.sinh(arg)
    return np.imag(v * ch * np.conj(sol.c * sh) + u * ch * np.conj(sol.d * sh))


def cross_term(sol, q, arg=None):
    """-sum_{n>0} (4 pi^2 n^2 + ell^2)(2/(pi n)) Im[v conj(c) + u conj(d)] sinh cosh, paired."""

    n = np.arange(1, sol.N + 1)
    arg = np.pi * n * sol.s / sol.ell if arg is None else arg
    terms = (4 * np.pi ** 2 * n ** 2 + sol.ell ** 2) * 2 / (np.pi * n) * _cross_products(sol, q, arg)
    return float(-SIGMA_PRIME_PAIRING * np.sum(terms))


def extended_boundary_term(sol, q, w_left, w_right):
    return boundary_term_closed(sol, w_left, w_right) + cross_term(sol, q)


def extended_boundary_quadrature(sol, q, w_left, w_right, points=QUADRATURE_POINTS):
    """Seam quadrature of H (dH/dn) with the amended hyperbolic Neumann data."""

    count = max(sol.N, q.N)
    padded = FourierSolution(sol.ell, sol.s, sol.c0, sol.d0, _pad(sol.c, count), _pad(sol.d, count))
    dirichlet = tuple(dirichlet_trace(padded, side) for side in SIDES)
    neumann = []
    for w in (w_left, w_right):
        trace = extended_hyperbolic_neumann(w, q)
        neumann.append(trace if trace.N == count else type(trace)(trace.side, trace.kind, trace.mean,
         _pad(trace.modes, count), trace.ell))
    return boundary_term_quadrature(dirichlet, tuple(neumann), points)


def unamended_boundary_quadrature(sol, v_left, v_right, points=QUADRATURE_POINTS):
    dirichlet = tuple(dirichlet_trace(sol, side) for side in SIDES)
    neumann = tuple(hyperbolic_neumann(v) for v in (v_left, v_right))
    return boundary_term_quadrature(dirichlet, neumann, points)


def _strips(config):
    if config.strips is None:
        raise IdentityError("Configuration has no solved strips")
    return config.strips


def master_terms(config):
    """The three terms of the nonpositivity identity plus the outer Green's term."""

    sol = config.sol
    integral, energy = interior_integral(_strips(config))
    mode_sum = -SIGMA_PRIME_PAIRING / np.pi * float(np.sum(_coefficient_sum(sol)))
    graft = 2 * sol.ell * sol.d0 * (config.v_left.mean - config.v_right.mean)
    outer = sum(strip.outer_term() for strip in config.strips)
    return [("hyperbolic energy", -energy), ("mode sum", mode_sum),
     ("graft term", graft), ("outer boundary", outer)]


def master_identity(config, tol=SOLVER_TOLERANCE):
    """Sums the hyperbolic energy, the mode sum and the graft term. On the
    model the total equals minus the outer-boundary Green's term; a non-zero
    field makes it strictly smaller, which is the vanishing contradiction."""

    terms = master_terms(config)
    values = dict(terms)
    total = values["hyperbolic energy"] + values["mode sum"] + values["graft term"]
    notes = []
    if any(value > tol for label, value in terms[:3]):
        notes.append("a term is positive: slice condition not imposed")
    if total < -tol:
        notes.append("contradiction: total is strictly negative for a non-zero field")
    return make_report("master_identity", total, -values["outer boundary"], tol,
     terms + [("total", total)], notes)


def slice_condition(sol, v_left, v_right, s_rate=0.0, tol=1e-12):
    """Residual of lambda_0 - rho_0 + s d0 / 2 + ds/dt."""

    difference = v_left.mean - v_right.mean
    required = -sol.s * sol.d0 / 2 - s_rate
    return make_report("slice_condition", difference, required, tol,
     [("lambda_0 - rho_0", difference), ("-s d0 / 2", -sol.s * sol.d0 / 2), ("-ds/dt", -s_rate)],
      abs_err=abs(difference - required))


def _require_periodic(sol):
    if sol.c0 != 0:
        raise IdentityError("Area derivatives need c0 = 0, not %s" % sol.c0)


def area_derivative_geometric(sol, s_rate=0.0):
    """d/dt (ell s) = -1/2 d0 ell s + ell ds/dt."""

    _require_periodic(sol)
    return -0.5 * sol.d0 * sol.ell * sol.s + sol.ell * s_rate


def area_derivative_analytic(sol, v_left, v_right):
    """-ell (lambda_0 - rho_0) - d0 ell s."""

    _require_periodic(sol)
    return -sol.ell * (v_left.mean - v_right.mean) - sol.d0 * sol.ell * sol.s


def area_flux_identity(config, tol=SOLVER_TOLERANCE):
    """Checks the first term of area_derivative_analytic against the strips.
    (L_h - 2) H = 0 gives -integral H = -1/2 (seam flux + outer flux), and
    on a consistent configuration the seam half equals -ell (lambda_0 - rho_0),
    so -integral H = -ell (lambda_0 - rho_0) - 1/2 outer flux."""

    strips = _strips(config)
    _require_periodic(config.sol)
    integral = sum(strip.integral() for strip in strips)
    seam = sum(strip.seam_flux() for strip in strips)
    outer = sum(strip.outer_flux() for strip in strips)
    variation = -config.sol.ell * (config.v_left.mean - config.v_right.mean)
    notes = []
    if abs(variation + 0.5 * seam) > tol * max(1.0, abs(variation)):
        notes.append("seam flux and variation term disagree: configuration is not consistent")
    return make_report("area_flux_identity", -integral, variation - 0.5 * outer, tol,
     [("-integral H", -integral), ("-ell (lambda_0 - rho_0)", variation),
      ("-outer flux / 2", -0.5 * outer), ("-seam flux / 2", -0.5 * seam)], notes)


def arc_length_derivative(sol, q=None, side="left", points=QUADRATURE_POINTS):
    """-1/2 integral over a seam circle of (H - 2 Re phi)."""

    y = np.linspace(0, sol.ell, points + 1)
    trace = dirichlet_trace(sol, side)
    values = trace.evaluate(y)
    if q is not None:
        values = values - 2 * _re_phi_closed(q, side, y)
    return float(-0.5 * trapezoid(values, x=y))


def _scaling_terms(config):
    sol, q = config.sol, config.quad
    if sol.s == 0 and config.s_rate != 0:
        raise IdentityError("division by s = 0 in the ds/dt term")
    rate_term = -2 * sol.ell * sol.s * sol.d0 * (config.s_rate / sol.s) if config.s_rate else 0.0
    remainder = -2 * sol.s * sol.d0 * re_phi_integral(q) if q is not None else 0.0
    crossed = cross_term(sol, q) if q is not None else 0.0
    return rate_term, remainder, crossed


def extended_master_identity(config, tol=SOLVER_TOLERANCE):
    """Collects every term of the extended identity: the hyperbolic energy,
    the mode sum, the Hopf cross term, -ell s d0^2, -2 ell s d0 (ds/dt)/s and
    the Re phi remainder. The same total is recomputed with L = ell s
    arguments and both must agree."""

    sol, q = config.sol, config.quad
    integral, energy = interior_integral(_strips(config))
    mode_sum = -SIGMA_PRIME_PAIRING / np.pi * float(np.sum(_coefficient_sum(sol)))
    rate_term, remainder, crossed = _scaling_terms(config)
    graft = -sol.ell * sol.s * sol.d0 ** 2
    outer = sum(strip.outer_term() for strip in config.strips)
    total = -energy + mode_sum + crossed + graft + rate_term + remainder
    length_total = -energy + length_form_sum(config) + rate_term + remainder
    notes = []
    norm = q.norm if q is not None else 0.0
    if norm > 0 and sol.s > 0:
        notes.append("remainder ratio |R| / (ell s |Phi|) = %.6g" % (abs(remainder) / (sol.ell * sol.s * norm)))
    report = make_report("extended_master_identity", total, length_total, tol, [
     ("hyperbolic energy", -energy), ("mode sum", mode_sum), ("hopf cross term", crossed),
     ("-ell s d0^2", graft), ("-2 ell s d0 (ds/dt)/s", rate_term), ("re phi remainder", remainder),
     ("outer boundary", outer), ("total", total), ("length form total", length_total)], notes)
    return report


def length_form_sum(config):
    """Mode sum, cross term and graft term rewritten with L = ell s, so the
    hyperbolic arguments read pi n L / ell^2."""

    sol, q = config.sol, config.quad
    ell = sol.ell
    L = grafted_length(ell, sol.s)
    arg = np.pi * np.arange(1, sol.N + 1) * L / ell ** 2
    total = -SIGMA_PRIME_PAIRING / np.pi * float(np.sum(_coefficient_sum(sol, arg)))
    if q is not None:
        total += cross_term(sol, q, arg)
    return float(total - L * sol.d0 ** 2)


def vanishing_report(chart, modes, threshold=1e-6):
    """Smallest |det| of the column-scaled per-mode systems and the zero-mode
    coefficient. Passes when every system is non-singular beyond the
    threshold and the zero-mode coefficient is positive, so only the zero
    field survives."""

    determinants = [mode_determinant(n, chart.ell, chart.s, chart.a, chart.outer_bc)
     for n in range(1, modes + 1)]
    smallest = min(abs(value) for value in determinants)
    zero = zero_mode_coefficient(chart.ell, chart.s, chart.a, chart.outer_bc)
    passed = bool(smallest > threshold and zero > 0 and all(np.isfinite(determinants)))
    shortfall = max(0.0, threshold - smallest)
    terms = [("min |det|", smallest), ("zero-mode coefficient", zero)]
    terms += [("det_%i" % n, value) for n, value in enumerate(determinants, start=1)]
    return IdentityReport("vanishing_mechanism", tuple(terms), smallest, threshold, shortfall,
     shortfall / threshold, threshold, passed, (), datetime.datetime.now().strftime(TIMESTAMP_FORMAT))


def extended_scaling_exponent(sol, q, epsilons=(1e-2, 1e-3, 1e-4), tol=0.05):
    """Fits the exponent of the Hopf-dependent terms (cross term plus Re phi
    remainder) of the extended identity under q -> eps q. It should be 1."""

    values = []
    for eps in epsilons:
        scaled = q.scaled(eps)
        values.append(abs(cross_term(sol, scaled) - 2 * sol.s * sol.d0 * re_phi_integral(scaled)))
    if min(values) == 0:
        raise IdentityError("The Hopf terms vanish identically; no exponent to fit")
    slope = float(np.polyfit(np.log(epsilons), np.log(values), 1)[0])
    return make_report("extended_scaling_exponent", slope, 1.0, tol,
     [("eps = %g" % eps, value) for eps, value in zip(epsilons, values)], abs_err=abs(slope - 1))


def _collocation_report(identity, closed_fields, solved_fields, tol, compared):
    error = 0.0
    for closed, solved in zip(closed_fields, solved_fields):
        count = min(compared, closed.N, solved.N)
        error = max(error, abs(closed.mean - solved.mean),
         float(np.max(np.abs(closed.modes[:count] - solved.modes[:count]), initial=0.0)))
    scale = max(float(np.max(np.abs(f.modes[:compared]), initial=0.0)) for f in closed_fields)
    return make_report(identity, scale, scale, tol, [("max coefficient error", error)], abs_err=error)


def variation_collocation_reports(sol, q, tol, compared=8):
    """Closed-form seam variations against periodic collocation solves of
    their defining equations, in both curvature regimes."""

    points = max(64, 4 * max(sol.N, q.N))
    flat, amended, hyperbolic = [], [], []
    for side in SIDES:
        neumann = neumann_trace_flat(sol, side)
        v = solve_flat_variation(neumann, 0.25)
        forcing = lambda y, neumann=neumann: -0.5 * neumann.evaluate(y)
        flat.append((v, collocation_solve(forcing, 0.0, sol.ell, side, points, 0.25)))
        w = solve_amended_variation(neumann, q, 0.25)
        U = q.seam_trace(side)
        amended_forcing = lambda y, neumann=neumann, U=U: -0.5 * neumann.evaluate(y) + U.evaluate(y, 1)
        amended.append((w, collocation_solve(amended_forcing, 0.0, sol.ell, side, points, 0.25, amended=True)))
        trace = hyperbolic_neumann(v)
        recovered = solve_hyperbolic_variation(trace)
        hyperbolic_forcing = lambda y, trace=trace: -0.5 * trace.evaluate(y)
        hyperbolic.append((recovered, collocation_solve(hyperbolic_forcing, -1.0, sol.ell, side, points)))
    return [_collocation_report(name, [pair[0] for pair in pairs], [pair[1] for pair in pairs], tol, compared)
     for name, pairs in (("flat_variation_collocation", flat),
      ("amended_variation_collocation", amended), ("hyperbolic_variation_collocation", hyperbolic))]


def solvability_report(sol):
    """solve_flat_variation must reject c0 != 0 and accept c0 = 0."""

    outcomes = []
    for c0 in (0.0, 0.1):
        shifted = FourierSolution(sol.ell, sol.s, c0, sol.d0, sol.c, sol.d)
        try:
            solve_flat_variation(neumann_trace_flat(shifted, "left"), 0.0)
            outcomes.append(c0 == 0)
        except NoPeriodicSolutionError:
            outcomes.append(c0 != 0)
    correct = sum(outcomes)
    return make_report("solvability_constraint", correct, len(outcomes), 0.0,
     [("accepted c0 = 0", outcomes[0]), ("rejected c0 = 0.1", outcomes[1])])


def nonpositivity_report(config, tol=SOLVER_TOLERANCE):
    terms = master_terms(config)[:3]
    largest = max(value for label, value in terms)
    return make_report("master_identity_nonpositivity", largest, 0.0, tol, terms,
     abs_err=max(0.0, largest))


def greens_report(config, tol=SOLVER_TOLERANCE):
    balance = greens_residual(_strips(config))
    return make_report("greens_identity", balance.interior + balance.energy, balance.seam + balance.outer,
     tol, [("interior", balance.interior), ("energy", balance.energy), ("seam", balance.seam),
      ("outer boundary", balance.outer)])


def run_suite(chart, modes=32, seed=0, tol=ALGEBRAIC_TOLERANCE, bvp_tol=SOLVER_TOLERANCE,
 nodes=DEFAULT_NODES, points=QUADRATURE_POINTS, workers=None):
    """The verification suite behind the verify command. Every randomised
    input is drawn from one seeded generator."""

    rng = np.random.default_rng(seed)
    sol = FourierSolution.random(chart.ell, chart.s, rng, modes)
    q = QuadDiffModes.random(chart.ell, chart.s, rng, min(modes, 8))
    s_rate = 0.0
    logger.info("Running the verification suite on %r with %i modes (seed %i)", chart, modes, seed)
    config = build_configuration(chart, sol, nodes=nodes, workers=workers)
    amended = build_configuration(chart, sol, q, s_rate, solve_strips=False)
    amended = Configuration(chart, sol, amended.v_left, amended.v_right, q, s_rate, config.strips)
    reports = []

    reports.append(make_report("boundary_term_oracle", boundary_term_closed(sol, config.v_left, config.v_right),
     unamended_boundary_quadrature(sol, config.v_left, config.v_right, points), tol))
    reports.append(make_report("extended_boundary_term_oracle",
     extended_boundary_term(sol, q, amended.v_left, amended.v_right),
      extended_boundary_quadrature(sol, q, amended.v_left, amended.v_right, points), tol))
    reports += variation_collocation_reports(sol, q, tol)
    reports.append(solvability_report(sol))
    reports.append(slice_condition(sol, config.v_left, config.v_right, s_rate, max(tol, 1e-12)))
    reports.append(make_report("area_two_methods", area_derivative_geometric(sol, s_rate),
     area_derivative_analytic(sol, config.v_left, config.v_right), tol))

    family = ConformalFamily(chart, sol)
    reports.append(make_report("arc_length_finite_difference", family.length_derivative(0.0, 1e-5),
     -0.5 * sol.d0 * sol.ell, max(tol, 1e-4)))
    reports.append(make_report("arc_length_hopf_correction", arc_length_derivative(sol, q, points=points),
     -0.5 * sol.d0 * sol.ell + sol.ell * q.r0, tol))

    reports.append(master_identity(consistent_configuration(chart, min(modes, 8), nodes=nodes,
     workers=workers), bvp_tol))
    reports.append(nonpositivity_report(config, bvp_tol))
    reports.append(vanishing_report(chart, modes))
    reports.append(greens_report(config, bvp_tol))
    reports.append(area_flux_identity(consistent_configuration(chart, min(modes, 8), FLUX_S_RATE,
     nodes=nodes, workers=workers), bvp_tol))

    plain = extended_master_identity(Configuration(chart, sol, config.v_left, config.v_right, None,
     s_rate, config.strips), bvp_tol)
    master_total = master_identity(config, bvp_tol).term("total")
    reports.append(make_report("extended_reduction", plain.term("total"), master_total, tol))
    reports.append(extended_master_identity(amended, tol))
    if chart.s > 0:
        reports.append(extended_scaling_exponent(sol, q))

    reports.append(make_report("conformal_modulus_quadrature", chart.conformal_modulus(),
     chart.modulus_by_quadrature(), tol))
    reports.append(make_report("total_area_quadrature", chart.total_area(), chart.area_by_quadrature(), tol))
    discrepancy = max(solution.discrepancy for strip in config.strips for solution in strip.solutions)
    reports.append(make_report("hyperbolic_cross_method", discrepancy, 0.0, max(tol, CROSS_TOLERANCE),
     [("max discrepancy", discrepancy)], abs_err=discrepancy))
    smooth = FourierSolution(sol.ell, sol.s, 0.0, sol.d0, sol.c[:4], sol.d[:4])
    if chart.s >= 4 * chart.ell / 256:
        residual = harmonicity_residual(smooth, stencil="nine")
        reports.append(make_report("harmonicity", residual, 0.0, max(tol, 1e-6), abs_err=residual))
    return reports
