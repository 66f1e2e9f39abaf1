"""The model grafted surface: a flat cylinder of height s and circumference
ell glued along its two boundary circles to hyperbolic Fermi strips of
half-width a. In coordinates (x, y) the metric is dx^2 + G(x)^2 dy^2 with
y periodic of period ell."""

from collections import namedtuple
from dataclasses import dataclass, field
import json
import logging
import math
import numpy as np
from scipy.integrate import simpson
from .exceptions import *

logger = logging.getLogger(__name__)

OUTER_CONDITIONS = ("dirichlet", "neumann")
SEAM_TOLERANCE = 1e-12

MetricCoefficient = namedtuple("MetricCoefficient", ["G", "dG", "d2G"])

def gudermannian(a):
    return math.atan(math.sinh(a))


def grafted_length(ell, s):
    """The length of the weighted curve s.gamma, which is just ell * s."""

    if ell <= 0:
        raise ChartError("Geodesic length must be positive, not %s" % ell)
    if s < 0:
        raise ChartError("Graft height cannot be negative (%s)" % s)
    return ell * s


def circumference_factor(x, s):
    """Vectorised G(x): 1 on the flat stratum, cosh(|x| - s/2) beyond it."""

    u = np.maximum(np.abs(np.asarray(x, dtype=float)) - s / 2, 0.0)
    return np.cosh(u)


def circumference_factor_dx(x, s):
    x = np.asarray(x, dtype=float)
    u = np.maximum(np.abs(x) - s / 2, 0.0)
    return np.sign(x) * np.sinh(u)



@dataclass(frozen=True)
class GraftedCollar:
    """A grafted collar. x runs from -(s/2 + a) to s/2 + a, the seams sit at
    x = -s/2 (left) and x = +s/2 (right), y is circumferential."""

    ell: float
    s: float
    a: float
    outer_bc: str = "dirichlet"

    def __post_init__(self):
        if not self.ell > 0:
            raise ChartError("Geodesic length ell must be positive, not %s" % self.ell)
        if not self.s >= 0:
            raise ChartError("Graft height s cannot be negative (%s)" % self.s)
        if not self.a >= 0:
            raise ChartError("Strip half-width a cannot be negative (%s)" % self.a)
        if self.outer_bc not in OUTER_CONDITIONS:
            raise ChartError("%s is not a valid outer boundary condition" % self.outer_bc)


    def __repr__(self):
        return "<GraftedCollar ell=%g s=%g a=%g>" % (self.ell, self.s, self.a)


    @property
    def x_max(self):
        return self.s / 2 + self.a


    @property
    def seams(self):
        return (-self.s / 2, self.s / 2)


    def seam_position(self, side):
        if side == "left":
            return -self.s / 2
        if side == "right":
            return self.s / 2
        raise ChartError("%s is not a seam (use 'left' or 'right')" % side)


    def check_domain(self, x):
        if abs(x) > self.x_max * (1 + SEAM_TOLERANCE) + SEAM_TOLERANCE:
            raise ChartError("x = %s lies outside the collar |x| <= %s" % (x, self.x_max))


    def on_seam(self, x):
        return min(abs(x - seam) for seam in self.seams) <= SEAM_TOLERANCE * max(1, self.s)


    def stratum(self, x):
        """Which open stratum x lies in: 'flat', 'left', 'right', or 'seam'."""

        self.check_domain(x)
        if self.on_seam(x):
            return "seam"
        if abs(x) < self.s / 2:
            return "flat"
        return "left" if x < 0 else "right"


    def _stratum_values(self, stratum, x):
        if stratum == "flat":
            return (1.0, 0.0, 0.0)
        u = (x - self.s / 2) if stratum == "right" else (-x - self.s / 2)
        u = max(u, 0.0)
        sign = 1.0 if stratum == "right" else -1.0
        return (math.cosh(u), sign * math.sinh(u), math.cosh(u))


    def one_sided(self, x):
        """The (G, G', G'') values approached from below and from above x.
        Away from the seams both are the same."""

        self.check_domain(x)
        if self.on_seam(x):
            if self.s == 0:
                below, above = "left", "right"
            elif x < 0:
                below, above = "left", "flat"
            else:
                below, above = "flat", "right"
        else:
            below = above = "flat" if abs(x) < self.s / 2 else ("left" if x < 0 else "right")
        return self._stratum_values(below, x), self._stratum_values(above, x)


    def metric_coefficient(self, x):
        """Returns G, G' and the pair of one-sided G'' values at x."""

        below, above = self.one_sided(x)
        return MetricCoefficient(below[0], below[1], (below[2], above[2]))


    def seam_jumps(self):
        """Largest one-sided jump of G, G' and G'' over both seams."""

        jumps = np.zeros(3)
        for seam in self.seams:
            below, above = self.one_sided(seam)
            jumps = np.maximum(jumps, np.abs(np.subtract(above, below)))
        return {"G": jumps[0], "dG": jumps[1], "d2G": jumps[2]}


    def gauss_curvature(self, x):
        """K = -G''/G on an open stratum. Seams carry the curvature jump and
        have no pointwise value."""

        if self.stratum(x) == "seam":
            raise SeamError("seam: curvature discontinuous at x = %s" % x)
        G, dG, d2G = self.metric_coefficient(x)
        return -d2G[0] / G


    def christoffel(self, x):
        """Non-zero Christoffel symbols of dx^2 + G^2 dy^2."""

        G, dG, d2G = self.metric_coefficient(x)
        return {"x_yy": -G * dG, "y_xy": dG / G}


    def total_area(self):
        return 2 * self.ell * math.sinh(self.a) + self.ell * self.s


    def _stratum_quadrature(self, integrand, panels):
        panels = max(2, panels + panels % 2)
        total = 0.0
        for start, stop in ((-self.x_max, -self.s / 2), (-self.s / 2, self.s / 2), (self.s / 2, self.x_max)):
            if stop > start:
                x = np.linspace(start, stop, panels + 1)
                total += simpson(integrand(x), x=x)
        logger.debug("Stratum quadrature of %r with %i panels: %.15g", self, panels, total)
        return total


    def area_by_quadrature(self, panels=10000):
        """Composite Simpson quadrature of ell * integral of G dx, stratum by stratum."""

        return self.ell * self._stratum_quadrature(lambda x: circumference_factor(x, self.s), panels)


    def conformal_modulus(self):
        """Conformal modulus (1/ell) * integral dx/G = (2 gd(a) + s) / ell."""

        return (2 * gudermannian(self.a) + self.s) / self.ell


    def modulus_by_quadrature(self, panels=10000):
        integral = self._stratum_quadrature(lambda x: 1 / circumference_factor(x, self.s), panels)
        return integral / self.ell


    def replace(self, **kwargs):
        values = self.to_dict()
        values.update(kwargs)
        return GraftedCollar(**values)


    def to_dict(self):
        return {"ell": self.ell, "s": self.s, "a": self.a, "outer_bc": self.outer_bc}


    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


    @staticmethod
    def from_json(text):
        try:
            values = json.loads(text)
            return GraftedCollar(float(values["ell"]), float(values["s"]),
             float(values["a"]), values.get("outer_bc", "dirichlet"))
        except (ValueError, KeyError, TypeError) as e:
            raise ChartError("Could not read chart JSON: %s" % e)



@dataclass(frozen=True)
class ConformalFamily:
    """The family gr(sigma_0)/H_t with H_t = 1 + t * hdot, optionally perturbed
    at first order by the quadratic differential quad. hdot is any field
    with an evaluate(x, y) method."""

    base: GraftedCollar
    hdot: object
    quad: object = None
    s_rate: float = 0.0
    t_eval: tuple = field(default=(1e-5,))

    def conformal_factor(self, t, x, y):
        H = 1 + t * np.asarray(self.hdot.evaluate(x, y), dtype=float)
        if np.any(H <= 0):
            raise ChartError("H_t = 1 + t*hdot is not positive at t = %s" % t)
        return H


    def family_metric(self, t, x, y):
        """Metric tensor at (x, y) in (x, y) order."""

        perturbed = self.quad is not None and t != 0
        if perturbed and abs(x) > self.base.s / 2 * (1 + SEAM_TOLERANCE) + SEAM_TOLERANCE:
            raise ChartError("Quadratic differential data only lives on the flat stratum (x = %s)" % x)
        G = self.base.metric_coefficient(x).G
        H = float(self.conformal_factor(t, x, y))
        metric = np.array([[1.0, 0.0], [0.0, G * G]]) / H
        if perturbed:
            re, im = float(self.quad.re_phi(x, y)), float(self.quad.im_phi(x, y))
            metric = metric + t * np.array([[-2 * re, 2 * im], [2 * im, 2 * re]])
        return metric


    def circle_length(self, x0, t, points=512):
        """Length of the circle x = x0 in the t-metric."""

        y = np.arange(points) * self.base.ell / points
        G = float(circumference_factor(x0, self.base.s))
        g_yy = G * G / self.conformal_factor(t, x0, y)
        if self.quad is not None and t != 0:
            g_yy = g_yy + 2 * t * np.asarray(self.quad.re_phi(x0, y))
        return self.base.ell * np.mean(np.sqrt(g_yy))


    def length_derivative(self, x0=0.0, step=None, points=512):
        """d/dt of circle_length at t = 0 by centred differences with one
        Richardson extrapolation."""

        h = self.t_eval[0] if step is None else step
        def centred(h):
            return (self.circle_length(x0, h, points) - self.circle_length(x0, -h, points)) / (2 * h)
        return (4 * centred(h / 2) - centred(h)) / 3



def family_metric(fam, t, x, y):
    return fam.family_metric(t, x, y)


def laplace_beltrami(chart, f, x, y, h=1e-3):
    """Finite-difference Laplace-Beltrami operator of the base metric applied
    to f(x, y), (1/G) d/dx(G f_x) + f_yy / G^2."""

    G = lambda u: float(circumference_factor(u, chart.s))
    fx_plus = G(x + h / 2) * (f(x + h, y) - f(x, y))
    fx_minus = G(x - h / 2) * (f(x, y) - f(x - h, y))
    fyy = f(x, y + h) - 2 * f(x, y) + f(x, y - h)
    return (fx_plus - fx_minus) / (G(x) * h * h) + fyy / (G(x) ** 2 * h * h)


def conformal_curvature(chart, H, x, y, h=1e-3):
    """Gaussian curvature of gr(sigma_0)/H at (x, y) from the Brioschi
    formula for an orthogonal metric E dx^2 + F dy^2, by nested centred
    differences."""

    E = lambda u, v: 1 / H(u, v)
    F = lambda u, v: float(circumference_factor(u, chart.s)) ** 2 / H(u, v)
    root = lambda u, v: math.sqrt(E(u, v) * F(u, v))
    def x_flux(u, v):
        return (F(u + h, v) - F(u - h, v)) / (2 * h) / root(u, v)
    def y_flux(u, v):
        return (E(u, v + h) - E(u, v - h)) / (2 * h) / root(u, v)
    divergence = (x_flux(x + h, y) - x_flux(x - h, y)) / (2 * h) + (y_flux(x, y + h) - y_flux(x, y - h)) / (2 * h)
    return -divergence / (2 * root(x, y))


def predicted_curvature(chart, H, x, y, h=1e-3):
    """H (K_0 + 1/2 Laplacian of log H), the curvature of gr(sigma_0)/H."""

    log_H = lambda u, v: math.log(H(u, v))
    return H(x, y) * (chart.gauss_curvature(x) + 0.5 * laplace_beltrami(chart, log_H, x, y, h))
