"""Normal variation of the seam geodesics.

On a seam the displacement V of the closed geodesic under gr(sigma_0)/H_t
solves V_yy + K V = -1/2 dH/dx, with K = 0 seen from the flat cylinder and
K = -1 seen from a hyperbolic strip. V is measured positive towards +x on
both seams."""

from dataclasses import dataclass
import logging
import numpy as np
from .exceptions import *
from .spectral import (FourierSolution, TraceModes, NEUMANN_FLAT, NEUMANN_HYPERBOLIC,
 dirichlet_trace, mode_sum, side_sign, wavenumbers)

logger = logging.getLogger(__name__)

SOLVABILITY_TOLERANCE = 1e-12
NEWTON_TOLERANCE = 1e-12
NEWTON_ITERATIONS = 30

class VariationField:
    """V(y) = mean + 2 Re sum modes_n e^{iky} on one seam."""

    def __init__(self, side, mean, modes, ell, amended=False):
        side_sign(side)
        self.side, self.ell, self.amended = side, float(ell), bool(amended)
        self.mean = float(mean)
        self.modes = np.array(modes, dtype=complex).ravel()
        self.modes.setflags(write=False)


    def __repr__(self):
        return "<%s%s VariationField (%i modes)>" % (
         "Amended " if self.amended else "", self.side.capitalize(), self.N)


    @property
    def N(self):
        return len(self.modes)


    @property
    def k(self):
        return wavenumbers(self.ell, self.N)


    def evaluate(self, y, derivative=0):
        mean = self.mean if derivative == 0 else 0.0
        return mean + mode_sum(self.modes, self.k, y, derivative)


    def shifted(self, y0):
        return VariationField(self.side, self.mean, self.modes * np.exp(-1j * self.k * y0),
         self.ell, self.amended)


    def residual(self, forcing, curvature):
        """Largest per-mode residual of V_yy + K V = forcing, forcing being a
        TraceModes (or anything with mean and modes)."""

        mean = abs(curvature * self.mean - forcing.mean)
        modes = np.abs((curvature - self.k ** 2) * self.modes - forcing.modes)
        return max([mean] + list(modes))



class QuadDiffModes:
    """Mode data of Im phi, the harmonic imaginary part of the infinitesimal
    Hopf differential on the flat stratum:

        Im phi = u0 x + v0 + sum' (u_n cosh(kx) + v_n sinh(kx)) e^{iky}

    with the same conjugation rule as the conformal factor. Re phi is
    recovered by Cauchy-Riemann up to the real constant r0."""

    def __init__(self, ell, s, u0=0.0, v0=0.0, u=(), v=(), r0=0.0):
        self.imaginary = FourierSolution(ell, s, u0, v0, u, v)
        self.r0 = float(r0)


    def __repr__(self):
        return "<QuadDiffModes (%i modes)>" % self.N


    @property
    def ell(self):
        return self.imaginary.ell


    @property
    def s(self):
        return self.imaginary.s


    @property
    def N(self):
        return self.imaginary.N


    @property
    def u0(self):
        return self.imaginary.c0


    @property
    def v0(self):
        return self.imaginary.d0


    @property
    def u(self):
        return self.imaginary.c


    @property
    def v(self):
        return self.imaginary.d


    @property
    def norm(self):
        return float(np.sqrt(self.u0 ** 2 + self.v0 ** 2 + self.r0 ** 2 +
         2 * np.sum(np.abs(self.u) ** 2 + np.abs(self.v) ** 2)))


    def im_phi(self, x, y):
        return self.imaginary.evaluate(x, y)


    def re_phi(self, x, y):
        """Re phi = r0 - u0 (y - ell/2) + sum' i (u_n sinh(kx) + v_n cosh(kx)) e^{iky}.
        The u0 term is not periodic; its branch cut sits at y = 0."""

        self.imaginary._check_domain(np.asarray(x, dtype=float))
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        y_wrapped = np.mod(y, self.ell)
        value = self.r0 - self.u0 * (y_wrapped - self.ell / 2)
        if self.N:
            k = self.imaginary.k
            kx = np.multiply.outer(x, k)
            amplitudes = 1j * (self.u * np.sinh(kx) + self.v * np.cosh(kx))
            phases = np.exp(1j * np.multiply.outer(y, k))
            value = value + 2 * np.real(np.sum(amplitudes * phases, axis=-1))
        return value[()] if np.ndim(value) == 0 else value


    def seam_trace(self, side):
        """Im phi restricted to a seam."""

        return dirichlet_trace(self.imaginary, side)


    def scaled(self, factor):
        return QuadDiffModes(self.ell, self.s, self.u0 * factor, self.v0 * factor,
         self.u * factor, self.v * factor, self.r0 * factor)


    @staticmethod
    def zero(ell, s, modes=0):
        return QuadDiffModes(ell, s, u=np.zeros(modes), v=np.zeros(modes))


    @staticmethod
    def random(ell, s, rng, modes=8, scale=1.0, u0=0.0):
        damping = 1 / np.cosh(np.pi * np.arange(1, modes + 1) * s / ell)
        u = (rng.normal(size=modes) + 1j * rng.normal(size=modes)) * damping * scale
        v = (rng.normal(size=modes) + 1j * rng.normal(size=modes)) * damping * scale
        return QuadDiffModes(ell, s, u0, rng.normal() * scale, u, v, rng.normal() * scale)



def _check_flat_neumann(flat_neumann, tol):
    if flat_neumann.kind != NEUMANN_FLAT:
        raise VariationError("Expected flat-side Neumann data, got %s" % flat_neumann.kind)
    if abs(flat_neumann.mean) > tol:
        raise NoPeriodicSolutionError(
         "no periodic solution: the mean of the flat Neumann data is %s, not 0" % flat_neumann.mean)


def solve_flat_variation(flat_neumann, mean_value, tol=SOLVABILITY_TOLERANCE):
    """Solves V_yy = -1/2 (dH/dx)_0 mode by mode. The mean of V is free and
    set to mean_value; the equation is only solvable if c0 vanishes."""

    _check_flat_neumann(flat_neumann, tol)
    k = flat_neumann.k
    modes = flat_neumann.modes / (2 * k ** 2)
    return VariationField(flat_neumann.side, mean_value, modes, flat_neumann.ell)


def hyperbolic_neumann(v):
    """The hyperbolic-side Neumann data -2(V_yy - V)."""

    if v.amended:
        raise VariationError("hyperbolic_neumann takes an unamended field; use extended_hyperbolic_neumann")
    return TraceModes(v.side, NEUMANN_HYPERBOLIC, 2 * v.mean, 2 * (v.k ** 2 + 1) * v.modes, v.ell)


def solve_hyperbolic_variation(neumann):
    """Solves V_yy - V = -1/2 (dH/dx)_-1, which has a unique periodic solution."""

    k = neumann.k
    return VariationField(neumann.side, neumann.mean / 2, neumann.modes / (2 * (k ** 2 + 1)), neumann.ell)


def _seam_modes(q, side, count):
    """The first `count` modes U_n of Im phi on a seam."""

    trace = q.seam_trace(side)
    U = np.zeros(count, dtype=complex)
    U[:min(count, trace.N)] = trace.modes[:count]
    return U


def _amendment(q, side, count, ell):
    n = np.arange(1, count + 1)
    return ell / (2j * np.pi * n) * _seam_modes(q, side, count)


def solve_amended_variation(flat_neumann, q, mean_value, tol=SOLVABILITY_TOLERANCE):
    """Solves W_yy = -1/2 (dH/dx)_0 + d/dy Im phi on the seam. The y-derivative
    term has zero mean, so solvability is again c0 = 0."""

    _check_flat_neumann(flat_neumann, tol)
    count = max(flat_neumann.N, q.N)
    k = wavenumbers(flat_neumann.ell, count)
    modes = np.zeros(count, dtype=complex)
    modes[:flat_neumann.N] = flat_neumann.modes
    modes = modes / (2 * k ** 2) + _amendment(q, flat_neumann.side, count, flat_neumann.ell)
    return VariationField(flat_neumann.side, mean_value, modes, flat_neumann.ell, amended=True)


def extended_hyperbolic_neumann(w, q):
    """Hyperbolic-side Neumann data of an amended field: the unamended part
    (4 pi^2 n^2 + ell^2)/(2 pi n ell) (-+ c sinh + d cosh) plus the Hopf
    correction (4 pi^2 n^2 + ell^2)/(pi i n ell) U_n. Together they equal
    -2(W_yy - W)."""

    count = max(w.N, q.N)
    n = np.arange(1, count + 1)
    scale = 4 * np.pi ** 2 * n ** 2 + w.ell ** 2
    starred = np.zeros(count, dtype=complex)
    starred[:w.N] = w.modes
    U = _seam_modes(q, w.side, count)
    unamended = starred - w.ell / (2j * np.pi * n) * U
    base = 2 * scale / w.ell ** 2 * unamended
    hopf = scale / (1j * np.pi * n * w.ell) * U
    return TraceModes(w.side, NEUMANN_HYPERBOLIC, 2 * w.mean, base + hopf, w.ell)


def spectral_second_derivative(points, ell):
    """Dense Fourier collocation matrix for d^2/dy^2 on an even periodic grid."""

    k = 2 * np.pi * np.fft.fftfreq(points, d=ell / points)
    identity = np.eye(points)
    return np.real(np.fft.ifft(-(k ** 2)[:, None] * np.fft.fft(identity, axis=0), axis=0))


def collocation_solve(forcing, curvature, ell, side, points=64, mean_value=0.0, modes=None, amended=False):
    """Periodic Fourier-collocation solve of V_yy + K V = forcing(y) in
    physical space. With K = 0 the system is bordered by the constraint
    mean(V) = mean_value. Returns the field's first `modes` coefficients."""

    y = np.arange(points) * ell / points
    f = np.asarray(forcing(y), dtype=float)
    operator = spectral_second_derivative(points, ell) + curvature * np.eye(points)
    if curvature == 0:
        bordered = np.zeros((points + 1, points + 1))
        bordered[:points, :points] = operator
        bordered[:points, points] = 1.0
        bordered[points, :points] = 1.0 / points
        rhs = np.append(f, mean_value)
        V = np.linalg.solve(bordered, rhs)[:points]
    else:
        V = np.linalg.solve(operator, f)
    coefficients = np.fft.fft(V) / points
    modes = points // 2 - 1 if modes is None else modes
    return VariationField(side, coefficients[0].real, coefficients[1:modes + 1], ell, amended)


@dataclass(frozen=True, eq=False)
class GeodesicDisplacement:
    """Result of the perturbed-geodesic oracle on one seam."""

    side: str
    t: float
    fd_step: float
    y: np.ndarray
    raw: np.ndarray
    derivative: np.ndarray
    iterations: int

    def compare(self, v):
        """Mode-wise errors of the raw and extrapolated displacement against
        a closed-form field, relative to sup |V| (absolute when V = 0)."""

        closed = v.evaluate(self.y)
        sup = float(np.max(np.abs(closed)))
        scale = sup if sup > 0 else 1.0
        count = len(self.y)
        def mode_errors(samples):
            return np.abs(np.fft.rfft(samples - closed)) / count / scale
        return {
         "relative": sup > 0, "scale": scale,
         "raw_mode_errors": mode_errors(self.raw), "mode_errors": mode_errors(self.derivative),
         "raw_max_error": float(np.max(np.abs(self.raw - closed)) / scale),
         "max_error": float(np.max(np.abs(self.derivative - closed)) / scale)
        }



def _geodesic_problem(fam, side, regime):
    """The seam position, field callables and circumference factor of a regime."""

    x_seam = fam.base.seam_position(side)
    if regime == "hyperbolic":
        value, dx = fam.hdot.side_field(side)
        G = lambda x: np.cosh(x - x_seam)
        dG = lambda x: np.sinh(x - x_seam)
    elif regime == "flat":
        solution = getattr(fam.hdot, "solution", fam.hdot)
        value = lambda x, y: solution.evaluate(x, y, extend=True)
        dx = lambda x, y: solution.evaluate_dx(x, y, extend=True)
        G = lambda x: np.ones_like(x)
        dG = lambda x: np.zeros_like(x)
    else:
        raise VariationError("%s is not a geodesic regime" % regime)
    return x_seam, value, dx, G, dG


def _geodesic_residual(Z, x_seam, y, t, k, value, dx, G, dG):
    """Euler-Lagrange residual for the length of x = x_seam + Z(y) in the
    metric W (dx^2 + G^2 dy^2), W = 1/(1 + t H)."""

    X = x_seam + Z
    dZ = np.real(np.fft.ifft(1j * k * np.fft.fft(Z)))
    H = 1 + t * value(X, y)
    W = 1 / H
    W_x = -t * dx(X, y) / H ** 2
    g, dg = G(X), dG(X)
    Q = dZ ** 2 + g ** 2
    flux = np.sqrt(W / Q) * dZ
    d_flux = np.real(np.fft.ifft(1j * k * np.fft.fft(flux)))
    return d_flux - (W_x * Q + 2 * W * g * dg) / (2 * np.sqrt(W * Q))


def _solve_closed_geodesic(fam, side, t, points, regime, pin):
    """Newton iteration with a finite-difference Jacobian. Returns the
    displacement Z(y) and the iteration count."""

    ell = fam.base.ell
    y = np.arange(points) * ell / points
    k = 2 * np.pi * np.fft.fftfreq(points, d=ell / points)
    x_seam, value, dx, G, dG = _geodesic_problem(fam, side, regime)
    Z = np.zeros(points)
    if t == 0:
        return Z, 0

    def equations(Z):
        R = _geodesic_residual(Z, x_seam, y, t, k, value, dx, G, dG)
        if regime == "flat":
            #Mean force projected out, mean displacement pinned
            R = R - np.mean(R) + (np.mean(Z) - t * pin)
        return R

    for iteration in range(NEWTON_ITERATIONS):
        R = equations(Z)
        if np.max(np.abs(R)) < NEWTON_TOLERANCE:
            logger.debug("Closed geodesic on %s seam converged after %i iterations", side, iteration)
            return Z, iteration
        delta = 1e-7
        jacobian = np.empty((points, points))
        for column in range(points):
            shifted = Z.copy()
            shifted[column] += delta
            jacobian[:, column] = (equations(shifted) - R) / delta
        try:
            step = np.linalg.solve(jacobian, -R)
        except np.linalg.LinAlgError:
            raise ConvergenceError("Singular Jacobian for the %s seam geodesic at t = %s" % (side, t))
        Z = Z + step
        if np.max(np.abs(step)) < 1e-15 * max(1.0, abs(x_seam)):
            return Z, iteration + 1
    raise ConvergenceError("Newton iteration for the %s seam geodesic did not converge at t = %s" % (side, t))


def geodesic_oracle(fam, side, t, fd_step=1e-4, points=256, regime="hyperbolic"):
    """Finds the closed geodesic of the t-metric homotopic to a seam circle
    by Newton iteration on the periodic geodesic equation.

    The 'hyperbolic' regime uses the strip metric and the strip-side field
    continued through the seam. 'flat' uses the cylinder metric and the
    analytically continued Fourier field; there the mean displacement is
    pinned to half the hyperbolic Neumann mean. Returns displacement / t
    and the centred, Richardson-extrapolated t-derivative with step fd_step."""

    pin = 0.0
    if regime == "flat":
        neumann = getattr(fam.hdot, "neumann", None)
        pin = neumann[side].mean / 2 if neumann is not None else 0.0
    raw, iterations = _solve_closed_geodesic(fam, side, t, points, regime, pin)
    if t != 0:
        raw = raw / t
    def centred(h):
        plus = _solve_closed_geodesic(fam, side, h, points, regime, pin)[0]
        minus = _solve_closed_geodesic(fam, side, -h, points, regime, pin)[0]
        return (plus - minus) / (2 * h)
    derivative = (4 * centred(fd_step / 2) - centred(fd_step)) / 3
    y = np.arange(points) * fam.base.ell / points
    return GeodesicDisplacement(side, t, fd_step, y, raw, derivative, iterations)
