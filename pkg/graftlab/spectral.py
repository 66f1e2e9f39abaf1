"""Fourier-mode solutions of the flat Laplace equation on the cylinder
-s/2 <= x <= s/2, 0 <= y < ell.

Only modes n >= 1 are stored. Negative modes are implied by
c_{-n} = conj(c_n) and d_{-n} = -conj(d_n), which makes every field real."""

import json
import logging
import numpy as np
from .exceptions import *

logger = logging.getLogger(__name__)

DIRICHLET = "dirichlet"
NEUMANN_FLAT = "neumann-flat"
NEUMANN_HYPERBOLIC = "neumann-hyperbolic"
TRACE_KINDS = (DIRICHLET, NEUMANN_FLAT, NEUMANN_HYPERBOLIC)
SIDES = ("left", "right")
DEFAULT_MODES = 32

def side_sign(side):
    """-1 on the left seam x = -s/2, +1 on the right seam x = +s/2."""

    if side == "left":
        return -1.0
    if side == "right":
        return 1.0
    raise SpectralError("%s is not a valid side" % side)


def wavenumbers(ell, count):
    return 2 * np.pi * np.arange(1, count + 1) / ell


def _pad(values, count):
    padded = np.zeros(count, dtype=complex)
    values = np.asarray(values, dtype=complex).ravel()
    padded[:len(values)] = values
    return padded


def mode_sum(coefficients, k, y, derivative=0):
    """2 Re sum_n coefficients_n (ik)^derivative e^{iky}, vectorised over y."""

    y = np.asarray(y, dtype=float)
    if not len(coefficients):
        return np.zeros_like(y)
    phases = np.exp(1j * np.multiply.outer(y, k))
    return 2 * np.real(phases @ (coefficients * (1j * k) ** derivative))



class FourierSolution:
    """H(x, y) = c0 x + d0 + sum' (c_n cosh(kx) + d_n sinh(kx)) e^{iky}, k = 2 pi n / ell."""

    def __init__(self, ell, s, c0=0.0, d0=0.0, c=(), d=()):
        if ell <= 0:
            raise SpectralError("ell must be positive, not %s" % ell)
        if s < 0:
            raise SpectralError("s cannot be negative (%s)" % s)
        self.ell, self.s = float(ell), float(s)
        self.c0, self.d0 = float(c0), float(d0)
        count = max(np.size(c), np.size(d))
        self.c, self.d = _pad(c, count), _pad(d, count)
        self.c.setflags(write=False)
        self.d.setflags(write=False)


    def __repr__(self):
        return "<FourierSolution (%i modes)>" % self.N


    def __eq__(self, other):
        return (isinstance(other, FourierSolution) and self.to_dict() == other.to_dict())


    @property
    def N(self):
        return len(self.c)


    @property
    def k(self):
        return wavenumbers(self.ell, self.N)


    @property
    def modes(self):
        return {n: (self.c[n - 1], self.d[n - 1]) for n in range(1, self.N + 1)}


    def _check_domain(self, x):
        if np.any(np.abs(x) > self.s / 2 * (1 + 1e-12) + 1e-14):
            raise SpectralError("out of domain: |x| must not exceed s/2 = %s" % (self.s / 2))


    def evaluate(self, x, y, extend=False):
        """The real value of the field at (x, y). With extend=True the series
        is continued analytically beyond the flat stratum."""

        x = np.asarray(x, dtype=float)
        if not extend:
            self._check_domain(x)
        x, y = np.broadcast_arrays(x, np.asarray(y, dtype=float))
        value = self.c0 * x + self.d0
        if self.N:
            kx = np.multiply.outer(x, self.k)
            amplitudes = self.c * np.cosh(kx) + self.d * np.sinh(kx)
            phases = np.exp(1j * np.multiply.outer(y, self.k))
            value = value + 2 * np.real(np.sum(amplitudes * phases, axis=-1))
        return value[()] if np.ndim(value) == 0 else value


    def evaluate_dx(self, x, y, extend=False):
        x = np.asarray(x, dtype=float)
        if not extend:
            self._check_domain(x)
        x, y = np.broadcast_arrays(x, np.asarray(y, dtype=float))
        value = self.c0 + np.zeros_like(x)
        if self.N:
            kx = np.multiply.outer(x, self.k)
            amplitudes = self.k * (self.c * np.sinh(kx) + self.d * np.cosh(kx))
            phases = np.exp(1j * np.multiply.outer(y, self.k))
            value = value + 2 * np.real(np.sum(amplitudes * phases, axis=-1))
        return value[()] if np.ndim(value) == 0 else value


    def evaluate_paired(self, x, y):
        """Sums the n and -n terms separately and returns the complex total,
        whose imaginary part measures the failure of reality."""

        self._check_domain(x)
        total = complex(self.c0 * x + self.d0)
        for n, (c, d) in self.modes.items():
            for sign in (1, -1):
                k = sign * 2 * np.pi * n / self.ell
                cn, dn = (c, d) if sign == 1 else (np.conj(c), -np.conj(d))
                total += (cn * np.cosh(k * x) + dn * np.sinh(k * x)) * np.exp(1j * k * y)
        return total


    def scaled(self, factor):
        return FourierSolution(self.ell, self.s, self.c0 * factor, self.d0 * factor,
         self.c * factor, self.d * factor)


    def to_dict(self):
        return {"ell": self.ell, "s": self.s, "c0": self.c0, "d0": self.d0, "modes": [{
         "n": n, "c_re": float(c.real), "c_im": float(c.imag),
          "d_re": float(d.real), "d_im": float(d.imag)
        } for n, (c, d) in self.modes.items()]}


    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


    @staticmethod
    def from_dict(values):
        try:
            modes = sorted(values.get("modes", []), key=lambda m: m["n"])
            count = max([m["n"] for m in modes], default=0)
            c, d = np.zeros(count, dtype=complex), np.zeros(count, dtype=complex)
            for mode in modes:
                if mode["n"] < 1:
                    raise SpectralError("Mode indices start at 1, not %s" % mode["n"])
                c[mode["n"] - 1] = complex(mode["c_re"], mode["c_im"])
                d[mode["n"] - 1] = complex(mode["d_re"], mode["d_im"])
            return FourierSolution(values["ell"], values["s"], values.get("c0", 0.0),
             values.get("d0", 0.0), c, d)
        except (KeyError, TypeError, ValueError) as e:
            raise SpectralError("Could not read Fourier solution: %s" % e)


    @staticmethod
    def from_json(text):
        try:
            values = json.loads(text)
        except ValueError as e:
            raise SpectralError("Could not read Fourier solution: %s" % e)
        return FourierSolution.from_dict(values)


    @staticmethod
    def random(ell, s, rng, modes=DEFAULT_MODES, c0=0.0, scale=1.0):
        """A seeded test field. Coefficients are damped by 1/cosh(pi n s/ell)
        so the seam traces stay of order one for every n."""

        damping = 1 / np.cosh(np.pi * np.arange(1, modes + 1) * s / ell)
        c = (rng.normal(size=modes) + 1j * rng.normal(size=modes)) * damping * scale
        d = (rng.normal(size=modes) + 1j * rng.normal(size=modes)) * damping * scale
        return FourierSolution(ell, s, c0, rng.normal() * scale, c, d)



class TraceModes:
    """A real periodic function on a seam circle, mean + 2 Re sum coef_n e^{iky}."""

    def __init__(self, side, kind, mean, modes, ell):
        if side not in SIDES:
            raise SpectralError("%s is not a valid side" % side)
        if kind not in TRACE_KINDS:
            raise SpectralError("%s is not a valid trace kind" % kind)
        self.side, self.kind, self.ell = side, kind, float(ell)
        self.mean = float(mean)
        self.modes = np.array(modes, dtype=complex).ravel()
        self.modes.setflags(write=False)


    def __repr__(self):
        return "<%s %s trace (%i modes)>" % (self.side.capitalize(), self.kind, self.N)


    @property
    def N(self):
        return len(self.modes)


    @property
    def k(self):
        return wavenumbers(self.ell, self.N)


    def evaluate(self, y, derivative=0):
        mean = self.mean if derivative == 0 else 0.0
        return mean + mode_sum(self.modes, self.k, y, derivative)


    def energy(self):
        """Integral of the squared trace over the circle, from Parseval."""

        return self.ell * (self.mean ** 2 + 2 * np.sum(np.abs(self.modes) ** 2))


    def shifted(self, y0):
        """The trace of f(y - y0)."""

        return TraceModes(self.side, self.kind, self.mean,
         self.modes * np.exp(-1j * self.k * y0), self.ell)


    def to_dict(self):
        return {"side": self.side, "kind": self.kind, "ell": self.ell, "mean": self.mean,
         "modes": [{"n": n, "re": float(v.real), "im": float(v.imag)}
          for n, v in enumerate(self.modes, start=1)]}



class CollarField:
    """H on the whole collar: the Fourier solution on the flat stratum and
    the first-order seam continuation D(y) + (x - x_seam) N(y) on each strip,
    where D is the seam value and N the hyperbolic-side x-derivative."""

    def __init__(self, solution, left_neumann, right_neumann):
        self.solution = solution
        self.dirichlet = {side: dirichlet_trace(solution, side) for side in SIDES}
        self.neumann = {"left": left_neumann, "right": right_neumann}


    def __repr__(self):
        return "<CollarField (%i modes)>" % self.solution.N


    def side_field(self, side):
        """(value, x-derivative) callables continuing one strip's data across its seam."""

        x_seam = side_sign(side) * self.solution.s / 2
        D, N = self.dirichlet[side], self.neumann[side]
        value = lambda x, y: D.evaluate(y) + (np.asarray(x) - x_seam) * N.evaluate(y)
        dx = lambda x, y: N.evaluate(y) + 0 * np.asarray(x)
        return value, dx


    def _strip(self, x):
        half = self.solution.s / 2
        if x < -half:
            return "left"
        if x > half:
            return "right"


    def evaluate(self, x, y):
        x = float(x)
        side = self._strip(x)
        if side is None:
            return self.solution.evaluate(x, y)
        return self.side_field(side)[0](x, y)


    def evaluate_dx(self, x, y):
        x = float(x)
        side = self._strip(x)
        if side is None:
            return self.solution.evaluate_dx(x, y)
        return self.side_field(side)[1](x, y)



def dirichlet_trace(sol, side):
    sign = side_sign(side)
    arg = np.pi * np.arange(1, sol.N + 1) * sol.s / sol.ell
    mean = sign * sol.c0 * sol.s / 2 + sol.d0
    return TraceModes(side, DIRICHLET, mean, sol.c * np.cosh(arg) + sign * sol.d * np.sinh(arg), sol.ell)


def neumann_trace_flat(sol, side):
    """The x-derivative of the flat solution at a seam; its mean is c0 on both sides."""

    sign = side_sign(side)
    arg = np.pi * np.arange(1, sol.N + 1) * sol.s / sol.ell
    modes = sol.k * (sign * sol.c * np.sinh(arg) + sol.d * np.cosh(arg))
    return TraceModes(side, NEUMANN_FLAT, sol.c0, modes, sol.ell)


def from_boundary_data(left, right, ell, s):
    """Recovers the unique Fourier solution with the given Dirichlet traces by
    solving the 2x2 system of each mode, whose determinant is 2 cosh sinh."""

    if left.kind != DIRICHLET or right.kind != DIRICHLET:
        raise SpectralError("Boundary data must be Dirichlet traces, not %s/%s" % (left.kind, right.kind))
    if left.N != right.N:
        raise SpectralError("Traces have different truncations (%i and %i)" % (left.N, right.N))
    if s == 0:
        if abs(right.mean - left.mean) > 1e-14 * max(1, abs(left.mean)):
            raise SingularSystemError("s = 0 but the seam means differ (%s, %s)" % (left.mean, right.mean))
        if np.any(left.modes != 0) or np.any(right.modes != 0):
            raise SingularSystemError("s = 0: mode system is singular (determinant 2 cosh sinh = 0)")
        return FourierSolution(ell, s, 0.0, (left.mean + right.mean) / 2, np.zeros(left.N), np.zeros(left.N))
    arg = np.pi * np.arange(1, left.N + 1) * s / ell
    ch, sh = np.cosh(arg), np.sinh(arg)
    c = (left.modes + right.modes) / (2 * ch)
    d = (right.modes - left.modes) / (2 * sh)
    c0 = (right.mean - left.mean) / s
    d0 = (right.mean + left.mean) / 2
    return FourierSolution(ell, s, c0, d0, c, d)


def harmonicity_residual(sol, h=None, stencil="five", field=None):
    """Largest discrete Laplacian of the field over an interior grid of
    spacing h. The five-point stencil has error h^2 k^4 / 6 per harmonic
    mode; the compact nine-point stencil is sixth order on harmonic fields."""

    h = sol.ell / 256 if h is None else h
    f = field if field is not None else sol.evaluate
    count = int(np.floor(sol.s / h))
    if count < 2:
        raise SpectralError("Grid spacing %s leaves no interior points for s = %s" % (h, sol.s))
    x = -sol.s / 2 + h * np.arange(1, count)
    x = x[np.abs(x) + h <= sol.s / 2]
    y = np.arange(int(round(sol.ell / h))) * h
    X, Y = np.meshgrid(x, y, indexing="ij")
    centre = f(X, Y)
    edges = f(X + h, Y) + f(X - h, Y) + f(X, Y + h) + f(X, Y - h)
    if stencil == "five":
        laplacian = (edges - 4 * centre) / h ** 2
    elif stencil == "nine":
        corners = f(X + h, Y + h) + f(X - h, Y + h) + f(X + h, Y - h) + f(X - h, Y - h)
        laplacian = (4 * edges + corners - 20 * centre) / (6 * h ** 2)
    else:
        raise SpectralError("%s is not a known stencil" % stencil)
    residual = float(np.max(np.abs(laplacian)))
    logger.debug("Harmonicity residual %.3e on %i points (%s stencil)", residual, centre.size, stencil)
    return residual


def random_solution(ell, s, seed=0, modes=DEFAULT_MODES, c0=0.0, scale=1.0):
    return FourierSolution.random(ell, s, np.random.default_rng(seed), modes, c0, scale)
