import math
from ..exceptions import *
from ..geometry import OUTER_CONDITIONS, GraftedCollar

SWEEP_PARAMETERS = ("ell", "s", "a")

def _integer(value):
    return int(str(value).strip())


def _real(value):
    value = float(value)
    if not math.isfinite(value):
        raise ValueError("%s is not finite" % value)
    return value



class RunConfig:
    """A processed ConfigFile, grouped into sections. Overrides (typically
    command-line flags) replace file values of the same name."""

    def __init__(self, config_file, overrides=None):
        self.file = config_file
        overrides = {name: value for name, value in (overrides or {}).items() if value is not None}

        #Create the sections
        self.chart = ChartSection(self.file, overrides)
        self.spectral = SpectralSection(self.file, overrides)
        self.solver = SolverSection(self.file, overrides)
        self.sweep = SweepSection(self.file, overrides)
        self.geodesic = GeodesicSection(self.file, overrides)
        self.output = OutputSection(self.file, overrides)


    def __repr__(self):
        return "<RunConfig ell=%g s=%g a=%g (%i modes)>" % (
         self.chart.ell, self.chart.s, self.chart.a, self.spectral.modes)


    def get_chart(self, strips=False):
        """The configured chart. Commands that solve the hyperbolic strips
        pass strips=True, which needs a positive strip half-width."""

        if strips:
            self.chart.require(self.chart.a > 0, "a must be positive to solve the strips, not %s" % self.chart.a)
        return GraftedCollar(self.chart.ell, self.chart.s, self.chart.a, self.chart.outer_bc)


    def to_dict(self):
        values = {}
        for section in (self.chart, self.spectral, self.solver, self.sweep, self.geodesic, self.output):
            values.update(section.values)
        return values



class ConfigSection:

    RECORD_NAMES = ()
    DEFAULTS = {}
    CONVERTERS = {}

    def __init__(self, config_file, overrides=None):
        overrides = overrides or {}
        self.records = [r for name in self.RECORD_NAMES for r in config_file.get_records_by_name(name)]
        raw = dict(self.DEFAULTS)
        raw.update({r.name: r.value for r in self.records})
        raw.update({name: value for name, value in overrides.items() if name in self.RECORD_NAMES})
        self.values = {name: self.convert(name, raw.get(name)) for name in self.RECORD_NAMES}


    def __repr__(self):
        return "<%s (%i records)>" % (self.__class__.__name__, len(self.records))


    def convert(self, name, value):
        if value is None:
            return None
        converter = self.CONVERTERS.get(name, str)
        try:
            return converter(value)
        except (ValueError, TypeError):
            raise ConfigDataError("%s = %s is not a valid %s" % (
             name, value, "integer" if converter is _integer else "number"))


    def require(self, condition, message):
        if not condition:
            raise ConfigDataError(message)



class ChartSection(ConfigSection):

    RECORD_NAMES = ("ell", "s", "a", "outer_bc")
    DEFAULTS = {"ell": 2 * math.pi, "s": 2.0, "a": 1.0, "outer_bc": "dirichlet"}
    CONVERTERS = {"ell": _real, "s": _real, "a": _real}

    def __init__(self, *args, **kwargs):
        ConfigSection.__init__(self, *args, **kwargs)
        self.ell, self.s, self.a = self.values["ell"], self.values["s"], self.values["a"]
        self.outer_bc = self.values["outer_bc"].lower()
        self.values["outer_bc"] = self.outer_bc
        self.require(self.ell > 0, "ell must be positive, not %s" % self.ell)
        self.require(self.s >= 0, "s cannot be negative (%s)" % self.s)
        self.require(self.a >= 0, "a cannot be negative (%s)" % self.a)
        self.require(self.outer_bc in OUTER_CONDITIONS,
         "outer_bc must be one of %s, not %s" % (", ".join(OUTER_CONDITIONS), self.outer_bc))



class SpectralSection(ConfigSection):

    RECORD_NAMES = ("modes", "seed", "points")
    DEFAULTS = {"modes": 32, "seed": 0, "points": 4096}
    CONVERTERS = {"modes": _integer, "seed": _integer, "points": _integer}

    def __init__(self, *args, **kwargs):
        ConfigSection.__init__(self, *args, **kwargs)
        self.modes, self.seed, self.points = self.values["modes"], self.values["seed"], self.values["points"]
        self.require(self.modes >= 1, "modes must be at least 1, not %i" % self.modes)
        self.require(self.seed >= 0, "seed cannot be negative (%i)" % self.seed)
        self.require(self.points >= 2 * self.modes + 2,
         "points (%i) must exceed twice the number of modes" % self.points)



class SolverSection(ConfigSection):

    RECORD_NAMES = ("tol", "bvp_tol", "nodes")
    DEFAULTS = {"tol": 1e-10, "bvp_tol": 1e-7, "nodes": 512}
    CONVERTERS = {"tol": _real, "bvp_tol": _real, "nodes": _integer}

    def __init__(self, *args, **kwargs):
        ConfigSection.__init__(self, *args, **kwargs)
        self.tol, self.bvp_tol, self.nodes = self.values["tol"], self.values["bvp_tol"], self.values["nodes"]
        self.require(self.tol > 0, "tol must be positive, not %s" % self.tol)
        self.require(self.bvp_tol > 0, "bvp_tol must be positive, not %s" % self.bvp_tol)
        self.require(self.nodes >= 16, "nodes must be at least 16, not %i" % self.nodes)



class SweepSection(ConfigSection):

    RECORD_NAMES = ("param", "from", "to", "steps")
    DEFAULTS = {"param": "ell", "steps": 50}
    CONVERTERS = {"from": _real, "to": _real, "steps": _integer}

    def __init__(self, *args, **kwargs):
        ConfigSection.__init__(self, *args, **kwargs)
        self.param, self.steps = self.values["param"], self.values["steps"]
        self.start, self.stop = self.values["from"], self.values["to"]
        self.require(self.param in SWEEP_PARAMETERS,
         "param must be one of %s, not %s" % (", ".join(SWEEP_PARAMETERS), self.param))
        self.require(self.steps >= 1, "steps must be at least 1, not %i" % self.steps)
        self.require((self.start is None) == (self.stop is None), "A sweep needs both from and to")


    def points(self):
        """The swept parameter values, in sweep order."""

        self.require(self.start is not None, "No sweep range given (set from and to)")
        for value in (self.start, self.stop):
            if self.param in ("ell", "a"):
                self.require(value > 0, "Sweep of %s must stay positive (%s)" % (self.param, value))
            else:
                self.require(value >= 0, "Sweep of %s cannot go negative (%s)" % (self.param, value))
        if self.steps == 1:
            return [self.start]
        return [self.start + (self.stop - self.start) * i / (self.steps - 1) for i in range(self.steps)]



class GeodesicSection(ConfigSection):

    RECORD_NAMES = ("t", "fd_step")
    DEFAULTS = {"t": 1e-3, "fd_step": 1e-4}
    CONVERTERS = {"t": _real, "fd_step": _real}

    def __init__(self, *args, **kwargs):
        ConfigSection.__init__(self, *args, **kwargs)
        self.t, self.fd_step = self.values["t"], self.values["fd_step"]
        self.require(self.t > 0, "t must be positive, not %s" % self.t)
        self.require(self.fd_step > 0, "fd_step must be positive, not %s" % self.fd_step)



class OutputSection(ConfigSection):

    RECORD_NAMES = ("out", "log")

    def __init__(self, *args, **kwargs):
        ConfigSection.__init__(self, *args, **kwargs)
        self.out, self.log = self.values["out"], self.values["log"]
