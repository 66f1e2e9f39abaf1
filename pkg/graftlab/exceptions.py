class GraftError(Exception):
    pass


class ChartError(GraftError):
    pass


class SeamError(ChartError):
    pass


class SpectralError(GraftError):
    pass


class SingularSystemError(SpectralError):
    pass


class VariationError(GraftError):
    pass


class NoPeriodicSolutionError(VariationError):
    pass


class ConvergenceError(VariationError):
    pass


class SolverError(GraftError):
    pass


class IdentityError(GraftError):
    pass


class ConfigError(GraftError):
    pass


class ConfigFileError(ConfigError):
    pass


class ConfigDataError(ConfigError):
    pass
