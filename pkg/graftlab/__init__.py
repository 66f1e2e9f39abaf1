"""Numerical machinery for grafted collars: the flat cylinder glued to
hyperbolic Fermi strips, conformal variations of its metric, and the
identities those variations satisfy."""

import json
from .exceptions import *
from .log import *
from .geometry import *
from .spectral import *
from .variation import *
from .hypersolve import *
from .identities import *
from .config import get_default, get_from_file

__version__ = "0.1.0"

def get_chart(path):
    """Reads a chart from a JSON file, either a bare chart or the output of
    the chart command."""

    try:
        with open(path) as f:
            values = json.load(f)
    except OSError as e:
        raise ChartError("Could not read %s: %s" % (path, e))
    except ValueError as e:
        raise ChartError("%s is not valid JSON: %s" % (path, e))
    if isinstance(values, dict) and "chart" in values:
        values = values["chart"]
    return GraftedCollar.from_json(json.dumps(values))
