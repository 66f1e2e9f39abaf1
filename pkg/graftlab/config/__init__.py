from .file import *
from .data import *

def get_from_file(path, overrides=None):
    """Reads a key = value run configuration, applying any overrides."""

    try:
        with open(path) as f:
            contents = f.read()
    except OSError as e:
        raise ConfigFileError("Could not read %s: %s" % (path, e))
    return RunConfig(ConfigFile(contents), overrides)


def get_default(overrides=None):
    return RunConfig(ConfigFile(""), overrides)
