import math
import pytest
from graftlab.config import ConfigFile, RunConfig, get_default, get_from_file
from graftlab.exceptions import ConfigDataError, ConfigFileError

def parse(text, overrides=None):
    return RunConfig(ConfigFile(text), overrides)


def test_records_and_comments():
    config_file = ConfigFile("# a collar\nell = 3.5  # length\n\nS=1.25\nouter_bc = neumann\n")
    assert [r.name for r in config_file.records] == ["ell", "s", "outer_bc"]
    assert config_file.get_records_by_name("S")[0].value == "1.25"
    assert config_file.records[0].number == 2


def test_malformed_lines():
    with pytest.raises(ConfigFileError, match="not a key = value pair"):
        ConfigFile("ell 3.5")
    with pytest.raises(ConfigFileError, match="not a valid configuration key"):
        ConfigFile("length = 3.5")
    with pytest.raises(ConfigFileError, match="has no value"):
        ConfigFile("ell =")
    with pytest.raises(ConfigFileError, match="more than once"):
        ConfigFile("modes = 4\nmodes = 8")


def test_defaults():
    config = get_default()
    assert config.chart.ell == 2 * math.pi
    assert (config.chart.s, config.chart.a, config.chart.outer_bc) == (2.0, 1.0, "dirichlet")
    assert (config.spectral.modes, config.spectral.seed, config.spectral.points) == (32, 0, 4096)
    assert (config.solver.tol, config.solver.bvp_tol, config.solver.nodes) == (1e-10, 1e-7, 512)
    assert (config.geodesic.t, config.geodesic.fd_step) == (1e-3, 1e-4)
    assert config.output.out is None
    assert config.to_dict()["steps"] == 50


def test_values_are_converted():
    config = parse("ell = 4\nmodes = 6\nseed = 11\ntol = 1e-8\nouter_bc = NEUMANN")
    assert config.chart.ell == 4.0
    assert config.spectral.modes == 6 and config.spectral.seed == 11
    assert config.solver.tol == 1e-8
    chart = config.get_chart()
    assert (chart.ell, chart.outer_bc) == (4.0, "neumann")


@pytest.mark.parametrize("text", ["modes = four", "modes = 2.5", "ell = nan", "tol = x"])
def test_unconvertible_values(text):
    with pytest.raises(ConfigDataError, match="is not a valid"):
        parse(text)


@pytest.mark.parametrize("text", ["ell = -1", "ell = 0", "s = -0.5", "a = -1", "outer_bc = robin",
 "modes = 0", "seed = -3", "points = 10\nmodes = 8", "tol = 0", "nodes = 8", "t = 0", "steps = 0",
  "param = tau", "from = 1"])
def test_invalid_values(text):
    with pytest.raises(ConfigDataError):
        parse(text)


def test_overrides_take_precedence():
    config = parse("ell = 4\nmodes = 6", {"ell": 3.0, "modes": None, "seed": 5})
    assert config.chart.ell == 3.0
    assert config.spectral.modes == 6
    assert config.spectral.seed == 5


def test_sweep_points():
    sweep = parse("param = s\nfrom = 0\nto = 4\nsteps = 5").sweep
    assert sweep.points() == [0.0, 1.0, 2.0, 3.0, 4.0]
    assert parse("from = 2\nto = 3\nsteps = 1").sweep.points() == [2.0]
    with pytest.raises(ConfigDataError, match="No sweep range"):
        get_default().sweep.points()
    with pytest.raises(ConfigDataError):
        parse("param = ell\nfrom = 0\nto = 2").sweep.points()


def test_file_round_trip(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("ell = 5.0\ns = 0.5\nmodes = 4\n")
    config = get_from_file(str(path), {"seed": 2})
    assert (config.chart.ell, config.chart.s, config.spectral.modes, config.spectral.seed) == (5.0, 0.5, 4, 2)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigFileError, match="Could not read"):
        get_from_file(str(tmp_path / "missing.cfg"))


def test_strip_solves_need_positive_width():
    config = parse("a = 0")
    assert config.get_chart().a == 0
    with pytest.raises(ConfigDataError, match="a must be positive"):
        config.get_chart(strips=True)
    with pytest.raises(ConfigDataError, match="must stay positive"):
        parse("param = a\nfrom = 0\nto = 1").sweep.points()
