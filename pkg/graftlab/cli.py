"""The graftlab command line. Every command reads a run configuration (a
key = value file and/or flags of the same name), does its work, and writes
JSON or CSV to --out or standard output.

Exit codes: 0 when everything checked passes, 1 when a check fails or a
computation raises, 2 for usage, configuration and output-path errors."""

from concurrent.futures import ThreadPoolExecutor
import argparse
import csv
import io
import json
import logging
import os
import sys
import numpy as np
from .config import get_default, get_from_file
from .exceptions import *
from .geometry import ConformalFamily
from .hypersolve import mode_determinant, solve_strip, thread_count, zero_mode_coefficient
from .identities import boundary_term_closed, build_configuration, run_suite, unamended_boundary_quadrature
from .log import configure_logging, write_to_log
from .spectral import SIDES, CollarField, FourierSolution, dirichlet_trace
from .variation import geodesic_oracle, hyperbolic_neumann

logger = logging.getLogger(__name__)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
GEODESIC_MODES = 4
GEODESIC_POINTS = 256
GEODESIC_TOLERANCE = 1e-2
SWEEP_COLUMNS = ["index", "ell", "s", "a", "modulus", "zero_mode_coefficient", "min_abs_det"]

#Flag destination -> configuration key
OVERRIDES = {
 "ell": "ell", "s": "s", "a": "a", "outer_bc": "outer_bc", "modes": "modes", "seed": "seed",
 "points": "points", "tol": "tol", "bvp_tol": "bvp_tol", "nodes": "nodes", "param": "param",
 "start": "from", "stop": "to", "steps": "steps", "t": "t", "fd_step": "fd_step", "out": "out", "log": "log"
}

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value run configuration")
    common.add_argument("--ell", type=float)
    common.add_argument("--s", type=float)
    common.add_argument("--a", type=float)
    common.add_argument("--outer-bc", dest="outer_bc", choices=["dirichlet", "neumann"])
    common.add_argument("--modes", type=int, metavar="N")
    common.add_argument("--seed", type=int)
    common.add_argument("--points", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--bvp-tol", dest="bvp_tol", type=float)
    common.add_argument("--nodes", type=int)
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--log", metavar="PATH")
    common.add_argument("--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="graftlab", description="Numerical checks on grafted collars")
    commands = parser.add_subparsers(dest="command")
    commands.add_parser("verify", parents=[common], help="run the identity suite, write a JSON report")
    sweep = commands.add_parser("sweep", parents=[common], help="sweep one chart parameter, write CSV")
    sweep.add_argument("--param", choices=["ell", "s", "a"])
    sweep.add_argument("--from", dest="start", type=float)
    sweep.add_argument("--to", dest="stop", type=float)
    sweep.add_argument("--steps", type=int)
    geodesic = commands.add_parser("geodesic", parents=[common], help="compare perturbed seam geodesics with V")
    geodesic.add_argument("--t", type=float)
    geodesic.add_argument("--fd-step", dest="fd_step", type=float)
    commands.add_parser("chart", parents=[common], help="dump the chart as JSON")
    commands.add_parser("modes", parents=[common], help="dump spectral and strip solutions")
    return parser


def load_config(args):
    overrides = {key: getattr(args, dest, None) for dest, key in OVERRIDES.items()}
    if args.config:
        return get_from_file(args.config, overrides)
    return get_default(overrides)


def _dumps(value):
    return json.dumps(value, sort_keys=True, indent=2) + "\n"


def emit(config, text):
    """Writes text to the configured output path, or stdout when there is none."""

    if config.output.out is None:
        sys.stdout.write(text)
    else:
        with open(config.output.out, "w", newline="") as f:
            f.write(text)


def echo(config, line):
    print(write_to_log(line, config.output.log), file=sys.stderr)


def cmd_verify(config):
    chart = config.get_chart(strips=True)
    reports = run_suite(chart, config.spectral.modes, config.spectral.seed, config.solver.tol,
     config.solver.bvp_tol, config.solver.nodes, config.spectral.points, thread_count())
    emit(config, _dumps([report.to_dict() for report in reports]))
    failed = [report.identity for report in reports if not report.passed]
    echo(config, "%i of %i identities passed%s" % (len(reports) - len(failed), len(reports),
     (" (failed: %s)" % ", ".join(failed)) if failed else ""))
    return EXIT_FAIL if failed else EXIT_PASS


def sweep_row(index, chart, config):
    """One sweep point: the modulus, the per-mode determinants and the residuals
    of the boundary-term and slice checks on a field seeded by the point index."""

    modes = config.spectral.modes
    determinants = [mode_determinant(n, chart.ell, chart.s, chart.a, chart.outer_bc) for n in range(1, modes + 1)]
    rng = np.random.default_rng([config.spectral.seed, index])
    sol = FourierSolution.random(chart.ell, chart.s, rng, modes)
    configuration = build_configuration(chart, sol, solve_strips=False)
    closed = boundary_term_closed(sol, configuration.v_left, configuration.v_right)
    quadrature = unamended_boundary_quadrature(sol, configuration.v_left, configuration.v_right,
     config.spectral.points)
    scale = max(abs(closed), abs(quadrature))
    slice_residual = configuration.v_left.mean - configuration.v_right.mean + sol.s * sol.d0 / 2
    row = [index, chart.ell, chart.s, chart.a, chart.conformal_modulus(),
     zero_mode_coefficient(chart.ell, chart.s, chart.a, chart.outer_bc), min(abs(d) for d in determinants)]
    return row + determinants + [abs(closed - quadrature) / scale if scale else 0.0, abs(slice_residual)]


def cmd_sweep(config):
    sweep, base = config.sweep, config.get_chart(strips=True)
    charts = [base.replace(**{sweep.param: value}) for value in sweep.points()]
    with ThreadPoolExecutor(max_workers=thread_count()) as executor:
        rows = list(executor.map(lambda pair: sweep_row(pair[0], pair[1], config), enumerate(charts)))
    rows.sort(key=lambda row: row[0])
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS + ["det_%i" % n for n in range(1, config.spectral.modes + 1)]
     + ["boundary_residual", "slice_residual"])
    for row in rows:
        writer.writerow([row[0]] + ["%.17g" % value for value in row[1:]])
    emit(config, buffer.getvalue())
    echo(config, "Swept %s over %i points" % (sweep.param, len(rows)))
    return EXIT_PASS


def geodesic_field(chart, sol):
    """The collar field whose strip continuations use the hyperbolic Neumann
    data of the slice-pinned seam variations, together with those variations."""

    configuration = build_configuration(chart, sol, solve_strips=False)
    variations = {"left": configuration.v_left, "right": configuration.v_right}
    field = CollarField(sol, hyperbolic_neumann(variations["left"]), hyperbolic_neumann(variations["right"]))
    return field, variations


def geodesic_report(chart, sol, t, fd_step, points=GEODESIC_POINTS):
    field, variations = geodesic_field(chart, sol)
    family = ConformalFamily(chart, field)
    report = {"chart": chart.to_dict(), "t": t, "fd_step": fd_step, "points": points, "sides": {}}
    for side in SIDES:
        rows = {}
        for label, value in (("t", t), ("t/2", t / 2)):
            displacement = geodesic_oracle(family, side, value, fd_step, points)
            comparison = displacement.compare(variations[side])
            rows[label] = {
             "t": value, "iterations": displacement.iterations, "relative": comparison["relative"],
             "max_error": comparison["max_error"], "raw_max_error": comparison["raw_max_error"],
             "mode_errors": [float(e) for e in comparison["mode_errors"][:sol.N + 1]],
             "raw_mode_errors": [float(e) for e in comparison["raw_mode_errors"][:sol.N + 1]]
            }
        rows["raw_error_ratio"] = (rows["t/2"]["raw_max_error"] / rows["t"]["raw_max_error"]
         if rows["t"]["raw_max_error"] > 0 else 0.0)
        report["sides"][side] = rows
    report["max_error"] = max(report["sides"][side][label]["max_error"] for side in SIDES for label in ("t", "t/2"))
    report["pass"] = bool(report["max_error"] < GEODESIC_TOLERANCE)
    return report


def cmd_geodesic(config):
    chart = config.get_chart()
    rng = np.random.default_rng(config.spectral.seed)
    sol = FourierSolution.random(chart.ell, chart.s, rng, min(config.spectral.modes, GEODESIC_MODES))
    report = geodesic_report(chart, sol, config.geodesic.t, config.geodesic.fd_step)
    report["seed"] = config.spectral.seed
    emit(config, _dumps(report))
    echo(config, "Geodesic oracle max error %.3e (%s)" % (report["max_error"], "pass" if report["pass"] else "FAIL"))
    return EXIT_PASS if report["pass"] else EXIT_FAIL


def cmd_chart(config):
    chart = config.get_chart()
    values = {
     "chart": chart.to_dict(), "x_max": chart.x_max, "seams": list(chart.seams),
     "total_area": chart.total_area(), "conformal_modulus": chart.conformal_modulus(),
     "seam_jumps": {key: float(value) for key, value in chart.seam_jumps().items()}
    }
    emit(config, _dumps(values))
    return EXIT_PASS


def cmd_modes(config):
    """Writes solution.json, the seam traces, and one CSV per strip mode
    (unit seam data, so shared by both strips) into the --out directory."""

    chart = config.get_chart(strips=True)
    out = config.output.out or "graftlab-modes"
    os.makedirs(out, exist_ok=True)
    rng = np.random.default_rng(config.spectral.seed)
    sol = FourierSolution.random(chart.ell, chart.s, rng, config.spectral.modes)
    with open(os.path.join(out, "solution.json"), "w") as f:
        f.write(_dumps(sol.to_dict()))
    traces = {side: dirichlet_trace(sol, side) for side in SIDES}
    with open(os.path.join(out, "traces.json"), "w") as f:
        f.write(_dumps({side: trace.to_dict() for side, trace in traces.items()}))
    strip = solve_strip(traces["left"], chart.a, chart.outer_bc, config.solver.nodes, thread_count())
    for solution in strip.solutions:
        solution.to_csv(os.path.join(out, "strip_mode_%03i.csv" % solution.n))
    echo(config, "Wrote %i strip modes to %s" % (len(strip.solutions), out))
    return EXIT_PASS


COMMANDS = {
 "verify": cmd_verify, "sweep": cmd_sweep, "geodesic": cmd_geodesic, "chart": cmd_chart, "modes": cmd_modes
}

def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PASS if e.code in (0, None) else EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        config = load_config(args)
        configure_logging(config.output.log, logging.DEBUG if args.verbose else logging.WARNING)
    except (ConfigError, OSError) as e:
        print("graftlab: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](config)
    except (ConfigError, OSError) as e:
        print("graftlab: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    except GraftError as e:
        logger.error("%s failed: %s", args.command, e)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
