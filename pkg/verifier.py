import argparse
import sys

from modules.algebra_core import AlgebraSpec
from modules.errors import AlgebraSpecError
from modules.logger import Logger
from modules.report_store import ReportStore, load_config, resolve_output_dir
from modules.verification import SECTIONS, VerificationSettings, Verifier

COMMANDS = {
    "algebra": ("algebra",),
    "identities": ("identities",),
    "curvature": ("curvature",),
    "fibration": ("fibration",),
    "harmonic": ("harmonic",),
    "comparison": ("comparison",),
    "coercivity": ("coercivity", "growth"),
    "verify": SECTIONS,
}

TABLE_CSV = "table1.csv"

# CLI flags overriding the "verification" config section
SETTING_FLAGS = (
    "samples",
    "restarts",
    "max_iterations",
    "directions",
    "random_forms",
    "random_frames",
    "grid_points",
    "growth_threshold",
    "seed",
    "tol_scale",
)


def build_parser():
    parser = argparse.ArgumentParser(description="Numerical verification of the L2 vanishing argument for period domains")
    commands = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        command = commands.add_parser(name, help=f"Run the {name} checks")
        command.add_argument("--family", choices=["so", "sp"], help="Algebra family")
        command.add_argument("--p", type=int, help="p in so(p,2q)")
        command.add_argument("--q", type=int, help="q in so(p,2q)")
        command.add_argument("--m", type=int, help="m in sp(m,n)")
        command.add_argument("--n", type=int, help="n in sp(m,n)")
        command.add_argument("--xi", type=float, nargs="+", help="Coefficients of xi over the maximal torus of k")
        command.add_argument("--config", help="Algebra config file (JSON)")
        command.add_argument("--settings", default="verifier_config.json", help="Verifier config file (JSON)")
        command.add_argument("--out", help="Output directory")
        command.add_argument("--seed", type=int, help="Random seed")
        command.add_argument("--tol-scale", dest="tol_scale", type=float, help="Multiplier for residual tolerances")
        command.add_argument("--samples", type=int, help="Random 2-planes in the curvature survey")
        command.add_argument("--restarts", type=int, help="Optimizer restarts per extremum")
        command.add_argument("--max-iterations", dest="max_iterations", type=int, help="Optimizer iteration cap")
        command.add_argument("--directions", type=int, help="Random radial directions")
        command.add_argument("--random-forms", dest="random_forms", type=int, help="Random 1-forms")
        command.add_argument("--random-frames", dest="random_frames", type=int, help="Random stress-energy frames")
        command.add_argument("--grid-points", dest="grid_points", type=int, help="Radial grid size")
        command.add_argument("--growth-threshold", dest="growth_threshold", type=float,
                             help="Integrated coercivity defining R0")
        command.add_argument("--quiet", action="store_true", help="Suppress the summary printed at the end")
        command.add_argument("--logfile", help="Path to the log file")
        command.add_argument("--logconsole", action="store_true", help="Enable logging to console")
    return parser


def spec_from_args(args):
    """Algebra config file values, overridden by CLI flags."""
    data = dict(load_config(args.config)) if args.config else {}
    if args.family:
        data["family"] = args.family
    for name in ("p", "q", "m", "n"):
        if getattr(args, name) is not None:
            data[name] = getattr(args, name)
    if args.xi:
        data["xi"] = args.xi
    if "family" not in data:
        raise AlgebraSpecError("An algebra is required: pass --family with its parameters or --config")
    return AlgebraSpec.from_dict(data)


def settings_from_args(args, config):
    values = dict(config.get("verification") or {})
    for name in SETTING_FLAGS:
        if getattr(args, name) is not None:
            values[name] = getattr(args, name)
    return VerificationSettings.from_dict(values)


def write_artifacts(store, verifier, command):
    report = verifier.report
    store.write_json("report.json", report.to_dict())
    store.write_json("timings.json", {"algebra": verifier.spec.label, "seconds": report.timings})
    if command in ("algebra", "verify") and verifier.document is not None:
        store.write_json("algebra.json", verifier.document)
    if verifier.table_rows:
        store.write_csv(TABLE_CSV, verifier.table_rows)
    for name, rows in verifier.profile_rows.items():
        store.write_csv(name, rows)


def main(argv=None):
    # Parse command-line arguments
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    # Load configuration
    try:
        config = load_config(args.settings)
        spec = spec_from_args(args)
        settings = settings_from_args(args, config)
    except (AlgebraSpecError, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    logger_config = dict(config.get("logger") or {})
    if args.logfile:
        logger_config["logfile"] = args.logfile
    logger_config["console"] = args.logconsole or logger_config.get("console", False)

    # Initialize Logger and report store
    logger = Logger(logger_config)
    logger.info(f"Starting {args.command} for {spec.label} (seed {settings.seed})")
    store = ReportStore(resolve_output_dir(args.out, config), logger)
    verifier = Verifier(spec, settings, logger)

    exit_code = 1
    try:
        store.connect()
        verifier.run(COMMANDS[args.command])
        exit_code = 0 if verifier.report.passed else 1
    except AlgebraSpecError as e:
        logger.error(f"{spec.label}: {e}")
        print(f"error: {e}", file=sys.stderr)
        exit_code = 2
    except Exception as e:
        logger.exception(f"An error occurred: {e}")
    finally:
        if exit_code != 2 and store.is_open:
            write_artifacts(store, verifier, args.command)
        store.close()
        logger.info(f"Verifier completed with exit code {exit_code}.")
        logger.close()

    if exit_code != 2 and not args.quiet:
        print(verifier.report.summary())
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
