import sys
import argparse

from .. import set_threads
from ..config import ConfigError, load_config
from ..solver import SolverError
from . import solve, validate_kernel, diagnose, sweep_epsilon
from .solve import EXIT_ERROR

def _common(parser):
    parser.add_argument("config", help="Scenario YAML file")
    parser.add_argument("--output-dir", default=None,
                        help="Directory for results, default $FRACBOUND_OUTPUT_DIR, then "
                             "output_dir of the scenario, then the user cache")
    parser.add_argument("--name", default=None,
                        help="Basename of the written files, default the subcommand")
    parser.add_argument("--threads", type=int, default=None,
                        help="Worker threads for the FFT applies, default scipy's choice")
    parser.add_argument("--quiet", action="store_true",
                        help="Suppress progress bar and logging, default False")

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracbound",
        description="Penalized fractional free-boundary solver with diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="Run the continuation and write field + metrics")
    _common(p)
    p = sub.add_parser("validate-kernel", help="Accuracy checks of the discrete operator")
    _common(p)
    p = sub.add_parser("diagnose", help="Diagnostics of a saved field")
    _common(p)
    p.add_argument("field", help="Field CSV written by 'fracbound solve', or the name of that run")
    p = sub.add_parser("sweep-epsilon", help="Volume error over the whole epsilon grid")
    _common(p)
    return parser

def dispatch(args) -> int:
    config = load_config(args.config)
    set_threads(args.threads)
    verbose = not args.quiet
    options = {"output_dir": args.output_dir, "verbose": verbose}
    if args.name is not None:
        options["name"] = args.name
    if args.command == "solve":
        return solve.run_with(config, **options)
    if args.command == "validate-kernel":
        return validate_kernel.run_with(config, **options)
    if args.command == "diagnose":
        return diagnose.run_with(config, args.field, **options)
    return sweep_epsilon.run_with(config, **options)

def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return dispatch(args)
    except ConfigError as err:
        print(f"Error: {err}", file=sys.stderr)
    except SolverError as err:
        print(f"Solver error: {err}", file=sys.stderr)
    except (ValueError, OSError) as err:
        print(f"Error: {err}", file=sys.stderr)
    return EXIT_ERROR

if __name__ == "__main__":
    sys.exit(main())
