import argparse
import sys
from dataclasses import replace

from safenav.harness import (
    REPORT_FORMATS,
    emit_report,
    load_config,
    load_summary,
    merge_summaries,
    run_batch,
)
from safenav.world import (
    ConfigError,
    MapParseError,
    UnknownEnvironment,
    builtin_env,
    builtin_names,
    render_map,
)

EXIT_USAGE = 2


def run(args) -> int:
    """Run a batch from a configuration file and write its report."""

    cfg = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.runs is not None:
        overrides["n_runs"] = args.runs
    cfg = replace(cfg, **overrides)

    summary = run_batch(cfg, workers=args.workers, progress=not args.quiet)
    emit_report(summary, args.format, args.out)
    return 0


def envs_list(_args) -> int:
    """Print the names of the built-in environments."""
    for name in builtin_names():
        grid_map = builtin_env(name)
        print(f"{name}  {grid_map.width}x{grid_map.height}  path {len(grid_map.path)}")
    return 0


def envs_render(args) -> int:
    """Print an ASCII rendering of a built-in environment."""
    print(render_map(builtin_env(args.name)))
    return 0


def report(args) -> int:
    """Merge JSON reports into one."""
    summary = merge_summaries([load_summary(path) for path in args.merge])
    emit_report(summary, args.format, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Active localization experiments for a submerged vehicle."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="Run a batch of episodes")
    run_parser.add_argument("--config", "-c", required=True, help="YAML run configuration")
    run_parser.add_argument("--seed", type=int, default=None, help="Override the base seed")
    run_parser.add_argument(
        "--runs", "-n", type=int, default=None, help="Override the number of episodes"
    )
    run_parser.add_argument(
        "--workers", type=int, default=None, help="Number of worker processes"
    )
    run_parser.add_argument("--out", "-o", default="-", help="Report path, - for stdout")
    run_parser.add_argument("--format", choices=REPORT_FORMATS, default="csv")
    run_parser.add_argument(
        "--quiet", "-q", action="store_true", help="Do not print progress"
    )
    run_parser.set_defaults(handler=run)

    envs_parser = commands.add_parser("envs", help="Inspect built-in environments")
    envs_commands = envs_parser.add_subparsers(dest="envs_command", required=True)
    envs_commands.add_parser("list", help="List built-in environments").set_defaults(
        handler=envs_list
    )
    render_parser = envs_commands.add_parser("render", help="Render a built-in environment")
    render_parser.add_argument("name", metavar="NAME", help="Built-in environment name")
    render_parser.set_defaults(handler=envs_render)

    report_parser = commands.add_parser("report", help="Merge JSON batch reports")
    report_parser.add_argument(
        "--merge", metavar="FILES", nargs="+", required=True, help="JSON reports to merge"
    )
    report_parser.add_argument("--out", "-o", default="-", help="Report path, - for stdout")
    report_parser.add_argument("--format", choices=REPORT_FORMATS, default="json")
    report_parser.set_defaults(handler=report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, MapParseError, UnknownEnvironment, OSError) as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as error:
        # malformed or conflicting reports
        print(f"error: {error}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
