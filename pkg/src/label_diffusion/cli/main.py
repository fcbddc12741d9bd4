import argparse
import sys
from dataclasses import fields

from ..versioning import get_package_version
from .config import RunConfig, resolve_config
from .parsers import add_ablate_parser, add_eval_parser, add_gen_parser, add_sample_parser, add_train_parser
from .utils import configure_logging, report_error


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with code 1 and the same one-line error record as other failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: usage: {message}\n")
        sys.exit(1)


def build_parser() -> argparse.ArgumentParser:
    package_version = get_package_version() or "unknown"
    parser = _ArgumentParser(
        prog="label-diffusion",
        description=(
            "Label-space diffusion segmentation - generate synthetic data, train, "
            "sample masks for phrases, evaluate Average Recall and run ablations. "
            "Exit codes: 0 success, 1 usage, 2 data, 3 numeric."
        ),
        formatter_class=argparse.RawTextHelpFormatter,
    )
    parser.add_argument('--version', action='version', version=f'label-diffusion {package_version}')
    parser.add_argument(
        "--log-level",
        type=str,
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Library log level (logs go to stderr). Defaults to WARNING.",
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    add_gen_parser(subparsers)
    add_train_parser(subparsers)
    add_sample_parser(subparsers)
    add_eval_parser(subparsers)
    add_ablate_parser(subparsers)
    return parser


def main():
    parser = build_parser()
    args = parser.parse_args()

    if args.command is None:
        parser.print_help()
        sys.exit(0)

    configure_logging(args.log_level)
    known = {f.name for f in fields(RunConfig)}
    flags = {key: value for key, value in vars(args).items() if key in known and key != "command"}

    try:
        config = resolve_config(args.command, flags, args.config)
        args.func(args, config)
    except SystemExit:
        raise
    except Exception as e:
        sys.exit(report_error(e))


if __name__ == "__main__":
    main()
