import sys
from unittest.mock import patch

from label_diffusion.cli.main import main as cli_main

SMALL_MODEL = [
    "--base-width", "8",
    "--channel-mults", "1,2",
    "--total-steps", "20",
    "--batch-size", "4",
    "--epochs", "2",
]
FAST_SAMPLING = ["--ddim-steps", "2", "--guidance-scale", "3.0"]


def run_cli(*argv) -> int:
    """Run the CLI in-process and return its exit code."""
    with patch.object(sys, "argv", ["label-diffusion", *[str(a) for a in argv]]):
        try:
            cli_main()
        except SystemExit as e:
            return 0 if e.code is None else e.code
    return 0
