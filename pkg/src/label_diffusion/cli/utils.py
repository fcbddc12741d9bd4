import logging
import os
from pathlib import Path
from typing import Optional, Sequence, Tuple, Type, Union

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from ..errors import DataError, LabelDiffusionError
from ..models.evaluation import AR_COLUMNS, ARReport

console = Console()
err_console = Console(stderr=True)


def configure_logging(level: str = "WARNING") -> None:
    """Route library logs through rich on stderr."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def report_error(error: BaseException) -> int:
    """Print the one-line ``error: <kind>: <message>`` record and return the exit code."""
    if isinstance(error, LabelDiffusionError):
        kind, code = error.kind, error.exit_code
    else:
        kind, code = "internal", 1
    message = " ".join(str(error).split()) or type(error).__name__
    err_console.print(f"error: {kind}: {message}", style="red", markup=False, highlight=False, soft_wrap=True)
    return code


def format_ar(value: Optional[float]) -> str:
    """Format an AR value for display; absent subsets show as a dash"""
    return "-" if value is None else f"{value:.4f}"


def ar_table(rows: Sequence[Tuple[str, ARReport]], title: str = "Average Recall", label: str = "Run") -> Table:
    table = Table(title=title)
    table.add_column(label, style="cyan")
    for name in AR_COLUMNS:
        table.add_column(name, justify="right", style="green")
    for name, report in rows:
        values = report.as_dict()
        table.add_row(name, *(format_ar(values[column]) for column in AR_COLUMNS))
    return table


def require_path(value: str, what: str) -> Path:
    if not value:
        raise DataError(f"No {what} given")
    return Path(value)


def ensure_output_dir(value: Union[str, Path]) -> Path:
    path = Path(value) if value else None
    if path is None:
        raise DataError("No output directory given")
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise DataError(f"Cannot create output directory {path}: {e}") from e
    return path


def require_existing_file(value: str, what: str, error: Type[LabelDiffusionError] = DataError) -> Path:
    path = require_path(value, what)
    if not path.is_file():
        raise error(f"{what.capitalize()} not found: {path}")
    return path


def ensure_writable_file(path: Path, error: Type[LabelDiffusionError] = DataError) -> Path:
    """Fail before any work if ``path`` cannot be created or overwritten."""
    if path.is_dir():
        raise error(f"Cannot write {path}: it is a directory")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise error(f"Cannot create directory {path.parent}: {e}") from e
    target = path if path.exists() else path.parent
    if not os.access(target, os.W_OK):
        raise error(f"Cannot write {path}: permission denied")
    return path
