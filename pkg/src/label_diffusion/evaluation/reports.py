"""CSV writers for per-phrase records, AR summaries and ablation tables."""
import csv
import logging
from pathlib import Path
from typing import Iterable, Optional, Sequence, Tuple, Union

from ..errors import DataError
from ..models.evaluation import AR_COLUMNS, ARReport, EvalRecord

logger = logging.getLogger(__name__)

RECORD_COLUMNS = ("phrase_id", "iou", "thing_stuff", "number")


def _cell(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.6f}"


def _write_rows(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as e:
        raise DataError(f"Cannot write {path}: {e}") from e
    logger.debug(f"Wrote {path}")
    return path


def write_records_csv(records: Sequence[EvalRecord], path: Union[str, Path]) -> Path:
    rows = (
        (
            r.phrase_id,
            f"{r.iou:.8f}",
            r.thing_stuff.value if r.thing_stuff else "",
            r.number.value if r.number else "",
        )
        for r in records
    )
    return _write_rows(path, RECORD_COLUMNS, rows)


def write_summary_csv(report: ARReport, path: Union[str, Path]) -> Path:
    values = report.as_dict()
    return _write_rows(path, AR_COLUMNS, [[_cell(values[name]) for name in AR_COLUMNS]])


def write_ablation_csv(axis: str, rows: Sequence[Tuple[str, ARReport]], path: Union[str, Path]) -> Path:
    """One row per axis value with the five AR columns."""
    header = ("axis", "value") + AR_COLUMNS
    body = [
        [axis, value] + [_cell(report.as_dict()[name]) for name in AR_COLUMNS]
        for value, report in rows
    ]
    return _write_rows(path, header, body)


__all__ = ["RECORD_COLUMNS", "write_ablation_csv", "write_records_csv", "write_summary_csv"]
