"""IoU and multi-threshold Average Recall."""
import logging
from typing import Callable, Optional, Sequence

import numpy as np

from ..errors import DataError, ShapeError
from ..models.evaluation import ARReport, EvalRecord, ThresholdGrid
from ..models.scene import Number, ThingStuff

logger = logging.getLogger(__name__)

# Records compared against the full grid at once in average_recall.
_CHUNK = 2048


def iou(a: np.ndarray, b: np.ndarray) -> float:
    """|a & b| / |a | b|, with two empty masks scoring 1.0."""
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    if a.shape != b.shape:
        raise ShapeError(f"Cannot compare masks of shape {a.shape} and {b.shape}")
    union = int(np.count_nonzero(a | b))
    if union == 0:
        return 1.0
    return int(np.count_nonzero(a & b)) / union


def _ious(records: Sequence[EvalRecord]) -> np.ndarray:
    if len(records) == 0:
        raise DataError("Average Recall needs at least one record")
    return np.fromiter((r.iou for r in records), dtype=np.float64, count=len(records))


def average_recall(records: Sequence[EvalRecord], grid: Optional[ThresholdGrid] = None) -> float:
    """Mean over thresholds of the fraction of records with IoU >= threshold."""
    grid = grid or ThresholdGrid.uniform()
    ious = _ious(records)
    counts = np.zeros(len(grid), dtype=np.int64)
    for start in range(0, ious.size, _CHUNK):
        chunk = ious[start:start + _CHUNK]
        counts += np.count_nonzero(chunk[None, :] >= grid.values[:, None], axis=1)
    return float(np.mean(counts / ious.size))


def average_recall_exact(records: Sequence[EvalRecord], grid: Optional[ThresholdGrid] = None) -> float:
    """Same quantity via sorting: each record contributes #(thresholds <= IoU) / (|grid| * P)."""
    grid = grid or ThresholdGrid.uniform()
    ious = np.sort(_ious(records))
    reached = np.searchsorted(grid.values, ious, side="right")
    return float(reached.sum()) / (len(grid) * ious.size)


def subcategory_report(
    records: Sequence[EvalRecord],
    grid: Optional[ThresholdGrid] = None,
    metric: Callable[[Sequence[EvalRecord], ThresholdGrid], float] = average_recall_exact,
) -> ARReport:
    grid = grid or ThresholdGrid.uniform()
    if len(records) == 0:
        raise DataError("Cannot report on an empty record set")
    for record in records:
        if not isinstance(record.thing_stuff, ThingStuff) or not isinstance(record.number, Number):
            raise DataError(f"Record '{record.phrase_id}' is missing its thing/stuff or number tag")

    def subset(keep) -> Optional[float]:
        chosen = [r for r in records if keep(r)]
        return metric(chosen, grid) if chosen else None

    report = ARReport(
        overall=metric(records, grid),
        things=subset(lambda r: r.thing_stuff is ThingStuff.THING),
        stuff=subset(lambda r: r.thing_stuff is ThingStuff.STUFF),
        singulars=subset(lambda r: r.number is Number.SINGULAR),
        plurals=subset(lambda r: r.number is Number.PLURAL),
    )
    logger.info(f"AR over {len(records)} phrases: {report.as_dict()}")
    return report


__all__ = ["average_recall", "average_recall_exact", "iou", "subcategory_report"]
