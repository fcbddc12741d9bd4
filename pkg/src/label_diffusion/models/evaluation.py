from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from ..errors import ParameterError
from .scene import Number, ThingStuff


@dataclass(frozen=True)
class ThresholdGrid:
    """Ordered IoU thresholds in (0, 1) used by Average Recall."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise ParameterError("Threshold grid must be a nonempty 1-D sequence")
        if np.any(values <= 0.0) or np.any(values >= 1.0):
            raise ParameterError("Threshold grid values must lie strictly inside (0, 1)")
        if np.any(np.diff(values) <= 0.0):
            raise ParameterError("Threshold grid must be strictly increasing")
        object.__setattr__(self, "values", values)

    @classmethod
    def uniform(cls, denominator: int = 10000) -> "ThresholdGrid":
        """Grid {k/denominator : k = 1..denominator-1}."""
        if denominator < 2:
            raise ParameterError(f"Grid denominator must be at least 2, got {denominator}")
        return cls(np.arange(1, denominator, dtype=np.float64) / denominator)

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class EvalRecord:
    phrase_id: str
    iou: float
    thing_stuff: Optional[ThingStuff]
    number: Optional[Number]

    def __post_init__(self):
        if not 0.0 <= self.iou <= 1.0:
            raise ParameterError(f"IoU must lie in [0, 1], got {self.iou} for phrase '{self.phrase_id}'")


AR_COLUMNS = ("overall", "things", "stuff", "singulars", "plurals")


@dataclass(frozen=True)
class ARReport:
    """The five Average Recall figures; a subset without records is None."""

    overall: float
    things: Optional[float] = None
    stuff: Optional[float] = None
    singulars: Optional[float] = None
    plurals: Optional[float] = None

    def as_dict(self) -> Dict[str, Optional[float]]:
        return {name: getattr(self, name) for name in AR_COLUMNS}
