from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Tuple

import numpy as np

from ..errors import ParameterError


class ThingStuff(Enum):
    THING = "thing"
    STUFF = "stuff"


class Number(Enum):
    SINGULAR = "singular"
    PLURAL = "plural"


DEFAULT_PALETTE: Dict[str, Tuple[float, float, float]] = {
    "red": (0.86, 0.12, 0.12),
    "blue": (0.15, 0.25, 0.90),
    "green": (0.10, 0.70, 0.20),
    "yellow": (0.95, 0.85, 0.10),
    "purple": (0.55, 0.15, 0.70),
    "orange": (0.98, 0.55, 0.05),
    "white": (0.97, 0.97, 0.97),
}


@dataclass
class PhraseAnnotation:
    """One noun phrase of a scene with its ground-truth mask and tags."""

    text: str
    mask: np.ndarray
    thing_stuff: ThingStuff
    number: Number

    def __post_init__(self):
        if not self.text or not self.text.strip():
            raise ParameterError("Phrase text must be a non-empty string")
        if self.mask.dtype != np.bool_:
            self.mask = self.mask.astype(bool)


@dataclass
class Scene:
    image: np.ndarray
    phrases: List[PhraseAnnotation]
    background_mask: np.ndarray
    seed: int

    @property
    def height(self) -> int:
        return int(self.image.shape[0])

    @property
    def width(self) -> int:
        return int(self.image.shape[1])


@dataclass(frozen=True)
class SceneSpec:
    """Generation parameters for one synthetic scene."""

    image_size: int = 64
    min_groups: int = 1
    max_groups: int = 3
    max_instances: int = 3
    palette: Dict[str, Tuple[float, float, float]] = field(default_factory=lambda: dict(DEFAULT_PALETTE))
    spatial_words: bool = False
    max_retries: int = 200

    def __post_init__(self):
        if self.image_size <= 0 or self.image_size % 8 != 0:
            raise ParameterError(f"Image size must be a positive multiple of 8, got {self.image_size}")
        if self.min_groups < 1 or self.max_groups < self.min_groups:
            raise ParameterError(
                f"Shape count range must satisfy 1 <= min <= max, got [{self.min_groups}, {self.max_groups}]"
            )
        if self.max_instances < 1 or self.max_instances > 3:
            raise ParameterError("max_instances must be between 1 and 3")
