from dataclasses import dataclass
from enum import Enum

from ..errors import ParameterError


class DecodeKind(Enum):
    BILINEAR_CFG = "bilinear_cfg"
    NEAREST = "nearest"
    LEARNED_DECODER = "learned_decoder"


@dataclass(frozen=True)
class DecodeStrategy:
    """How a 1-channel label latent becomes a full-resolution binary mask."""

    kind: DecodeKind = DecodeKind.BILINEAR_CFG
    threshold: float = 0.0

    def __post_init__(self):
        if isinstance(self.kind, str):
            try:
                object.__setattr__(self, "kind", DecodeKind(self.kind.lower()))
            except ValueError:
                raise ParameterError(f"Unknown decode strategy '{self.kind}'") from None
        if not -1.0 < self.threshold < 1.0:
            raise ParameterError(f"Decode threshold must lie in (-1, 1), got {self.threshold}")
