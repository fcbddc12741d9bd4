from dataclasses import dataclass
from enum import Enum

from ..errors import ParameterError


class SamplerKind(Enum):
    DDPM = "ddpm"
    DDIM = "ddim"


class ScheduleKind(Enum):
    LINEAR = "linear"
    COSINE = "cosine"


@dataclass(frozen=True)
class GuidanceConfig:
    """Sampling-time settings: guidance scale, stepper and DDIM step count."""

    scale: float = 7.5
    sampler_kind: SamplerKind = SamplerKind.DDIM
    ddim_steps: int = 50

    def __post_init__(self):
        if isinstance(self.sampler_kind, str):
            object.__setattr__(self, "sampler_kind", SamplerKind(self.sampler_kind.lower()))
        if self.scale < 0:
            raise ParameterError(f"Guidance scale must be nonnegative, got {self.scale}")
        if self.ddim_steps < 1:
            raise ParameterError(f"ddim_steps must be a positive integer, got {self.ddim_steps}")

    @property
    def guidance_enabled(self) -> bool:
        # w == 1 reduces the guided prediction to the conditional one.
        return self.scale != 1.0

    def validate_for(self, total_steps: int) -> None:
        if self.sampler_kind is SamplerKind.DDIM and self.ddim_steps > total_steps:
            raise ParameterError(
                f"ddim_steps={self.ddim_steps} exceeds the schedule length T={total_steps}"
            )
