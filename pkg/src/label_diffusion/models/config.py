from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, Tuple

from ..errors import ParameterError
from .diffusion import ScheduleKind

LABEL_CHANNELS = 1
IMAGE_CHANNELS = 4
DENOISER_IN_CHANNELS = LABEL_CHANNELS + IMAGE_CHANNELS


@dataclass(frozen=True)
class DenoiserConfig:
    """U-Net topology. Levels are indexed from the finest (0) to the coarsest."""

    base_width: int = 32
    channel_mults: Tuple[int, ...] = (1, 2, 4)
    heads: int = 1
    injection_levels: Tuple[int, ...] = (1, 2)
    cross_attention_levels: Tuple[int, ...] = (1, 2)
    time_dim: int = 128

    def __post_init__(self):
        object.__setattr__(self, "channel_mults", tuple(int(m) for m in self.channel_mults))
        object.__setattr__(self, "injection_levels", tuple(int(lv) for lv in self.injection_levels))
        object.__setattr__(self, "cross_attention_levels", tuple(int(lv) for lv in self.cross_attention_levels))
        if self.base_width < 1 or not self.channel_mults or any(m < 1 for m in self.channel_mults):
            raise ParameterError("Denoiser widths must be positive")
        levels = range(len(self.channel_mults))
        for level in self.injection_levels + self.cross_attention_levels:
            if level not in levels:
                raise ParameterError(f"Attention level {level} outside the {len(self.channel_mults)} U-Net levels")
        if len(set(self.injection_levels)) != len(self.injection_levels):
            raise ParameterError("Injection levels must be distinct")
        for width in self.widths:
            if width % self.heads:
                raise ParameterError(f"Channel width {width} is not divisible by {self.heads} heads")
        if self.time_dim < 2 or self.time_dim % 2:
            raise ParameterError(f"time_dim must be an even integer >= 2, got {self.time_dim}")

    @property
    def widths(self) -> Tuple[int, ...]:
        return tuple(self.base_width * m for m in self.channel_mults)

    @property
    def attention_levels(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.injection_levels) | set(self.cross_attention_levels)))

    @property
    def adapter_widths(self) -> Tuple[int, ...]:
        return tuple(self.widths[level] for level in self.injection_levels)

    @property
    def spatial_divisor(self) -> int:
        return 2 ** (len(self.channel_mults) - 1)


@dataclass(frozen=True)
class ModelConfig:
    denoiser: DenoiserConfig = field(default_factory=DenoiserConfig)
    text_dim: int = 64
    adapter_tokens: int = 4
    image_hidden: int = 32
    schedule_kind: ScheduleKind = ScheduleKind.LINEAR
    total_steps: int = 1000
    beta_start: float = 1e-4
    beta_end: float = 0.02

    def __post_init__(self):
        if isinstance(self.denoiser, dict):
            object.__setattr__(self, "denoiser", DenoiserConfig(**self.denoiser))
        if isinstance(self.schedule_kind, str):
            object.__setattr__(self, "schedule_kind", ScheduleKind(self.schedule_kind.lower()))
        if self.text_dim < 1 or self.adapter_tokens < 0 or self.image_hidden < 2:
            raise ParameterError("Model dimensions must be positive")
        if self.total_steps < 1:
            raise ParameterError(f"T must be at least 1, got {self.total_steps}")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["denoiser"]["channel_mults"] = list(self.denoiser.channel_mults)
        data["denoiser"]["injection_levels"] = list(self.denoiser.injection_levels)
        data["denoiser"]["cross_attention_levels"] = list(self.denoiser.cross_attention_levels)
        data["schedule_kind"] = self.schedule_kind.value
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ModelConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f"Unknown model config keys: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-4
    batch_size: int = 16
    epochs: int = 20
    p_drop: float = 0.1
    total_steps: int = 1000
    seed: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    log_interval: int = 10
    checkpoint_interval: int = 0
    max_steps: int = 0
    num_workers: int = 0
    label_decoder_epochs: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ParameterError(f"Learning rate must be > 0, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ParameterError(f"Batch size must be >= 1, got {self.batch_size}")
        if self.epochs < 0 or self.max_steps < 0:
            raise ParameterError("epochs and max_steps must be nonnegative")
        if not 0.0 <= self.p_drop <= 1.0:
            raise ParameterError(f"p_drop must lie in [0, 1], got {self.p_drop}")
        if self.total_steps < 1:
            raise ParameterError(f"T must be at least 1, got {self.total_steps}")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0) or self.adam_eps <= 0:
            raise ParameterError("Invalid Adam hyperparameters")
        if self.log_interval < 1:
            raise ParameterError(f"log_interval must be >= 1, got {self.log_interval}")
