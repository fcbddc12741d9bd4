from .codec import DecodeKind, DecodeStrategy
from .config import DENOISER_IN_CHANNELS, DenoiserConfig, ModelConfig, TrainConfig
from .diffusion import GuidanceConfig, SamplerKind, ScheduleKind
from .evaluation import AR_COLUMNS, ARReport, EvalRecord, ThresholdGrid
from .scene import DEFAULT_PALETTE, Number, PhraseAnnotation, Scene, SceneSpec, ThingStuff

__all__ = [
    "AR_COLUMNS",
    "ARReport",
    "DENOISER_IN_CHANNELS",
    "DenoiserConfig",
    "ModelConfig",
    "TrainConfig",
    "DEFAULT_PALETTE",
    "DecodeKind",
    "DecodeStrategy",
    "EvalRecord",
    "GuidanceConfig",
    "Number",
    "PhraseAnnotation",
    "SamplerKind",
    "Scene",
    "SceneSpec",
    "ScheduleKind",
    "ThingStuff",
    "ThresholdGrid",
]
