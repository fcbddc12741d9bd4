from .attention import (
    CrossAttention,
    InjectedSelfAttention,
    attention_probabilities,
    cross_attention,
    injected_self_attention,
)
from .model import LabelDiffusionModel
from .unet import LabelUNet, denoiser_forward, timestep_embedding

__all__ = [
    "CrossAttention",
    "InjectedSelfAttention",
    "LabelDiffusionModel",
    "LabelUNet",
    "attention_probabilities",
    "cross_attention",
    "denoiser_forward",
    "injected_self_attention",
    "timestep_embedding",
]
