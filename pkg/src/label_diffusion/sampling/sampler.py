"""Guided reverse diffusion from noise to a binary mask.

Every request owns a generator seeded with ``request.seed``; it draws x_T
and, for DDPM, the per-step noise. Batched and sequential sampling therefore
consume identical random streams.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import torch

from ..codec.image_encoder import image_to_tensor
from ..codec.label_codec import LATENT_FACTOR, decode_label
from ..denoiser.model import LabelDiffusionModel
from ..diffusion.process import cfg_combine, ddim_step, ddpm_step, recover_x0
from ..diffusion.schedule import ddim_timesteps
from ..errors import BatchError, ShapeError
from ..models.codec import DecodeStrategy
from ..models.diffusion import GuidanceConfig, SamplerKind

logger = logging.getLogger(__name__)

TRAJECTORY_TIMESTEPS = (999, 759, 519, 279, 0)


@dataclass
class SampleRequest:
    image: np.ndarray
    phrase: str
    guidance: GuidanceConfig = field(default_factory=GuidanceConfig)
    decode: DecodeStrategy = field(default_factory=DecodeStrategy)
    seed: int = 0

    def __post_init__(self):
        if self.image.ndim != 3 or self.image.shape[2] != 3:
            raise ShapeError(f"Request image must be (H, W, 3), got {self.image.shape}")
        height, width = self.image.shape[:2]
        if height % LATENT_FACTOR or width % LATENT_FACTOR:
            raise ShapeError(f"Image size {height}x{width} is not divisible by {LATENT_FACTOR}")

    @property
    def size(self) -> Tuple[int, int]:
        return int(self.image.shape[0]), int(self.image.shape[1])

    def record(self) -> Dict[str, str]:
        """Side-car description of how the mask was produced."""
        return {
            "phrase": self.phrase,
            "seed": str(self.seed),
            "sampler": self.guidance.sampler_kind.value,
            "steps": str(self.guidance.ddim_steps),
            "guidance_scale": repr(float(self.guidance.scale)),
            "decode_strategy": self.decode.kind.value,
            "threshold": repr(float(self.decode.threshold)),
        }


@dataclass
class StepRecord:
    t: int
    eps_cond: torch.Tensor
    eps_uncond: Optional[torch.Tensor]
    eps_guided: torch.Tensor


@dataclass
class SamplingTrace:
    """Optional instrumentation filled in while sampling."""

    record_steps: bool = False
    capture_x0: bool = False
    denoiser_calls: int = 0
    steps: List[StepRecord] = field(default_factory=list)
    x0_estimates: List[Tuple[int, torch.Tensor]] = field(default_factory=list)

    def x0_at(self, target: int) -> torch.Tensor:
        """x0 estimate from the first visited timestep at or below ``target``."""
        for t, estimate in self.x0_estimates:
            if t <= target:
                return estimate
        raise KeyError(f"No x0 estimate captured at or below t={target}")


def count_denoiser_calls(config: GuidanceConfig, total_steps: int = 1000) -> int:
    """Denoiser forward passes per request."""
    steps = config.ddim_steps if config.sampler_kind is SamplerKind.DDIM else total_steps
    return 2 * steps if config.guidance_enabled else steps


def _schedule_pairs(config: GuidanceConfig, total_steps: int) -> List[Tuple[int, int]]:
    if config.sampler_kind is SamplerKind.DDIM:
        visited = ddim_timesteps(total_steps, config.ddim_steps)
    else:
        visited = list(range(total_steps - 1, -1, -1))
    return list(zip(visited, visited[1:] + [-1]))


def _check_homogeneous(requests: Sequence[SampleRequest]) -> None:
    size = requests[0].size
    guidance = requests[0].guidance
    for index, request in enumerate(requests[1:], start=1):
        if request.size != size:
            raise BatchError(f"Request {index} has image size {request.size}, batch uses {size}")
        if request.guidance != guidance:
            raise BatchError(f"Request {index} has a different guidance config than request 0")


def sample_latents(
    requests: Sequence[SampleRequest],
    model: LabelDiffusionModel,
    trace: Optional[SamplingTrace] = None,
    allow_untrained: bool = False,
) -> torch.Tensor:
    """Run the reverse process for a homogeneous batch; returns x0 estimates (B, 1, h, w)."""
    _check_homogeneous(requests)
    model.check_ready(allow_untrained=allow_untrained)
    guidance = requests[0].guidance
    schedule = model.schedule
    guidance.validate_for(schedule.total_steps)
    dtype = model.dtype
    model.eval()

    height, width = requests[0].size
    latent_shape = (1, height // LATENT_FACTOR, width // LATENT_FACTOR)
    generators = [torch.Generator().manual_seed(int(r.seed)) for r in requests]

    with torch.no_grad():
        images = torch.stack([image_to_tensor(r.image) for r in requests])
        image_latent = model.encode_images(images)
        cond = model.phrase_encoder.encode([r.phrase for r in requests])
        null = model.phrase_encoder.null(len(requests))
        xt = torch.stack([torch.randn(latent_shape, generator=g, dtype=dtype) for g in generators])

        for t, t_prev in _schedule_pairs(guidance, schedule.total_steps):
            eps_cond = model.predict_noise(xt, image_latent, t, cond)
            eps_uncond = None
            calls = 1
            if guidance.guidance_enabled:
                eps_uncond = model.predict_noise(xt, image_latent, t, null)
                eps_guided = cfg_combine(eps_uncond, eps_cond, guidance.scale)
                calls = 2
            else:
                eps_guided = eps_cond
            if trace is not None:
                trace.denoiser_calls += calls
                if trace.record_steps:
                    trace.steps.append(StepRecord(t, eps_cond, eps_uncond, eps_guided))
                if trace.capture_x0:
                    trace.x0_estimates.append((t, recover_x0(xt, t, eps_guided, schedule)))

            if guidance.sampler_kind is SamplerKind.DDIM:
                xt = ddim_step(xt, t, t_prev, eps_guided, schedule)
            else:
                noise = None
                if t > 0:
                    noise = torch.stack([torch.randn(latent_shape, generator=g, dtype=dtype) for g in generators])
                xt = ddpm_step(xt, t, eps_guided, schedule, noise)
    return xt


def sample_batch(
    requests: Sequence[SampleRequest],
    model: LabelDiffusionModel,
    trace: Optional[SamplingTrace] = None,
    allow_untrained: bool = False,
) -> List[np.ndarray]:
    """Masks for a batch of same-size, same-guidance requests, in request order."""
    if not requests:
        return []
    x0 = sample_latents(requests, model, trace, allow_untrained)
    height, width = requests[0].size
    masks = [
        decode_label(x0[i], height, width, request.decode, model.label_decoder)
        for i, request in enumerate(requests)
    ]
    logger.debug(f"Sampled {len(masks)} masks at {height}x{width}")
    return masks


def sample_mask(
    request: SampleRequest,
    model: LabelDiffusionModel,
    trace: Optional[SamplingTrace] = None,
    allow_untrained: bool = False,
) -> np.ndarray:
    return sample_batch([request], model, trace, allow_untrained)[0]


__all__ = [
    "SampleRequest",
    "SamplingTrace",
    "StepRecord",
    "TRAJECTORY_TIMESTEPS",
    "count_denoiser_calls",
    "sample_batch",
    "sample_latents",
    "sample_mask",
]
